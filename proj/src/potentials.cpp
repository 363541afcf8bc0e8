#include "hsd/potentials.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace hsd {

namespace {

constexpr double kFdStep = 1e-5;

double log_one_minus_sq(double s) {
    // log(1 - s^2) = log(1 - s) + log(1 + s), with the defect floored.
    const double defect = std::max(1.0 - s, kPotentialDefectFloor);
    return std::log(defect) + std::log1p(s);
}

double rho_from_singular_values(const RVector& s) {
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) acc -= log_one_minus_sq(s(i));
    return acc;
}

void require_open(const MatrixPoint& z, const char* what) {
    if (!(sigma_max(z.matrix()) < 1.0)) throw DomainError(std::string(what) + " is outside the domain");
}

// 2 Im tr((I - Z*Z)^{-1} Z* x): d^C rho_0 paired with x.
double dC_rho_origin(const CMatrix& z, const CMatrix& x) {
    const Index q = z.cols();
    const CMatrix zadj = z.adjoint();
    const CMatrix m = CMatrix::Identity(q, q) - zadj * z;
    return 2.0 * (m.ldlt().solve(zadj * x)).trace().imag();
}

}  // namespace

double rho_origin(const MatrixPoint& z) {
    require_open(z, "rho_origin argument");
    return rho_from_singular_values(singular_values(z.matrix()));
}

bool potential_near_boundary(const MatrixPoint& z) {
    return 1.0 - sigma_max(z.matrix()) < kPotentialDefectFloor;
}

double rho_at(const MatrixPoint& center, const MatrixPoint& z) {
    require_same_shape(center, z);
    require_open(center, "potential center");
    require_open(z, "rho_at argument");
    return rho_from_singular_values(singular_values(MobiusMap(center).apply(z.matrix())));
}

double dC_rho(const MatrixPoint& center, const MatrixPoint& z, const CMatrix& tangent, DerivativeMode mode) {
    require_same_shape(center, z);
    if (tangent.rows() != z.rows() || tangent.cols() != z.cols()) {
        throw DomainError("dC_rho: tangent has the wrong shape");
    }
    if (mode == DerivativeMode::analytic) {
        const CMatrix& zm = z.matrix();
        double value = dC_rho_origin(zm, tangent);
        if (!center.matrix().isZero(0.0)) {
            // Subtract dv_A with v_A = -2 arg det(I - A*Z).
            const Index q = zm.cols();
            const CMatrix aadj = center.matrix().adjoint();
            const CMatrix m = CMatrix::Identity(q, q) - aadj * zm;
            value -= 2.0 * (m.partialPivLu().solve(aadj * tangent)).trace().imag();
        }
        return value;
    }
    // d^C rho (x) = -d rho (i x).
    const double norm = tangent.norm();
    if (norm == 0.0) return 0.0;
    const CMatrix dir = Complex(0.0, 1.0) * tangent / norm;
    const double fp = rho_at(center, MatrixPoint(z.matrix() + kFdStep * dir));
    const double fm = rho_at(center, MatrixPoint(z.matrix() - kFdStep * dir));
    return -norm * (fp - fm) / (2.0 * kFdStep);
}

Complex complex_hessian(const CMatrix& z, const CMatrix& x, const CMatrix& y) {
    const Index p = z.rows();
    const Index q = z.cols();
    const CMatrix left = (CMatrix::Identity(p, p) - z * z.adjoint()).inverse();
    const CMatrix right = (CMatrix::Identity(q, q) - z.adjoint() * z).inverse();
    return (left * x * right * y.adjoint()).trace();
}

double kahler_form(const CMatrix& z, const CMatrix& x, const CMatrix& y, DerivativeMode mode) {
    if (mode == DerivativeMode::analytic) return -4.0 * complex_hessian(z, x, y).imag();
    // omega(x, y) = D_x[d^C rho(y)] - D_y[d^C rho(x)] for constant fields x, y.
    const double h = kFdStep;
    const double dx = (dC_rho_origin(z + h * x, y) - dC_rho_origin(z - h * x, y)) / (2.0 * h);
    const double dy = (dC_rho_origin(z + h * y, x) - dC_rho_origin(z - h * y, x)) / (2.0 * h);
    return dx - dy;
}

double riemannian_metric(const CMatrix& z, const CMatrix& x, const CMatrix& y) {
    return 4.0 * complex_hessian(z, x, y).real();
}

PotentialField::PotentialField(MatrixPoint center) : center_(std::move(center)), to_origin_(center_) {
    require_open(center_, "potential center");
}

double PotentialField::value(const MatrixPoint& z) const {
    require_same_shape(center_, z);
    require_open(z, "potential argument");
    return rho_from_singular_values(singular_values(to_origin_.apply(z.matrix())));
}

double PotentialField::dC(const MatrixPoint& z, const CMatrix& tangent, DerivativeMode mode) const {
    return dC_rho(center_, z, tangent, mode);
}

ConjugatePair::ConjugatePair(MatrixPoint anchor) : anchor_(std::move(anchor)) {
    require_open(anchor_, "conjugate pair anchor");
    anchor_adj_ = anchor_.matrix().adjoint();
    trivial_ = anchor_.matrix().isZero(0.0);
    const RVector s = singular_values(anchor_.matrix());
    for (Index i = 0; i < s.size(); ++i) log_det_anchor_ += log_one_minus_sq(s(i));
}

Complex ConjugatePair::kernel_det(const CMatrix& z) const {
    const Index q = z.cols();
    return (CMatrix::Identity(q, q) - anchor_adj_ * z).determinant();
}

double ConjugatePair::u(const MatrixPoint& z) const {
    require_same_shape(anchor_, z);
    if (trivial_) return 0.0;
    return log_det_anchor_ - 2.0 * std::log(std::abs(kernel_det(z.matrix())));
}

Complex log_det_kernel(const CMatrix& a, const CMatrix& z) {
    const CMatrix k = a.adjoint() * z;
    if (k.rows() == 1) return std::log(1.0 - k(0, 0));
    Eigen::ComplexEigenSolver<CMatrix> eig(k, false);
    if (eig.info() != Eigen::Success) throw NumericalError("eigenvalues of Q*Z did not converge");
    Complex acc = 0.0;
    for (Index i = 0; i < eig.eigenvalues().size(); ++i) acc += std::log(1.0 - eig.eigenvalues()(i));
    return acc;
}

double ConjugatePair::v(const MatrixPoint& z) const {
    require_same_shape(anchor_, z);
    if (trivial_) return 0.0;
    return -2.0 * log_det_kernel(anchor_.matrix(), z.matrix()).imag();
}

double ConjugatePair::v_principal(const MatrixPoint& z) const {
    require_same_shape(anchor_, z);
    if (trivial_) return 0.0;
    return -2.0 * std::arg(kernel_det(z.matrix()));
}

int ConjugatePair::branch_index(const MatrixPoint& z) const {
    return static_cast<int>(std::lround((v(z) - v_principal(z)) / (4.0 * std::numbers::pi)));
}

namespace {

constexpr double kMaxStep = std::numbers::pi / 4.0;
constexpr int kMaxDepth = 20;
constexpr int kInitialIntervals = 16;

struct PhaseWalker {
    const ConjugatePair& pair;
    const GeodesicSegment& path;
    TrackedPhase& out;

    Complex at(double t) const {
        const Complex d = pair.kernel_det(path.evaluate(t));
        if (std::abs(d) < ConjugatePair::kBranchFloor) out.ambiguous = true;
        return d;
    }

    double walk(double t0, double t1, Complex f0, Complex f1, int depth) {
        const double step = std::arg(f1 / f0);
        if (std::abs(step) <= kMaxStep || depth >= kMaxDepth) {
            if (std::abs(step) > kMaxStep) out.capped = true;
            ++out.intervals;
            out.max_depth = std::max(out.max_depth, depth);
            return step;
        }
        const double tm = 0.5 * (t0 + t1);
        const Complex fm = at(tm);
        return walk(t0, tm, f0, fm, depth + 1) + walk(tm, t1, fm, f1, depth + 1);
    }
};

}  // namespace

TrackedPhase ConjugatePair::track_phase(const GeodesicSegment& path) const {
    TrackedPhase out;
    if (trivial_) return out;
    PhaseWalker walker{*this, path, out};
    Complex prev = walker.at(0.0);
    const double arg0 = std::arg(prev);
    for (int k = 1; k <= kInitialIntervals; ++k) {
        const double t0 = static_cast<double>(k - 1) / kInitialIntervals;
        const double t1 = static_cast<double>(k) / kInitialIntervals;
        const Complex next = walker.at(t1);
        out.increment += walker.walk(t0, t1, prev, next, 0);
        prev = next;
    }
    // Branch crossings of the principal arg between the endpoints.
    const double principal = std::arg(prev) - arg0;
    out.windings = static_cast<int>(std::lround((out.increment - principal) / (2.0 * std::numbers::pi)));
    return out;
}

double ConjugatePair::v_along(const GeodesicSegment& path, TrackedPhase* phase) const {
    require_same_shape(anchor_, path.start());
    if (trivial_) {
        if (phase) *phase = TrackedPhase{};
        return 0.0;
    }
    const TrackedPhase tracked = track_phase(path);
    if (phase) *phase = tracked;
    return v_principal(path.start()) - 2.0 * tracked.increment;
}

ConjugatePair conjugate_pair(const MatrixPoint& q) { return ConjugatePair(q); }

}  // namespace hsd
