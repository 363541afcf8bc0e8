#include "hsd/domain.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hsd {

MatrixPoint::MatrixPoint(CMatrix entries) : m_(std::move(entries)) {
    if (m_.rows() <= 0 || m_.cols() <= 0) {
        throw DomainError("matrix point must have positive dimensions");
    }
    if (!m_.allFinite()) {
        throw DomainError("matrix point has non-finite entries");
    }
}

MatrixPoint MatrixPoint::zero(Index p, Index q) { return MatrixPoint(CMatrix::Zero(p, q)); }

MatrixPoint MatrixPoint::scalar(Complex z) {
    CMatrix m(1, 1);
    m(0, 0) = z;
    return MatrixPoint(std::move(m));
}

MatrixPoint MatrixPoint::diagonal(Index p, Index q, std::span<const Complex> entries) {
    if (static_cast<Index>(entries.size()) != std::min(p, q)) {
        throw DomainError("diagonal point needs exactly min(p, q) entries");
    }
    CMatrix m = CMatrix::Zero(p, q);
    for (Index i = 0; i < static_cast<Index>(entries.size()); ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return MatrixPoint(std::move(m));
}

RVector singular_values(const CMatrix& z) {
    if (z.rows() == 1 && z.cols() == 1) return RVector::Constant(1, std::abs(z(0, 0)));
    Eigen::JacobiSVD<CMatrix> svd(z);
    return svd.singularValues();
}

double sigma_max(const CMatrix& z) { return singular_values(z)(0); }

bool contains(const CMatrix& z, double margin) { return sigma_max(z) < 1.0 - margin; }

bool contains(Index p, Index q, const CMatrix& z, double margin) {
    if (z.rows() != p || z.cols() != q) {
        std::ostringstream os;
        os << "expected a " << p << "x" << q << " matrix, got " << z.rows() << "x" << z.cols();
        throw DomainError(os.str());
    }
    return contains(z, margin);
}

void require_inside(const MatrixPoint& z, std::string_view what, const DomainOptions& opts) {
    const double s = sigma_max(z.matrix());
    if (!(s <= 1.0 - opts.membership_margin)) {
        std::ostringstream os;
        os.precision(17);
        os << what << " is outside the domain (sigma_max = " << s << ")";
        throw DomainError(os.str());
    }
}

void require_same_shape(const MatrixPoint& a, const MatrixPoint& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        std::ostringstream os;
        os << "dimension mismatch: " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
        throw DomainError(os.str());
    }
}

CMatrix SingularDecomposition::reconstruct() const {
    CMatrix d = CMatrix::Zero(u.cols(), v.cols());
    for (Index i = 0; i < sigma.size(); ++i) d(i, i) = sigma(i);
    return u * d * v.adjoint();
}

SingularDecomposition svd_reduce(const MatrixPoint& z) {
    require_inside(z, "svd_reduce input");
    Eigen::JacobiSVD<CMatrix> svd(z.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

CMatrix hermitian_sqrt(const CMatrix& h, bool inverse, double floor, bool* clamped) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    if (eig.info() != Eigen::Success) throw NumericalError("Hermitian eigendecomposition failed");
    RVector ev = eig.eigenvalues();
    bool hit = false;
    for (Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < floor) {
            ev(i) = floor;
            hit = true;
        }
        ev(i) = inverse ? 1.0 / std::sqrt(ev(i)) : std::sqrt(ev(i));
    }
    if (clamped) *clamped = hit;
    const CMatrix& q = eig.eigenvectors();
    return q * ev.asDiagonal() * q.adjoint();
}

MobiusMap::MobiusMap(const MatrixPoint& base, const DomainOptions& opts) : base_(base), opts_(opts) {
    const CMatrix& a = base.matrix();
    base_adj_ = a.adjoint();
    identity_ = a.isZero(0.0);
    if (identity_) return;
    const Index p = a.rows();
    const Index q = a.cols();
    bool c1 = false;
    bool c2 = false;
    left_ = hermitian_sqrt(CMatrix::Identity(p, p) - a * base_adj_, true, opts.eigen_floor, &c1);
    right_ = hermitian_sqrt(CMatrix::Identity(q, q) - base_adj_ * a, false, opts.eigen_floor, &c2);
    clamped_ = c1 || c2;
}

CMatrix MobiusMap::apply(const CMatrix& z) const {
    if (identity_) return z;
    const Index q = z.cols();
    const CMatrix m = CMatrix::Identity(q, q) - base_adj_ * z;
    // (Z - A) M^{-1} = (M^{-T} (Z - A)^T)^T, solved without forming the inverse.
    Eigen::PartialPivLU<CMatrix> lu(m.transpose());
    if (lu.rcond() < 1e-14) throw NumericalError("Mobius translation: I - A*Z is numerically singular");
    const CMatrix zm = lu.solve((z - base_.matrix()).transpose()).transpose();
    return left_ * zm * right_;
}

CMatrix MobiusMap::differential(const CMatrix& z, const CMatrix& x) const {
    if (identity_) return x;
    const Index q = z.cols();
    const CMatrix m_inv = (CMatrix::Identity(q, q) - base_adj_ * z).inverse();
    const CMatrix inner = x * m_inv + (z - base_.matrix()) * m_inv * base_adj_ * x * m_inv;
    return left_ * inner * right_;
}

MobiusMap MobiusMap::inverse() const { return MobiusMap(MatrixPoint(-base_.matrix()), opts_); }

MatrixPoint mobius_translate(const MatrixPoint& base, const MatrixPoint& z) {
    require_same_shape(base, z);
    require_inside(base, "Mobius base");
    require_inside(z, "Mobius argument");
    return MobiusMap(base)(z);
}

GeodesicSegment::GeodesicSegment(const MatrixPoint& start, const MatrixPoint& end, const DomainOptions& opts)
    : start_(start), end_(end), back_(MatrixPoint(-start.matrix()), opts) {
    require_same_shape(start, end);
    const MobiusMap to_origin(start, opts);
    const CMatrix w = to_origin.apply(end.matrix());
    clamped_ = to_origin.ill_conditioned() || back_.ill_conditioned();
    const Index r = start.rank();
    Eigen::JacobiSVD<CMatrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge in geodesic construction");
    u_ = svd.matrixU().leftCols(r);
    v_ = svd.matrixV().leftCols(r);
    rapidity_.resize(r);
    for (Index i = 0; i < r; ++i) {
        double s = svd.singularValues()(i);
        if (!std::isfinite(s)) throw NumericalError("geodesic construction produced a non-finite singular value");
        // Endpoints that are inside the domain can still round to s >= 1 when both
        // sit within ~1e-8 of the boundary.
        if (s > kMaxTranslatedSigma) {
            s = kMaxTranslatedSigma;
            clamped_ = true;
        }
        rapidity_(i) = std::atanh(s);
    }
    length_ = 2.0 * rapidity_.norm();
}

CMatrix GeodesicSegment::radial(double t) const {
    RVector d(rapidity_.size());
    for (Index i = 0; i < d.size(); ++i) d(i) = std::tanh(t * rapidity_(i));
    return u_ * d.asDiagonal() * v_.adjoint();
}

CMatrix GeodesicSegment::radial_velocity(double t) const {
    RVector d(rapidity_.size());
    for (Index i = 0; i < d.size(); ++i) {
        const double c = std::cosh(t * rapidity_(i));
        d(i) = rapidity_(i) / (c * c);
    }
    return u_ * d.asDiagonal() * v_.adjoint();
}

CMatrix GeodesicSegment::evaluate(double t) const {
    if (t == 0.0) return start_.matrix();
    return back_.apply(radial(t));
}

CMatrix GeodesicSegment::tangent(double t) const { return back_.differential(radial(t), radial_velocity(t)); }

GeodesicSegment geodesic(const MatrixPoint& a, const MatrixPoint& b) {
    require_inside(a, "geodesic start");
    require_inside(b, "geodesic end");
    return GeodesicSegment(a, b);
}

double distance_from_origin(const CMatrix& z) {
    const RVector s = singular_values(z);
    double acc = 0.0;
    for (Index i = 0; i < s.size(); ++i) {
        const double a = 2.0 * std::atanh(s(i));
        acc += a * a;
    }
    return std::sqrt(acc);
}

double distance(const MatrixPoint& a, const MatrixPoint& b) {
    require_same_shape(a, b);
    require_inside(a, "distance argument");
    require_inside(b, "distance argument");
    return distance_from_origin(MobiusMap(a).apply(b.matrix()));
}

double shilov_defect(const MatrixPoint& z) {
    const RVector s = singular_values(z.matrix());
    if (s(0) > 1.0 + 1e-12) throw DomainError("shilov_defect: point is outside the closed matrix ball");
    return std::clamp(1.0 - s(s.size() - 1), 0.0, 1.0);
}

}  // namespace hsd
