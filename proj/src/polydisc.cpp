#include "hsd/polydisc.hpp"

#include "hsd/nelder_mead.hpp"
#include "hsd/potentials.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <random>

namespace hsd {

PolydiscPoint::PolydiscPoint(Index p, Index q, std::vector<Complex> coords) : p_(p), q_(q), coords_(std::move(coords)) {
    if (p <= 0 || q <= 0) throw DomainError("polydisc point needs positive embedding dimensions");
    if (static_cast<Index>(coords_.size()) != std::min(p, q)) throw DomainError("polydisc point needs min(p, q) coordinates");
    for (const Complex& w : coords_) {
        if (!(std::abs(w) < 1.0)) throw DomainError("polydisc coordinate outside the unit disc");
    }
}

MatrixPoint embed(const PolydiscPoint& w) { return MatrixPoint::diagonal(w.rows(), w.cols(), w.coords()); }

bool is_diagonal(const MatrixPoint& z) {
    for (Index i = 0; i < z.rows(); ++i)
        for (Index j = 0; j < z.cols(); ++j)
            if (i != j && z(i, j) != Complex(0.0)) return false;
    return true;
}

double disc_triangle_area(const DiscTriangle& t) {
    const auto to_origin = [&](Complex z) { return (z - t.p) / (1.0 - std::conj(t.p) * z); };
    return disc_signed_closed_form(to_origin(t.q), to_origin(t.r));
}

double area_additivity_check(std::span<const DiscTriangle> factors) {
    if (factors.empty()) throw DomainError("additivity check needs at least one factor");
    const auto r = static_cast<Index>(factors.size());
    std::vector<Complex> ps, qs, rs;
    double sum = 0.0;
    for (const DiscTriangle& t : factors) {
        ps.push_back(t.p);
        qs.push_back(t.q);
        rs.push_back(t.r);
        sum += disc_triangle_area(t);
    }
    const AreaResult product = area_vformula(MatrixPoint::diagonal(r, r, ps), MatrixPoint::diagonal(r, r, qs),
                                             MatrixPoint::diagonal(r, r, rs));
    return std::abs(product.value - sum);
}

namespace {

// Each polydisc coordinate is written in geodesic polar form w = tanh(|c|/2) c/|c|,
// so the search runs over all of R^{2r} without constraints.
Complex coord_from_param(double re, double im) {
    const double n = std::hypot(re, im);
    if (n == 0.0) return 0.0;
    return Complex(re, im) * (std::tanh(0.5 * n) / n);
}

void param_from_coord(Complex w, double& re, double& im) {
    const double a = std::abs(w);
    if (a == 0.0) {
        re = im = 0.0;
        return;
    }
    const Complex c = w * (2.0 * std::atanh(a) / a);
    re = c.real();
    im = c.imag();
}

struct ProjectionProblem {
    const MatrixPoint& target;
    Index r;

    std::vector<Complex> coords(const Eigen::VectorXd& x) const {
        std::vector<Complex> w(static_cast<std::size_t>(r));
        for (Index i = 0; i < r; ++i) w[static_cast<std::size_t>(i)] = coord_from_param(x(2 * i), x(2 * i + 1));
        return w;
    }

    Eigen::VectorXd params(const std::vector<Complex>& w) const {
        Eigen::VectorXd x(2 * r);
        for (Index i = 0; i < r; ++i) param_from_coord(w[static_cast<std::size_t>(i)], x(2 * i), x(2 * i + 1));
        return x;
    }

    double objective(const Eigen::VectorXd& x) const {
        const MatrixPoint foot = MatrixPoint::diagonal(target.rows(), target.cols(), coords(x));
        const double d = distance_from_origin(MobiusMap(foot).apply(target.matrix()));
        return d * d;
    }
};

// Cyclic coordinate line search around x; returns the final bracket half-width.
double refine(const ProjectionProblem& prob, Eigen::VectorXd& x, double& fx, double tol, int& evals) {
    double step = 1e-2;
    const double improvement_floor = std::max(1e-14 * tol * tol, 1e-300);
    for (int sweep = 0; sweep < 200 && step >= tol; ++sweep) {
        const double before = fx;
        double moved = 0.0;
        for (Index i = 0; i < x.size(); ++i) {
            const double xi = x(i);
            const auto line = [&](double t) {
                Eigen::VectorXd y = x;
                y(i) = t;
                ++evals;
                return prob.objective(y);
            };
            const auto [best_t, best_f] =
                boost::math::tools::brent_find_minima(line, xi - step, xi + step, std::numeric_limits<double>::digits);
            if (best_f < fx) {
                moved = std::max(moved, std::abs(best_t - xi));
                x(i) = best_t;
                fx = best_f;
            }
        }
        // Minimizer on the bracket edge: widen; otherwise tighten around the moves.
        if (moved >= 0.99 * step) {
            step *= 2.0;
        } else {
            step = std::max(0.5 * step, 2.0 * moved);
            if (moved == 0.0) step = 0.1 * step;
        }
        if (before - fx < improvement_floor && moved < tol) break;
    }
    return step;
}

// The foot point is where the geodesic to the target leaves the polydisc
// orthogonally. Newton on that condition (g(tangent, E_kk) = g(tangent, iE_kk) = 0)
// pins x down to rounding, well past what comparing distances can resolve.
Eigen::VectorXd stationarity(const ProjectionProblem& prob, const Eigen::VectorXd& x) {
    const MatrixPoint foot = MatrixPoint::diagonal(prob.target.rows(), prob.target.cols(), prob.coords(x));
    const CMatrix dir = GeodesicSegment(foot, prob.target).tangent(0.0);
    Eigen::VectorXd f(2 * prob.r);
    for (Index i = 0; i < prob.r; ++i) {
        CMatrix e = CMatrix::Zero(prob.target.rows(), prob.target.cols());
        e(i, i) = 1.0;
        f(2 * i) = riemannian_metric(foot.matrix(), dir, e);
        e(i, i) = Complex(0.0, 1.0);
        f(2 * i + 1) = riemannian_metric(foot.matrix(), dir, e);
    }
    return f;
}

void newton_polish(const ProjectionProblem& prob, Eigen::VectorXd& x, double& fx, int& evals) {
    constexpr double h = 1e-6;
    Eigen::VectorXd f = stationarity(prob, x);
    for (int it = 0; it < 8 && f.norm() > 1e-15; ++it) {
        Eigen::MatrixXd jac(f.size(), x.size());
        for (Index j = 0; j < x.size(); ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp(j) += h;
            xm(j) -= h;
            jac.col(j) = (stationarity(prob, xp) - stationarity(prob, xm)) / (2.0 * h);
        }
        evals += static_cast<int>(2 * x.size());
        const Eigen::VectorXd trial = x - jac.fullPivLu().solve(f);
        const Eigen::VectorXd ft = stationarity(prob, trial);
        if (!(ft.norm() < f.norm())) break;
        x = trial;
        f = ft;
    }
    fx = prob.objective(x);
}

}  // namespace

ProjectionResult project_to_polydisc(const MatrixPoint& z, const ProjectionOptions& opts) {
    require_inside(z, "projection input");
    const Index r = z.rank();
    std::vector<Complex> diag(static_cast<std::size_t>(r));
    for (Index i = 0; i < r; ++i) diag[static_cast<std::size_t>(i)] = z(i, i);

    if (is_diagonal(z)) {
        return ProjectionResult{PolydiscPoint(z.rows(), z.cols(), diag), 0.0, 0, true};
    }

    const ProjectionProblem prob{z, r};
    std::vector<Eigen::VectorXd> starts;
    {
        std::vector<Complex> d0 = diag;
        for (Complex& w : d0)
            if (std::abs(w) >= 0.999) w *= 0.999 / std::abs(w);
        starts.push_back(prob.params(d0));
    }
    starts.push_back(Eigen::VectorXd::Zero(2 * r));
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int k = 0; k < opts.random_starts; ++k) {
        Eigen::VectorXd x(2 * r);
        for (Index i = 0; i < x.size(); ++i) x(i) = gauss(rng);
        starts.push_back(x);
    }

    NelderMeadOptions nm;
    nm.max_evaluations = opts.max_evaluations;
    // Squared distance carries ~1e-16 relative noise, so the simplex cannot
    // resolve x much below 1e-8; Brent's line searches finish the job.
    nm.x_tolerance = std::max(opts.tolerance, 1e-7);
    nm.f_tolerance = 1e-13;
    nm.initial_step = 0.25;

    int evals = 0;
    bool any_converged = false;
    Eigen::VectorXd best_x;
    double best_f = std::numeric_limits<double>::infinity();
    for (const Eigen::VectorXd& s : starts) {
        const NelderMeadResult res = nelder_mead([&](const Eigen::VectorXd& x) { return prob.objective(x); }, s, nm);
        evals += res.evaluations;
        any_converged = any_converged || res.converged;
        if (res.f < best_f) {
            best_f = res.f;
            best_x = res.x;
        }
    }
    const double final_step = refine(prob, best_x, best_f, opts.tolerance, evals);
    newton_polish(prob, best_x, best_f, evals);

    const std::vector<Complex> w = prob.coords(best_x);
    double gap = 0.0;
    for (Index i = 0; i < r; ++i) gap = std::max(gap, std::abs(w[static_cast<std::size_t>(i)] - diag[static_cast<std::size_t>(i)]));
    ProjectionResult out{PolydiscPoint(z.rows(), z.cols(), w), std::sqrt(best_f), evals, gap <= 1e-6};
    if (!any_converged && final_step >= opts.tolerance) {
        throw ProjectionError("projection onto the polydisc did not converge", out);
    }
    return out;
}

InvarianceCheck verify_projection_invariance(const PolydiscPoint& q, const MatrixPoint& r, const ProjectionOptions& opts) {
    const MatrixPoint qm = embed(q);
    require_same_shape(qm, r);
    const MatrixPoint origin = MatrixPoint::zero(r.rows(), r.cols());
    const MatrixPoint foot = embed(project_to_polydisc(r, opts).point);

    InvarianceCheck out;
    out.original = area_quadrature(origin, qm, r);
    out.projected = area_vformula(origin, qm, foot);
    out.residual = std::abs(out.original.value - out.projected.value);
    out.error_estimate = out.original.error + out.projected.error;
    return out;
}

double verify_orthogonality(const MatrixPoint& r, const ProjectionOptions& opts) {
    if (is_diagonal(r)) throw DomainError("verify_orthogonality: point already lies in the polydisc");
    const MatrixPoint foot = embed(project_to_polydisc(r, opts).point);
    const CMatrix dir = GeodesicSegment(foot, r).tangent(0.0);
    const CMatrix& w = foot.matrix();
    const double dir_norm = std::sqrt(riemannian_metric(w, dir, dir));
    double worst = 0.0;
    for (Index i = 0; i < r.rank(); ++i) {
        for (const Complex unit : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
            CMatrix basis = CMatrix::Zero(r.rows(), r.cols());
            basis(i, i) = unit;
            const double bn = std::sqrt(riemannian_metric(w, basis, basis));
            worst = std::max(worst, std::abs(riemannian_metric(w, dir, basis)) / (dir_norm * bn));
        }
    }
    return worst;
}

VanishingCheck verify_totally_real_vanishing(const MatrixPoint& r, const ProjectionOptions& opts) {
    require_inside(r, "totally-real check input");
    const MatrixPoint origin = MatrixPoint::zero(r.rows(), r.cols());
    VanishingCheck out;
    out.full_face = r.matrix().imag().isZero(0.0);
    if (is_diagonal(r)) return out;

    const MatrixPoint foot = embed(project_to_polydisc(r, opts).point);
    // Either way the quantity is the omega-area of T(0, R, pi(R)); the edge form
    // integrates d^C rho_0 along R -> pi(R) only.
    const AreaResult face = out.full_face ? area_quadrature(origin, r, foot) : area_stokes(origin, r, foot);
    out.residual = std::abs(face.value);
    out.error_estimate = face.error;
    return out;
}

}  // namespace hsd
