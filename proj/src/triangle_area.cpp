#include "hsd/triangle_area.hpp"

#include "hsd/potentials.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace hsd {

std::string_view to_string(AreaMethod m) {
    switch (m) {
        case AreaMethod::vformula: return "vformula";
        case AreaMethod::stokes: return "stokes";
        case AreaMethod::quadrature: return "quadrature";
        case AreaMethod::gauss_bonnet: return "gauss_bonnet";
    }
    return "unknown";
}

std::optional<AreaMethod> parse_area_method(std::string_view name) {
    if (name == "vformula") return AreaMethod::vformula;
    if (name == "stokes") return AreaMethod::stokes;
    if (name == "quadrature") return AreaMethod::quadrature;
    if (name == "gauss_bonnet" || name == "gauss-bonnet") return AreaMethod::gauss_bonnet;
    return std::nullopt;
}

double rank_bound(Index p, Index q) { return static_cast<double>(std::min(p, q)) * std::numbers::pi; }

CMatrix radial_scale(const CMatrix& w, double s) {
    if (w.rows() == 1 && w.cols() == 1) {
        const double a = std::abs(w(0, 0));
        CMatrix out(1, 1);
        out(0, 0) = a == 0.0 ? Complex(0.0) : w(0, 0) * (std::tanh(s * std::atanh(a)) / a);
        return out;
    }
    Eigen::JacobiSVD<CMatrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RVector d = svd.singularValues();
    for (Index i = 0; i < d.size(); ++i) d(i) = std::tanh(s * std::atanh(d(i)));
    return svd.matrixU() * d.asDiagonal() * svd.matrixV().adjoint();
}

namespace {

void require_triangle(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    require_same_shape(p, q);
    require_same_shape(p, r);
    require_inside(p, "vertex P");
    require_inside(q, "vertex Q");
    require_inside(r, "vertex R");
}

bool any_ill_conditioned(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    for (const MatrixPoint* v : {&p, &q, &r})
        if (1.0 - sigma_max(v->matrix()) < kNearBoundary) return true;
    return false;
}

AreaResult degenerate_result(AreaMethod method) {
    AreaResult out;
    out.method = method;
    out.diagnostics.degenerate = true;
    return out;
}

}  // namespace

bool is_degenerate(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    const auto same = [](const MatrixPoint& a, const MatrixPoint& b) {
        return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff() <= 4.0 * std::numeric_limits<double>::epsilon();
    };
    if (same(p, q) || same(q, r) || same(p, r)) return true;
    std::array<double, 3> d{distance(p, q), distance(q, r), distance(p, r)};
    std::sort(d.begin(), d.end());
    const double sum = d[0] + d[1] + d[2];
    return d[0] + d[1] - d[2] <= 64.0 * std::numeric_limits<double>::epsilon() * sum;
}

TrianglePatch::TrianglePatch(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r)
    : p_(p),
      q_(q),
      r_(r),
      to_origin_(p),
      from_origin_(to_origin_.inverse()),
      base_edge_(to_origin_(q), to_origin_(r)) {
    require_triangle(p, q, r);
}

CMatrix TrianglePatch::evaluate(double s, double t) const {
    return from_origin_.apply(radial_scale(base_edge_.evaluate(t), s));
}

AreaResult area_vformula(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    require_triangle(p, q, r);
    if (is_degenerate(p, q, r)) return degenerate_result(AreaMethod::vformula);

    const MobiusMap to_origin(p);
    const MatrixPoint qt = to_origin(q);
    const MatrixPoint rt = to_origin(r);
    const ConjugatePair pair(qt);

    AreaResult out;
    out.method = AreaMethod::vformula;
    out.value = pair.v(rt) - pair.v(qt);
    out.error = 16.0 * std::numeric_limits<double>::epsilon() * rank_bound(p.rows(), p.cols());
    out.diagnostics.windings = pair.branch_index(rt);
    out.diagnostics.ill_conditioned = any_ill_conditioned(p, q, r) || to_origin.ill_conditioned();
    return out;
}

AreaResult area_vformula_tracked(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    require_triangle(p, q, r);
    if (is_degenerate(p, q, r)) return degenerate_result(AreaMethod::vformula);

    const MobiusMap to_origin(p);
    const MatrixPoint qt = to_origin(q);
    const MatrixPoint rt = to_origin(r);
    const ConjugatePair pair(qt);
    const GeodesicSegment edge(qt, rt);

    TrackedPhase phase;
    const double v_r = pair.v_along(edge, &phase);

    AreaResult out;
    out.method = AreaMethod::vformula;
    out.value = v_r - pair.v_principal(qt);
    out.error = 8.0 * std::numeric_limits<double>::epsilon() * phase.intervals * std::numbers::pi;
    out.diagnostics.windings = phase.windings;
    out.diagnostics.phase_intervals = phase.intervals;
    out.diagnostics.branch_ambiguous = phase.ambiguous;
    out.diagnostics.refinement_capped = phase.capped;
    out.diagnostics.ill_conditioned =
        any_ill_conditioned(p, q, r) || to_origin.ill_conditioned() || edge.ill_conditioned();
    return out;
}

AreaResult area_stokes(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    require_triangle(p, q, r);
    if (is_degenerate(p, q, r)) return degenerate_result(AreaMethod::stokes);

    const MobiusMap to_origin(p);
    const GeodesicSegment edge(to_origin(q), to_origin(r));
    const MatrixPoint origin = MatrixPoint::zero(p.rows(), p.cols());

    // The two edges through the origin are radial, where d^C rho_0 vanishes.
    const auto integrand = [&](double t) {
        return dC_rho(origin, MatrixPoint(edge.evaluate(t)), edge.tangent(t));
    };
    double err = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        integrand, 0.0, 1.0, 15, 1e-13, &err, &l1);

    AreaResult out;
    out.method = AreaMethod::stokes;
    out.value = value;
    out.error = err;
    out.diagnostics.refinement_capped = err > 1e-8 * std::max(1.0, l1);
    out.diagnostics.ill_conditioned = any_ill_conditioned(p, q, r) || to_origin.ill_conditioned();
    return out;
}

namespace {

constexpr int kGaussOrder = 32;
constexpr double kPatchStep = 1e-3;

struct GaussRule {
    std::array<double, kGaussOrder> nodes{};    // on [0, 1]
    std::array<double, kGaussOrder> weights{};  // sum to 1

    GaussRule() {
        using Rule = boost::math::quadrature::gauss<double, kGaussOrder>;
        const auto& x = Rule::abscissa();
        const auto& w = Rule::weights();
        const int half = kGaussOrder / 2;
        for (int i = 0; i < half; ++i) {
            nodes[half - 1 - i] = 0.5 * (1.0 - x[i]);
            nodes[half + i] = 0.5 * (1.0 + x[i]);
            weights[half - 1 - i] = 0.5 * w[i];
            weights[half + i] = 0.5 * w[i];
        }
    }
};

const GaussRule& gauss_rule() {
    static const GaussRule rule;
    return rule;
}

struct Cell {
    double s0, s1, t0, t1;
    double area() const { return (s1 - s0) * (t1 - t0); }
};

// Thin SVD of a point on the base edge, reused across the s nodes of a column.
struct RadialFrame {
    CMatrix u;
    RVector rapidity;
    CMatrix v;

    explicit RadialFrame(const CMatrix& w) {
        Eigen::JacobiSVD<CMatrix> svd(w, Eigen::ComputeThinU | Eigen::ComputeThinV);
        u = svd.matrixU();
        v = svd.matrixV();
        rapidity = svd.singularValues();
        for (Index i = 0; i < rapidity.size(); ++i) rapidity(i) = std::atanh(rapidity(i));
    }

    CMatrix point(double s) const {
        RVector d(rapidity.size());
        for (Index i = 0; i < d.size(); ++i) d(i) = std::tanh(s * rapidity(i));
        return u * d.asDiagonal() * v.adjoint();
    }

    CMatrix velocity(double s) const {
        RVector d(rapidity.size());
        for (Index i = 0; i < d.size(); ++i) {
            const double c = std::cosh(s * rapidity(i));
            d(i) = rapidity(i) / (c * c);
        }
        return u * d.asDiagonal() * v.adjoint();
    }
};

class PatchIntegrator {
public:
    PatchIntegrator(const GeodesicSegment& edge, const QuadratureOptions& opts) : edge_(edge), opts_(opts) {}

    double cell(const Cell& c) const {
        const GaussRule& rule = gauss_rule();
        std::array<double, kGaussOrder> columns{};
        const bool parallel = opts_.execution == Execution::parallel;
#pragma omp parallel for schedule(static) if (parallel)
        for (int j = 0; j < kGaussOrder; ++j) {
            const double t = c.t0 + (c.t1 - c.t0) * rule.nodes[static_cast<std::size_t>(j)];
            columns[static_cast<std::size_t>(j)] = column(c, t);
        }
        double sum = 0.0;
        for (int j = 0; j < kGaussOrder; ++j) sum += rule.weights[static_cast<std::size_t>(j)] * columns[static_cast<std::size_t>(j)];
        return sum * c.area();
    }

private:
    // Integral over s of omega(d sigma/ds, d sigma/dt) at fixed t, weighted by the s rule.
    double column(const Cell& c, double t) const {
        const GaussRule& rule = gauss_rule();
        const double h = kPatchStep;
        const RadialFrame f0(edge_.evaluate(t));
        const RadialFrame fm2(edge_.evaluate(t - 2.0 * h));
        const RadialFrame fm1(edge_.evaluate(t - h));
        const RadialFrame fp1(edge_.evaluate(t + h));
        const RadialFrame fp2(edge_.evaluate(t + 2.0 * h));
        double acc = 0.0;
        for (int i = 0; i < kGaussOrder; ++i) {
            const double s = c.s0 + (c.s1 - c.s0) * rule.nodes[static_cast<std::size_t>(i)];
            const CMatrix z = f0.point(s);
            const CMatrix ds = f0.velocity(s);
            const CMatrix dt = (fm2.point(s) - 8.0 * fm1.point(s) + 8.0 * fp1.point(s) - fp2.point(s)) / (12.0 * h);
            acc += rule.weights[static_cast<std::size_t>(i)] * kahler_form(z, ds, dt, opts_.hessian);
        }
        return acc;
    }

    const GeodesicSegment& edge_;
    const QuadratureOptions& opts_;
};

struct AdaptState {
    double error = 0.0;
    int cells = 0;
    int depth = 0;
    bool capped = false;
};

double adapt(const PatchIntegrator& integrator, const Cell& c, double coarse, int depth,
             const QuadratureOptions& opts, AdaptState& state) {
    const double sm = 0.5 * (c.s0 + c.s1);
    const double tm = 0.5 * (c.t0 + c.t1);
    const std::array<Cell, 4> kids{Cell{c.s0, sm, c.t0, tm}, Cell{sm, c.s1, c.t0, tm}, Cell{c.s0, sm, tm, c.t1},
                                   Cell{sm, c.s1, tm, c.t1}};
    std::array<double, 4> values{};
    double fine = 0.0;
    for (std::size_t k = 0; k < kids.size(); ++k) {
        values[k] = integrator.cell(kids[k]);
        fine += values[k];
    }
    const double err = std::abs(fine - coarse);
    if (err <= opts.abs_tol * c.area() || depth >= opts.max_depth) {
        if (err > opts.abs_tol * c.area()) state.capped = true;
        state.error += err;
        state.cells += 1;
        state.depth = std::max(state.depth, depth);
        return fine;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < kids.size(); ++k) sum += adapt(integrator, kids[k], values[k], depth + 1, opts, state);
    return sum;
}

}  // namespace

AreaResult area_quadrature(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r,
                           const QuadratureOptions& opts) {
    require_triangle(p, q, r);
    for (const MatrixPoint* v : {&p, &q, &r}) {
        if (1.0 - sigma_max(v->matrix()) < opts.boundary_floor) {
            throw DomainError("area_quadrature: vertex too close to the boundary for surface quadrature");
        }
    }

    // omega is invariant, so integrate over the patch of the triangle translated to P = 0.
    const MobiusMap to_origin(p);
    const GeodesicSegment edge(to_origin(q), to_origin(r));
    const PatchIntegrator integrator(edge, opts);

    const Cell unit{0.0, 1.0, 0.0, 1.0};
    AdaptState state;
    const double value = adapt(integrator, unit, integrator.cell(unit), 0, opts, state);

    AreaResult out;
    out.method = AreaMethod::quadrature;
    out.value = value;
    out.error = state.capped ? 10.0 * state.error : state.error;
    out.diagnostics.cells = state.cells;
    out.diagnostics.refinement_depth = state.depth;
    out.diagnostics.refinement_capped = state.capped;
    out.diagnostics.degenerate = is_degenerate(p, q, r);
    out.diagnostics.ill_conditioned = to_origin.ill_conditioned();
    return out;
}

AreaResult area_gauss_bonnet(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    if (p.rows() != 1 || p.cols() != 1) throw DomainError("gauss-bonnet area is only defined for the disc (p = q = 1)");
    require_triangle(p, q, r);
    if (is_degenerate(p, q, r)) return degenerate_result(AreaMethod::gauss_bonnet);

    // Geodesic tangent at `from` pointing toward `to`; angles are conformal.
    const auto direction = [](const MatrixPoint& from, const MatrixPoint& to) {
        return GeodesicSegment(from, to).tangent(0.0)(0, 0);
    };
    const auto angle = [&](const MatrixPoint& at, const MatrixPoint& a, const MatrixPoint& b) {
        return std::abs(std::arg(direction(at, b) / direction(at, a)));
    };
    const double sum = angle(p, q, r) + angle(q, r, p) + angle(r, p, q);
    const Complex tq = direction(p, q);
    const Complex tr = direction(p, r);
    const double orientation = (std::conj(tq) * tr).imag() >= 0.0 ? 1.0 : -1.0;

    AreaResult out;
    out.method = AreaMethod::gauss_bonnet;
    out.value = orientation * std::max(0.0, std::numbers::pi - sum);
    out.error = 32.0 * std::numeric_limits<double>::epsilon() * std::numbers::pi;
    out.diagnostics.ill_conditioned = any_ill_conditioned(p, q, r);
    return out;
}

AreaResult area(AreaMethod method, const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r) {
    switch (method) {
        case AreaMethod::vformula: return area_vformula(p, q, r);
        case AreaMethod::stokes: return area_stokes(p, q, r);
        case AreaMethod::quadrature: return area_quadrature(p, q, r);
        case AreaMethod::gauss_bonnet: return area_gauss_bonnet(p, q, r);
    }
    throw DomainError("unknown area method");
}

double disc_signed_closed_form(Complex z1, Complex z2) {
    if (!(std::abs(z1) < 1.0) || !(std::abs(z2) < 1.0)) throw DomainError("disc_closed_form: points must lie in the unit disc");
    return -2.0 * std::arg(1.0 - std::conj(z1) * z2);
}

double disc_closed_form(Complex z1, Complex z2) { return std::abs(disc_signed_closed_form(z1, z2)); }

}  // namespace hsd
