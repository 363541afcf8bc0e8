#include "hsd/suites.hpp"

#include "hsd/batch.hpp"
#include "hsd/extremal.hpp"
#include "hsd/polydisc.hpp"
#include "hsd/potentials.hpp"

#include <cmath>
#include <numbers>

namespace hsd {

bool SuiteResult::passed() const {
    for (const CheckResult& c : checks)
        if (!c.passed) return false;
    return true;
}

Json SuiteResult::to_json() const {
    Json cs = Json::array();
    for (const CheckResult& c : checks) {
        Json j{{"name", c.name}, {"worst", c.worst}, {"tolerance", c.tolerance}, {"passed", c.passed}};
        if (!c.passed) j["instance"] = c.instance;
        cs.push_back(std::move(j));
    }
    return {{"suite", suite}, {"p", p},          {"q", q},        {"trials", trials},
            {"seed", seed},   {"passed", passed()}, {"checks", std::move(cs)}};
}

namespace {

// Tracks the worst residual and keeps the first instance that breaks the tolerance.
struct Tracker {
    CheckResult r;

    Tracker(std::string name, double tol) {
        r.name = std::move(name);
        r.tolerance = tol;
    }

    template <class MakeInstance>
    void add(double residual, double allowed, MakeInstance&& make) {
        if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
        r.worst = std::max(r.worst, residual);
        if (r.passed && !(residual <= allowed)) {
            r.passed = false;
            r.instance = make();
            r.instance["residual"] = residual;
        }
    }
};

SuiteResult start(const char* name, const SuiteOptions& o) {
    if (o.p < 1 || o.q < 1) throw DomainError("verify: --p and --q must be positive");
    if (o.trials < 1) throw DomainError("verify: --trials must be at least 1");
    SuiteResult s;
    s.suite = name;
    s.p = o.p;
    s.q = o.q;
    s.trials = o.trials;
    s.seed = o.seed;
    return s;
}

CMatrix random_direction(Rng& rng, Index p, Index q) {
    std::normal_distribution<double> n;
    CMatrix x(p, q);
    for (Index i = 0; i < x.size(); ++i) x.reshaped()(i) = Complex(n(rng), n(rng));
    return x / x.norm();
}

Json matrix_instance(const char* key, const MatrixPoint& m) { return {{key, matrix_to_json(m.matrix())}}; }

}  // namespace

SuiteResult potentials_suite(const SuiteOptions& o) {
    SuiteResult s = start("potentials", o);
    Rng rng(o.seed);
    const double smax = 0.9;
    Tracker zero("rho_center_zero", 1e-12);
    Tracker kinv("k_invariance", 1e-10);
    Tracker radial("radial_dC_vanishing", 1e-7);
    Tracker ddc("ddC_rho_equals_omega", 1e-6);
    Tracker conj("dC_u_equals_dv", 1e-6);

    for (int k = 0; k < o.trials; ++k) {
        const MatrixPoint a = random_point(rng, o.p, o.q, smax);
        const MatrixPoint z = random_point(rng, o.p, o.q, smax);
        zero.add(std::abs(rho_at(a, a)), zero.r.tolerance, [&] { return matrix_instance("center", a); });

        // rho_{kA}(kZ) = rho_A(Z) for k = (U, V) acting by Z -> U Z V*.
        const CMatrix u = random_unitary(rng, o.p);
        const CMatrix v = random_unitary(rng, o.q);
        const double base = rho_at(a, z);
        const double moved = rho_at(MatrixPoint(u * a.matrix() * v.adjoint()), MatrixPoint(u * z.matrix() * v.adjoint()));
        kinv.add(std::abs(moved - base), kinv.r.tolerance * std::max(1.0, std::abs(base)), [&] {
            Json j = matrix_instance("center", a);
            j["point"] = matrix_to_json(z.matrix());
            j["u"] = matrix_to_json(u);
            j["v"] = matrix_to_json(v);
            return j;
        });

        const GeodesicSegment g(a, z);
        for (const double t : {0.25, 0.5, 0.75, 1.0}) {
            const CMatrix vel = g.tangent(t);
            const double val = dC_rho(a, g.at(t), vel) / std::max(1.0, vel.norm());
            radial.add(std::abs(val), radial.r.tolerance, [&] {
                Json j = matrix_instance("center", a);
                j["end"] = matrix_to_json(z.matrix());
                j["t"] = t;
                return j;
            });
        }

        const CMatrix x = random_direction(rng, o.p, o.q);
        const CMatrix y = random_direction(rng, o.p, o.q);
        const double exact = kahler_form(z.matrix(), x, y);
        const double fd = kahler_form(z.matrix(), x, y, DerivativeMode::finite_difference);
        ddc.add(std::abs(exact - fd), ddc.r.tolerance * std::max(1.0, std::abs(exact)), [&] {
            Json j = matrix_instance("point", z);
            j["x"] = matrix_to_json(x);
            j["y"] = matrix_to_json(y);
            return j;
        });

        // d^C u = dv for u = rho_0 - rho_A, v the conjugate function anchored at A.
        const ConjugatePair pair(a);
        const MatrixPoint origin = MatrixPoint::zero(o.p, o.q);
        const double dcu = dC_rho(origin, z, x) - dC_rho(a, z, x);
        const double h = 1e-6;
        const double dv = (pair.v(MatrixPoint(z.matrix() + h * x)) - pair.v(MatrixPoint(z.matrix() - h * x))) / (2.0 * h);
        conj.add(std::abs(dcu - dv), conj.r.tolerance * std::max(1.0, std::abs(dcu)), [&] {
            Json j = matrix_instance("anchor", a);
            j["point"] = matrix_to_json(z.matrix());
            j["x"] = matrix_to_json(x);
            return j;
        });
    }
    s.checks = {zero.r, kinv.r, radial.r, ddc.r, conj.r};
    return s;
}

SuiteResult projection_suite(const SuiteOptions& o) {
    SuiteResult s = start("projection", o);
    Rng rng(o.seed);
    const Index r = std::min(o.p, o.q);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss;
    Tracker inv("projection_identity", 1e-5);
    Tracker orth("orthogonality", 1e-6);
    Tracker real("totally_real_vanishing", 1e-8);
    Tracker edge("edge_form_vanishing", 1e-5);

    for (int k = 0; k < o.trials; ++k) {
        std::vector<Complex> w(static_cast<std::size_t>(r));
        for (Complex& c : w) c = std::polar(0.9 * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
        const PolydiscPoint qd(o.p, o.q, w);
        const MatrixPoint rm = random_point(rng, o.p, o.q, 0.9);

        const InvarianceCheck c = verify_projection_invariance(qd, rm);
        inv.add(c.residual, inv.r.tolerance + c.error_estimate, [&] {
            Json j{{"q", matrix_to_json(embed(qd).matrix())}, {"r", matrix_to_json(rm.matrix())}};
            j["original"] = c.original.value;
            j["projected"] = c.projected.value;
            return j;
        });

        if (!is_diagonal(rm)) {
            orth.add(verify_orthogonality(rm), orth.r.tolerance, [&] { return matrix_instance("r", rm); });
        }

        CMatrix re(o.p, o.q);
        for (Index i = 0; i < re.size(); ++i) re.reshaped()(i) = gauss(rng);
        re *= 0.9 * unit(rng) / sigma_max(re);
        const MatrixPoint rr(re);
        const VanishingCheck v = verify_totally_real_vanishing(rr);
        real.add(v.residual, real.r.tolerance + v.error_estimate, [&] { return matrix_instance("r", rr); });

        const VanishingCheck e = verify_totally_real_vanishing(rm);
        edge.add(e.residual, edge.r.tolerance + e.error_estimate, [&] { return matrix_instance("r", rm); });
    }
    s.checks = {inv.r, orth.r, real.r, edge.r};
    return s;
}

SuiteResult additivity_suite(const SuiteOptions& o) {
    SuiteResult s = start("additivity", o);
    Rng rng(o.seed);
    const Index r = std::min(o.p, o.q);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto disc_point = [&] { return std::polar(0.99 * std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng)); };
    Tracker add("product_area_additive", 1e-7);
    for (int k = 0; k < o.trials; ++k) {
        std::vector<DiscTriangle> f(static_cast<std::size_t>(r));
        for (DiscTriangle& t : f) t = {disc_point(), disc_point(), disc_point()};
        add.add(area_additivity_check(f), add.r.tolerance, [&] {
            Json fs = Json::array();
            for (const DiscTriangle& t : f) {
                fs.push_back(Json::array({Json::array({t.p.real(), t.p.imag()}), Json::array({t.q.real(), t.q.imag()}),
                                          Json::array({t.r.real(), t.r.imag()})}));
            }
            return Json{{"factors", std::move(fs)}};
        });
    }
    s.checks = {add.r};
    return s;
}

SuiteResult bound_suite(const SuiteOptions& o) {
    SuiteResult s = start("bound", o);
    Rng rng(o.seed);
    const std::vector<Triangle> tris = random_triangles(rng, o.p, o.q, 1.0, static_cast<std::size_t>(o.trials));
    CheckResult c;
    c.name = "area_bound";
    c.tolerance = kBoundTolerance;
    try {
        const BoundCheck b = bound_check(tris, o.execution);
        c.worst = b.worst_margin;
        c.passed = b.worst_margin > 0.0;
        if (!c.passed) c.instance = {{"vertices", triangle_to_json(tris[b.worst_index])}, {"area", b.max_abs_area}};
    } catch (const BoundViolation& e) {
        c.passed = false;
        c.worst = rank_bound(o.p, o.q) - e.area();
        c.instance = {{"vertices", triangle_to_json(e.triangle())}, {"area", e.area()}};
    }
    s.checks = {c};
    return s;
}

SuiteResult run_suite(const std::string& suite, const SuiteOptions& opts) {
    if (suite == "potentials") return potentials_suite(opts);
    if (suite == "projection") return projection_suite(opts);
    if (suite == "additivity") return additivity_suite(opts);
    if (suite == "bound") return bound_suite(opts);
    throw DomainError("unknown suite '" + suite + "' (expected potentials|projection|additivity|bound)");
}

}  // namespace hsd
