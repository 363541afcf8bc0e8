#include "hsd/extremal.hpp"

#include "hsd/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hsd {

void SearchConfig::validate() const {
    if (p < 1 || q < 1) throw DomainError("search: domain dimensions must be positive");
    if (margins.empty()) throw DomainError("search: margin schedule is empty");
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (!(margins[i] > 0.0 && margins[i] < 1.0)) throw DomainError("search: margins must lie in (0, 1)");
        if (i > 0 && !(margins[i] < margins[i - 1])) throw DomainError("search: margins must be strictly decreasing");
    }
    if (budget < 0) throw DomainError("search: budget must be non-negative");
    if (restarts < 1) throw DomainError("search: restarts must be at least 1");
    if (method == AreaMethod::gauss_bonnet && (p != 1 || q != 1)) {
        throw DomainError("search: gauss-bonnet area is disc-only");
    }
}

std::vector<double> SearchTrace::best_so_far() const {
    std::vector<double> out;
    double best = std::abs(initial_area);
    for (const SearchStage& s : stages) {
        best = std::max(best, s.best_abs);
        out.push_back(best);
    }
    return out;
}

MatrixPoint clamp_to_margin(const MatrixPoint& z, double margin) {
    const double limit = 1.0 - margin;
    const double s = sigma_max(z.matrix());
    if (s <= limit) return z;
    return MatrixPoint(z.matrix() * (limit / s));
}

namespace {

Eigen::VectorXd pack(const Triangle& t) {
    const Index n = t.p.rows() * t.p.cols();
    Eigen::VectorXd x(6 * n);
    Index k = 0;
    for (const MatrixPoint* v : {&t.p, &t.q, &t.r}) {
        for (Index i = 0; i < n; ++i) {
            const Complex c = v->matrix().reshaped()(i);
            x(k++) = c.real();
            x(k++) = c.imag();
        }
    }
    return x;
}

Triangle unpack(const Eigen::VectorXd& x, Index p, Index q) {
    const Index n = p * q;
    std::array<CMatrix, 3> m;
    Index k = 0;
    for (CMatrix& v : m) {
        v.resize(p, q);
        for (Index i = 0; i < n; ++i) {
            v.reshaped()(i) = Complex(x(k), x(k + 1));
            k += 2;
        }
    }
    return {MatrixPoint(m[0]), MatrixPoint(m[1]), MatrixPoint(m[2])};
}

std::array<double, 3> defects_of(const Triangle& t) {
    return {shilov_defect(t.p), shilov_defect(t.q), shilov_defect(t.r)};
}

struct RestartResult {
    Triangle initial;
    double initial_area = 0.0;
    std::vector<SearchStage> stages;
};

RestartResult run_restart(const SearchConfig& cfg, int restart) {
    Rng rng(cfg.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(restart));
    const auto eval = [&](const Triangle& t) { return area(cfg.method, t).value; };

    RestartResult out;
    out.initial = random_triangle(rng, cfg.p, cfg.q, 1.0 - cfg.margins.front());
    out.initial_area = eval(out.initial);

    Eigen::VectorXd x = pack(out.initial);
    double best_abs = std::abs(out.initial_area);
    for (const double margin : cfg.margins) {
        const auto project = [&](const Eigen::VectorXd& y) {
            const Triangle t = unpack(y, cfg.p, cfg.q);
            return pack({clamp_to_margin(t.p, margin), clamp_to_margin(t.q, margin), clamp_to_margin(t.r, margin)});
        };
        const auto objective = [&](const Eigen::VectorXd& y) {
            const double a = eval(unpack(y, cfg.p, cfg.q));
            return std::isfinite(a) ? -std::abs(a) : std::numeric_limits<double>::infinity();
        };

        SearchStage stage;
        stage.margin = margin;
        x = project(x);
        double f = objective(x);
        const double stage_start = -f;
        // Restart the simplex around the incumbent until the stage budget is spent.
        double step = std::clamp(10.0 * margin, 1e-3, 0.2);
        int used = 0;
        while (used < cfg.budget) {
            NelderMeadOptions nm;
            nm.max_evaluations = cfg.budget - used;
            nm.initial_step = step;
            nm.x_tolerance = 1e-3 * step;
            nm.f_tolerance = 1e-13;
            const NelderMeadResult res = nelder_mead(objective, x, nm, project);
            used += std::max(res.evaluations, 1);
            if (res.f < f) {
                x = res.x;
                f = res.f;
            }
            step = std::max(0.5 * step, 1e-6);
        }
        stage.evaluations = used;
        stage.best = unpack(x, cfg.p, cfg.q);
        stage.best_area = area(cfg.method, stage.best).value;
        stage.best_abs = std::abs(stage.best_area);
        stage.stagnated = stage.best_abs - stage_start <= 1e-12;
        stage.defects = defects_of(stage.best);
        best_abs = std::max(best_abs, stage.best_abs);
        out.stages.push_back(std::move(stage));
    }
    return out;
}

}  // namespace

SearchTrace maximize_area(const SearchConfig& cfg) {
    cfg.validate();
    std::vector<RestartResult> runs(static_cast<std::size_t>(cfg.restarts));
    const bool parallel = cfg.execution == Execution::parallel;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (int k = 0; k < cfg.restarts; ++k) runs[static_cast<std::size_t>(k)] = run_restart(cfg, k);

    SearchTrace trace;
    trace.config = cfg;
    trace.target = rank_bound(cfg.p, cfg.q);
    trace.initial = runs.front().initial;
    trace.initial_area = runs.front().initial_area;
    for (std::size_t s = 0; s < cfg.margins.size(); ++s) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < runs.size(); ++k)
            if (runs[k].stages[s].best_abs > runs[best].stages[s].best_abs) best = k;
        SearchStage stage = runs[best].stages[s];
        stage.evaluations = 0;
        for (const RestartResult& r : runs) stage.evaluations += r.stages[s].evaluations;
        trace.stages.push_back(std::move(stage));
    }
    return trace;
}

Triangle near_ideal_triangle(Index p, Index q, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw DomainError("boundary sweep: eps must lie in (0, 0.5)");
    const Index r = std::min(p, q);
    std::array<MatrixPoint, 3> v;
    for (int k = 0; k < 3; ++k) {
        const Complex w = std::polar(1.0 - eps, 2.0 * std::numbers::pi * k / 3.0);
        v[static_cast<std::size_t>(k)] = MatrixPoint::diagonal(p, q, std::vector<Complex>(static_cast<std::size_t>(r), w));
    }
    return {v[0], v[1], v[2]};
}

std::vector<SweepRow> boundary_sweep(Index p, Index q, std::span<const double> eps) {
    std::vector<double> sorted(eps.begin(), eps.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double bound = rank_bound(p, q);
    std::vector<SweepRow> rows;
    for (const double e : sorted) {
        const double a = std::abs(area(AreaMethod::vformula, near_ideal_triangle(p, q, e)).value);
        rows.push_back({e, a, bound - a});
    }
    return rows;
}

BoundCheck bound_check(std::span<const Triangle> triangles, Execution exec) {
    if (triangles.empty()) throw DomainError("bound_check: empty batch");
    const double bound = rank_bound(triangles.front().p.rows(), triangles.front().p.cols());
    const BatchBound worst = batch_max_area(triangles, exec);
    BoundCheck out{bound - worst.max_abs_area, worst.max_abs_area, worst.worst_index};
    if (out.worst_margin < -kBoundTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "area bound violated: |area| = " << worst.max_abs_area << " > r*pi = " << bound;
        throw BoundViolation(os.str(), triangles[worst.worst_index], worst.max_abs_area);
    }
    return out;
}

EqualityReport equality_diagnostics(const SearchTrace& trace) {
    EqualityReport out;
    double prev_defect = std::numeric_limits<double>::infinity();
    double prev_area = -1.0;
    for (const SearchStage& s : trace.stages) {
        StageDiagnostic d;
        d.margin = s.margin;
        d.best_abs = s.best_abs;
        d.gap = trace.target - s.best_abs;
        d.max_defect = *std::max_element(s.defects.begin(), s.defects.end());
        if (d.best_abs >= prev_area && d.max_defect > prev_defect + 1e-3) out.defect_decreasing = false;
        prev_defect = d.max_defect;
        prev_area = d.best_abs;
        out.stages.push_back(d);
    }
    if (out.stages.empty()) {
        const std::array<double, 3> d = defects_of(trace.initial);
        out.final_gap = trace.target - std::abs(trace.initial_area);
        out.final_max_defect = *std::max_element(d.begin(), d.end());
    } else {
        out.final_gap = out.stages.back().gap;
        out.final_max_defect = out.stages.back().max_defect;
    }
    return out;
}

}  // namespace hsd
