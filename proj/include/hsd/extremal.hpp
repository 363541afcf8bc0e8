#pragma once

// Approaching sup |area| = r*pi: annealed simplex search toward the boundary,
// explicit near-ideal sweeps, randomized bound checks and Shilov-boundary
// diagnostics of the best triangles found.

#include "hsd/batch.hpp"
#include "hsd/triangle_area.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace hsd {

struct SearchConfig {
    Index p = 1;
    Index q = 1;
    std::vector<double> margins{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
    int budget = 3000;  // area evaluations per stage and restart
    int restarts = 4;
    std::uint64_t seed = 1;
    AreaMethod method = AreaMethod::vformula;
    Execution execution = Execution::parallel;

    /// Throws DomainError on an invalid configuration.
    void validate() const;
};

struct SearchStage {
    double margin = 0.0;
    Triangle best;
    double best_area = 0.0;  // signed
    double best_abs = 0.0;
    std::array<double, 3> defects{};  // Shilov defect of each vertex of `best`
    int evaluations = 0;
    bool stagnated = false;
};

struct SearchTrace {
    SearchConfig config;
    Triangle initial;
    double initial_area = 0.0;
    std::vector<SearchStage> stages;
    double target = 0.0;  // r*pi

    const SearchStage& final_stage() const { return stages.back(); }
    double best_abs() const { return stages.empty() ? std::abs(initial_area) : stages.back().best_abs; }
    double achieved_fraction() const { return best_abs() / target; }
    std::vector<double> best_so_far() const;
};

SearchTrace maximize_area(const SearchConfig& cfg);

/// Scales every vertex so that sigma_max <= 1 - margin.
MatrixPoint clamp_to_margin(const MatrixPoint& z, double margin);

struct SweepRow {
    double eps = 0.0;
    double area = 0.0;
    double bound_gap = 0.0;
};

/// Vertices (1 - eps) * (1, e^{2 pi i/3}, e^{4 pi i/3}) in every diagonal entry.
Triangle near_ideal_triangle(Index p, Index q, double eps);
/// Rows sorted by descending eps.
std::vector<SweepRow> boundary_sweep(Index p, Index q, std::span<const double> eps);

class BoundViolation : public std::runtime_error {
public:
    BoundViolation(const std::string& what, Triangle t, double area)
        : std::runtime_error(what), triangle_(std::move(t)), area_(area) {}
    const Triangle& triangle() const { return triangle_; }
    double area() const { return area_; }

private:
    Triangle triangle_;
    double area_;
};

inline constexpr double kBoundTolerance = 1e-9;

struct BoundCheck {
    double worst_margin = 0.0;  // r*pi - max |area|
    double max_abs_area = 0.0;
    std::size_t worst_index = 0;
};

/// Throws BoundViolation if any |area| exceeds r*pi + kBoundTolerance.
BoundCheck bound_check(std::span<const Triangle> triangles, Execution exec = Execution::parallel);

struct StageDiagnostic {
    double margin = 0.0;
    double best_abs = 0.0;
    double gap = 0.0;         // r*pi - best_abs
    double max_defect = 0.0;  // over the three vertices
};

struct EqualityReport {
    std::vector<StageDiagnostic> stages;
    double final_gap = 0.0;
    double final_max_defect = 0.0;
    /// Max defect never grows (beyond 1e-3) while the best area grows.
    bool defect_decreasing = true;
};

EqualityReport equality_diagnostics(const SearchTrace& trace);

}  // namespace hsd
