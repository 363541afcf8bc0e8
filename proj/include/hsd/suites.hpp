#pragma once

// Randomized property suites behind `hsd verify`. Each check records its worst
// residual and, on failure, the instance that produced it.

#include "hsd/report.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hsd {

struct CheckResult {
    std::string name;
    double worst = 0.0;      // largest residual seen (for bound: smallest margin)
    double tolerance = 0.0;
    bool passed = true;
    Json instance;           // offending input when !passed
};

struct SuiteResult {
    std::string suite;
    Index p = 1;
    Index q = 1;
    int trials = 0;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool passed() const;
    Json to_json() const;
};

struct SuiteOptions {
    Index p = 1;
    Index q = 1;
    int trials = 50;
    std::uint64_t seed = 1;
    Execution execution = Execution::parallel;
};

/// Suite names: potentials, projection, additivity, bound.
/// Throws DomainError for an unknown suite or invalid options.
SuiteResult run_suite(const std::string& suite, const SuiteOptions& opts);

SuiteResult potentials_suite(const SuiteOptions& opts);
SuiteResult projection_suite(const SuiteOptions& opts);
SuiteResult additivity_suite(const SuiteOptions& opts);
SuiteResult bound_suite(const SuiteOptions& opts);

}  // namespace hsd
