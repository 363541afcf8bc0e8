#include "doctest.h"

#include "hsd/suites.hpp"

using namespace hsd;

TEST_CASE("suite options are validated") {
    SuiteOptions o;
    o.trials = 0;
    CHECK_THROWS_AS(run_suite("bound", o), DomainError);
    o.trials = 1;
    CHECK_THROWS_AS(run_suite("nope", o), DomainError);
    o.p = 0;
    CHECK_THROWS_AS(run_suite("bound", o), DomainError);
}

TEST_CASE("passing suites") {
    SuiteOptions o;
    o.p = o.q = 2;
    o.trials = 10;
    o.seed = 5;
    for (const char* name : {"potentials", "additivity", "bound"}) {
        INFO(name);
        const SuiteResult r = run_suite(name, o);
        CHECK(r.passed());
        const Json j = r.to_json();
        CHECK(j["passed"].get<bool>());
        CHECK(j["seed"].get<int>() == 5);
    }
}

TEST_CASE("suites are deterministic") {
    SuiteOptions o;
    o.p = 2;
    o.q = 3;
    o.trials = 5;
    CHECK(run_suite("potentials", o).to_json() == run_suite("potentials", o).to_json());
}

TEST_CASE("projection suite records the failing identity with its instance") {
    SuiteOptions o;
    o.p = o.q = 2;
    o.trials = 3;
    const SuiteResult r = run_suite("projection", o);
    CHECK_FALSE(r.passed());
    for (const CheckResult& c : r.checks) {
        if (c.name == "orthogonality" || c.name == "totally_real_vanishing") CHECK(c.passed);
        if (!c.passed) CHECK(c.instance.contains("residual"));
    }
}
