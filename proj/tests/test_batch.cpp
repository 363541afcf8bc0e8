#include "doctest.h"

#include "hsd/batch.hpp"

#include <cmath>

using namespace hsd;

TEST_CASE("random sampling") {
    Rng rng(70);
    for (int k = 0; k < 20; ++k) {
        const CMatrix u = random_unitary(rng, 3);
        CHECK((u.adjoint() * u - CMatrix::Identity(3, 3)).norm() < 1e-13);
        const MatrixPoint z = random_point(rng, 2, 3, 0.7);
        CHECK(sigma_max(z.matrix()) < 0.7);
        CHECK(std::abs(random_point(rng, 1, 1, 0.3)(0, 0)) < 0.3);
    }
    Rng a(5), b(5);
    CHECK((random_point(a, 2, 2, 0.9).matrix() - random_point(b, 2, 2, 0.9).matrix()).norm() == 0.0);
}

TEST_CASE("serial and parallel batch kernels agree exactly") {
    for (const auto [p, q] : {std::pair<Index, Index>{1, 1}, {2, 2}, {3, 2}}) {
        Rng rng(static_cast<std::uint64_t>(71 + p + q));
        const std::vector<Triangle> tris = random_triangles(rng, p, q, 0.95, 64);
        for (const AreaMethod m : {AreaMethod::vformula, AreaMethod::stokes}) {
            const std::vector<AreaResult> s = batch_areas(tris, m, Execution::serial);
            const std::vector<AreaResult> par = batch_areas(tris, m, Execution::parallel);
            REQUIRE(s.size() == tris.size());
            for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].value == par[i].value);
        }
        const BatchBound bs = batch_max_area(tris, Execution::serial);
        const BatchBound bp = batch_max_area(tris, Execution::parallel);
        CHECK(bs.max_abs_area == bp.max_abs_area);
        CHECK(bs.worst_index == bp.worst_index);
    }
    Rng rng(75);
    const std::vector<Triangle> few = random_triangles(rng, 2, 2, 0.9, 4);
    const std::vector<AreaResult> qs = batch_areas(few, AreaMethod::quadrature, Execution::serial);
    const std::vector<AreaResult> qp = batch_areas(few, AreaMethod::quadrature, Execution::parallel);
    for (std::size_t i = 0; i < qs.size(); ++i) CHECK(qs[i].value == qp[i].value);
}

TEST_CASE("batch errors surface") {
    Rng rng(76);
    std::vector<Triangle> tris = random_triangles(rng, 2, 2, 0.9, 8);
    tris[5] = {MatrixPoint::zero(2, 2), MatrixPoint::zero(2, 2), MatrixPoint::zero(1, 1)};
    CHECK_THROWS_AS(batch_areas(tris, AreaMethod::vformula, Execution::serial), DomainError);
    CHECK_THROWS_AS(batch_areas(tris, AreaMethod::vformula, Execution::parallel), DomainError);
    CHECK(batch_areas({}, AreaMethod::vformula).empty());
}
