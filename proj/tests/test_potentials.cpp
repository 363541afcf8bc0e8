#include "doctest.h"
#include "oracles.hpp"

#include "hsd/batch.hpp"
#include "hsd/potentials.hpp"

#include <cmath>
#include <numbers>

using namespace hsd;

namespace {

MatrixPoint diag_same(Index n, Complex w) { return MatrixPoint::diagonal(n, n, std::vector<Complex>(static_cast<std::size_t>(n), w)); }

CMatrix random_dir(Rng& rng, Index p, Index q) {
    std::normal_distribution<double> g;
    CMatrix x(p, q);
    for (Index i = 0; i < x.size(); ++i) x.reshaped()(i) = Complex(g(rng), g(rng));
    return x / x.norm();
}

}  // namespace

TEST_CASE("rho_origin values") {
    CHECK(rho_origin(MatrixPoint::scalar(0.5)) == doctest::Approx(-std::log(0.75)).epsilon(1e-15));
    CHECK(rho_origin(MatrixPoint::zero(2, 3)) == 0.0);
    const MatrixPoint d = diag_same(2, 0.5);
    CHECK(rho_origin(d) == doctest::Approx(-2.0 * std::log(0.75)).epsilon(1e-15));
    CHECK(rho_origin(d) == doctest::Approx(oracle::rho0(d.matrix())).epsilon(1e-14));
    CHECK_THROWS_AS(rho_origin(MatrixPoint::scalar(1.0)), DomainError);
}

TEST_CASE("rho_origin stays finite near the boundary") {
    const MatrixPoint z = MatrixPoint::scalar(1.0 - 1e-15);
    CHECK(std::isfinite(rho_origin(z)));
    CHECK(potential_near_boundary(z));
    CHECK_FALSE(potential_near_boundary(MatrixPoint::scalar(0.9)));
    // log-defect form keeps precision where 1 - |z|^2 would cancel.
    const double s = 1.0 - 1e-9, d = 1.0 - s;
    CHECK(rho_origin(MatrixPoint::scalar(s)) == doctest::Approx(-std::log(d) - std::log1p(s)).epsilon(1e-13));
}

TEST_CASE("rho_at values") {
    const MatrixPoint a = MatrixPoint::scalar(0.5);
    CHECK(rho_at(a, a) == doctest::Approx(0.0));
    CHECK(rho_at(MatrixPoint::scalar(0.0), a) == doctest::Approx(0.2876820724517809).epsilon(1e-15));
    const Complex z(0.0, 0.5), z1(0.5);
    const double expanded = -std::log(1.0 - std::norm(z)) - std::log(1.0 - std::norm(z1)) + std::log(std::norm(1.0 - std::conj(z1) * z));
    CHECK(rho_at(a, MatrixPoint::scalar(z)) == doctest::Approx(expanded).epsilon(1e-14));
    CHECK(rho_at(a, MatrixPoint::scalar(z)) == doctest::Approx(rho_origin(mobius_translate(a, MatrixPoint::scalar(z)))).epsilon(1e-15));
}

TEST_CASE("property (i): rho_A(A) = 0") {
    Rng rng(21);
    for (int k = 0; k < 50; ++k) {
        const MatrixPoint a = random_point(rng, 2, 3, 0.95);
        CHECK(std::abs(rho_at(a, a)) <= 1e-12);
        CHECK(std::abs(PotentialField(a).value(a)) <= 1e-12);
    }
}

TEST_CASE("property (ii): K-invariance") {
    Rng rng(22);
    for (int k = 0; k < 50; ++k) {
        const MatrixPoint z = random_point(rng, 3, 2, 0.95);
        const CMatrix u = random_unitary(rng, 3);
        const CMatrix v = random_unitary(rng, 2);
        CHECK(std::abs(rho_origin(MatrixPoint(u * z.matrix() * v.adjoint())) - rho_origin(z)) <= 1e-10);
    }
}

TEST_CASE("property (iii): d^C rho_A vanishes on radial geodesics") {
    Rng rng(23);
    for (int k = 0; k < 20; ++k) {
        const MatrixPoint a = random_point(rng, 2, 2, 0.8);
        const MatrixPoint b = random_point(rng, 2, 2, 0.8);
        const GeodesicSegment g = geodesic(a, b);
        double worst_analytic = 0.0, worst_fd = 0.0;
        for (const double t : {0.2, 0.4, 0.6, 0.8, 1.0}) {
            const CMatrix vel = g.tangent(t);
            worst_analytic = std::max(worst_analytic, std::abs(dC_rho(a, g.at(t), vel)));
            worst_fd = std::max(worst_fd, std::abs(dC_rho(a, g.at(t), vel, DerivativeMode::finite_difference)));
        }
        CHECK(worst_analytic <= 1e-12);
        CHECK(worst_fd <= 1e-7);
    }
}

TEST_CASE("d^C rho on the disc") {
    const MatrixPoint o = MatrixPoint::scalar(0.0);
    const MatrixPoint z = MatrixPoint::scalar(0.5);
    CMatrix one(1, 1), i(1, 1);
    one(0, 0) = 1.0;
    i(0, 0) = Complex(0.0, 1.0);
    CHECK(std::abs(dC_rho(o, z, one)) < 1e-15);
    // d^C = i(dbar - d) on -log(1 - |z|^2): value 2 Im(conj(z) xi) / (1 - |z|^2) = 4/3.
    CHECK(dC_rho(o, z, i) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(dC_rho(o, z, i, DerivativeMode::finite_difference) == doctest::Approx(4.0 / 3.0).epsilon(1e-9));
    CHECK_THROWS_AS(dC_rho(o, z, CMatrix::Zero(2, 1)), DomainError);
}

TEST_CASE("analytic and finite-difference d^C agree off the radial direction") {
    Rng rng(24);
    for (int k = 0; k < 20; ++k) {
        const MatrixPoint a = random_point(rng, 2, 3, 0.8);
        const MatrixPoint z = random_point(rng, 2, 3, 0.8);
        const CMatrix x = random_dir(rng, 2, 3);
        CHECK(dC_rho(a, z, x) == doctest::Approx(dC_rho(a, z, x, DerivativeMode::finite_difference)).epsilon(1e-7));
    }
}

TEST_CASE("Hessian, metric and Kahler form") {
    Rng rng(25);
    for (int k = 0; k < 20; ++k) {
        const CMatrix z = random_point(rng, 2, 3, 0.9).matrix();
        const CMatrix x = random_dir(rng, 2, 3);
        const CMatrix y = random_dir(rng, 2, 3);
        // g(x, x) against the Laplacian of rho_0 along the complex line z + lambda x.
        CHECK(riemannian_metric(z, x, x) == doctest::Approx(oracle::metric_by_laplacian(z, x)).epsilon(1e-6));
        CHECK(kahler_form(z, x, y) == doctest::Approx(kahler_form(z, x, y, DerivativeMode::finite_difference)).epsilon(1e-6));
        CHECK(kahler_form(z, x, Complex(0.0, 1.0) * x) == doctest::Approx(riemannian_metric(z, x, x)).epsilon(1e-12));
        CHECK(kahler_form(z, x, y) == doctest::Approx(-kahler_form(z, y, x)).epsilon(1e-12));
        CHECK(std::abs(complex_hessian(z, x, y) - std::conj(complex_hessian(z, y, x))) < 1e-12);
    }
    // Disc: omega = 4 dx dy / (1 - |z|^2)^2.
    CMatrix z(1, 1), ex(1, 1), ey(1, 1);
    z(0, 0) = Complex(0.3, 0.4);
    ex(0, 0) = 1.0;
    ey(0, 0) = Complex(0.0, 1.0);
    CHECK(kahler_form(z, ex, ey) == doctest::Approx(4.0 / std::pow(1.0 - 0.25, 2)).epsilon(1e-14));
}

TEST_CASE("conjugate pair on the disc") {
    const ConjugatePair pair = conjugate_pair(MatrixPoint::scalar(0.5));
    CHECK(std::abs(pair.v(MatrixPoint::scalar(0.5))) < 1e-15);
    CHECK(pair.v(MatrixPoint::scalar(Complex(0, 0.5))) == doctest::Approx(2.0 * std::atan(0.25)).epsilon(1e-15));
    CHECK(pair.u(MatrixPoint::scalar(Complex(0, 0.5))) ==
          doctest::Approx(std::log(0.75 / std::norm(Complex(1.0, -0.25)))).epsilon(1e-14));
}

TEST_CASE("degenerate anchor") {
    const ConjugatePair pair(MatrixPoint::zero(2, 2));
    Rng rng(26);
    const MatrixPoint z = random_point(rng, 2, 2, 0.9);
    CHECK(pair.u(z) == 0.0);
    CHECK(pair.v(z) == 0.0);
    CHECK(pair.v_along(geodesic(z, random_point(rng, 2, 2, 0.9))) == 0.0);
}

TEST_CASE("u = rho_0 - rho_Q") {
    Rng rng(27);
    for (int k = 0; k < 20; ++k) {
        const MatrixPoint q = random_point(rng, 2, 3, 0.9);
        const MatrixPoint z = random_point(rng, 2, 3, 0.9);
        CHECK(conjugate_pair(q).u(z) == doctest::Approx(rho_origin(z) - rho_at(q, z)).epsilon(1e-10));
    }
}

TEST_CASE("pluriharmonicity of u") {
    Rng rng(28);
    for (int k = 0; k < 20; ++k) {
        const MatrixPoint q = random_point(rng, 2, 2, 0.8);
        const ConjugatePair pair(q);
        const CMatrix z = random_point(rng, 2, 2, 0.8).matrix();
        const CMatrix x = random_dir(rng, 2, 2);
        const CMatrix y = random_dir(rng, 2, 2);
        // The Levi form vanishes along x, y, x + y and x + iy, hence entrywise.
        for (const CMatrix& d : {CMatrix(x), CMatrix(y), CMatrix(x + y), CMatrix(x + Complex(0, 1) * y)}) {
            const double h = 1e-4;
            const auto u = [&](Complex l) { return pair.u(MatrixPoint(z + l * d)); };
            const double lap = (u(h) + u(-h) + u(Complex(0, h)) + u(Complex(0, -h)) - 4.0 * u(0.0)) / (h * h);
            CHECK(std::abs(lap) <= 1e-6);
        }
    }
}

TEST_CASE("d^C u = dv along paths") {
    Rng rng(29);
    for (int k = 0; k < 10; ++k) {
        const MatrixPoint q = random_point(rng, 2, 2, 0.9);
        const MatrixPoint a = random_point(rng, 2, 2, 0.9);
        const MatrixPoint b = random_point(rng, 2, 2, 0.9);
        const ConjugatePair pair(q);
        const MatrixPoint o = MatrixPoint::zero(2, 2);
        // Straight segment (the ball is convex), not a geodesic.
        const CMatrix dir = b.matrix() - a.matrix();
        const double integral = oracle::integrate01([&](double t) {
            const MatrixPoint z(a.matrix() + t * dir);
            return dC_rho(o, z, dir) - dC_rho(q, z, dir);
        });
        CHECK(integral == doctest::Approx(pair.v(b) - pair.v(a)).epsilon(1e-9));
    }
}

TEST_CASE("eigenvalue branch of v") {
    SUBCASE("matches unwrapping along geodesics") {
        Rng rng(30);
        for (int k = 0; k < 30; ++k) {
            const MatrixPoint q = random_point(rng, 3, 3, 0.999);
            const MatrixPoint z = random_point(rng, 3, 3, 0.999);
            const ConjugatePair pair(q);
            TrackedPhase ph;
            const double tracked = pair.v_along(geodesic(q, z), &ph);
            CHECK_FALSE(ph.capped);
            CHECK(tracked == doctest::Approx(pair.v(z)).epsilon(1e-9));
            CHECK(std::abs(pair.v(z)) < 3.0 * std::numbers::pi);
        }
    }
    SUBCASE("leaves the principal branch when the phases add up") {
        const MatrixPoint q = diag_same(3, 0.995);
        const MatrixPoint z = diag_same(3, std::polar(0.995, 0.6));
        const ConjugatePair pair(q);
        const Complex one_minus = 1.0 - 0.995 * std::polar(0.995, 0.6);
        CHECK(pair.v(z) == doctest::Approx(-6.0 * std::arg(one_minus)).epsilon(1e-13));
        CHECK(std::abs(pair.v(z)) > 2.0 * std::numbers::pi);
        CHECK(pair.branch_index(z) != 0);
        CHECK(pair.v_along(geodesic(q, z)) == doctest::Approx(pair.v(z)).epsilon(1e-10));
    }
}
