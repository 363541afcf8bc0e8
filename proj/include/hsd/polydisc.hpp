#pragma once

// The diagonal polydisc of D_{p,q}, the nearest-point projection onto it, and
// numerical checks of the identities the rank reduction relies on.

#include "hsd/domain.hpp"
#include "hsd/triangle_area.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hsd {

/// r = min(p, q) disc coordinates, embedded as the principal diagonal of a p x q matrix.
class PolydiscPoint {
public:
    PolydiscPoint(Index p, Index q, std::vector<Complex> coords);

    Index rows() const { return p_; }
    Index cols() const { return q_; }
    const std::vector<Complex>& coords() const { return coords_; }

private:
    Index p_;
    Index q_;
    std::vector<Complex> coords_;
};

MatrixPoint embed(const PolydiscPoint& w);

/// True when every off-diagonal entry is exactly zero.
bool is_diagonal(const MatrixPoint& z);

struct DiscTriangle {
    Complex p;
    Complex q;
    Complex r;
};

/// Signed area of a disc triangle from the closed form, after translating p to 0.
double disc_triangle_area(const DiscTriangle& t);

/// |vformula area of the product triangle in D_{r,r} - sum of factor disc areas|.
double area_additivity_check(std::span<const DiscTriangle> factors);

struct ProjectionOptions {
    double tolerance = 1e-10;  // optimizer step tolerance
    int random_starts = 3;
    std::uint64_t seed = 20240601;
    int max_evaluations = 4000;  // per start
};

struct ProjectionResult {
    PolydiscPoint point;
    double distance = 0.0;
    int evaluations = 0;
    /// Whether Z's own diagonal was already the minimizer (within 1e-6).
    bool diagonal_is_minimizer = false;
};

/// Raised when no start converges; carries the best candidate found.
class ProjectionError : public NumericalError {
public:
    ProjectionError(const std::string& what, ProjectionResult best)
        : NumericalError(what), best_(std::move(best)) {}
    const ProjectionResult& best() const { return best_; }

private:
    ProjectionResult best_;
};

/// argmin over w in the polydisc of distance(embed(w), z).
ProjectionResult project_to_polydisc(const MatrixPoint& z, const ProjectionOptions& opts = {});

struct InvarianceCheck {
    double residual = 0.0;
    double error_estimate = 0.0;
    AreaResult original;   // quadrature over T(0, Q, R)
    AreaResult projected;  // vformula over T(0, Q, pi(R))
};

/// Compares the area of T(0, embed(Q), R) with the area of T(0, embed(Q), embed(pi(R))).
InvarianceCheck verify_projection_invariance(const PolydiscPoint& q, const MatrixPoint& r,
                                             const ProjectionOptions& opts = {});

/// Largest normalized Riemannian inner product between the geodesic direction
/// pi(R) -> R at the foot point and the real tangent directions of the polydisc.
/// R must not lie in the polydisc.
double verify_orthogonality(const MatrixPoint& r, const ProjectionOptions& opts = {});

struct VanishingCheck {
    double residual = 0.0;
    double error_estimate = 0.0;
    /// True when the full face T(0, R, pi(R)) was integrated (real R); otherwise
    /// the edge form along R -> pi(R) was used.
    bool full_face = false;
};

VanishingCheck verify_totally_real_vanishing(const MatrixPoint& r, const ProjectionOptions& opts = {});

}  // namespace hsd
