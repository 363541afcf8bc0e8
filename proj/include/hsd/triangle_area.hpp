#pragma once

// Symplectic area of geodesic triangles, computed four ways:
//
//   vformula      v(R') - v(Q') from the pluriharmonic pair anchored at Q',
//                 after translating P to the origin (primes denote translated points)
//   stokes        line integral of d^C rho_0 along the translated edge Q'R'
//   quadrature    surface integral of omega over the geodesic-cone patch
//   gauss_bonnet  pi minus the angle sum (disc only)
//
// Orientation: (0, x, iy) with x, y > 0 in the disc has positive area, which is
// the orientation of the patch frame (d/ds, d/dt) used by the quadrature.

#include "hsd/domain.hpp"
#include "hsd/execution.hpp"
#include "hsd/potentials.hpp"

#include <optional>
#include <string_view>

namespace hsd {

enum class AreaMethod { vformula, stokes, quadrature, gauss_bonnet };

std::string_view to_string(AreaMethod m);
std::optional<AreaMethod> parse_area_method(std::string_view name);

struct AreaDiagnostics {
    int windings = 0;          // vformula: 2pi shifts between the branch of v and the principal arg
    int phase_intervals = 0;   // tracked vformula: subintervals used for unwrapping
    int refinement_depth = 0;  // quadrature: deepest cell subdivision
    int cells = 0;             // quadrature: accepted cells
    bool branch_ambiguous = false;
    bool refinement_capped = false;
    bool ill_conditioned = false;
    bool degenerate = false;
};

struct AreaResult {
    double value = 0.0;
    AreaMethod method = AreaMethod::vformula;
    double error = 0.0;
    AreaDiagnostics diagnostics;
};

/// Ordered vertices of a geodesic triangle.
struct Triangle {
    MatrixPoint p;
    MatrixPoint q;
    MatrixPoint r;
};

/// sigma(s, t) = geodesic(P, gamma_QR(t)) evaluated at s, on [0,1]^2.
/// sigma(0, t) = P, sigma(1, 0) = Q, sigma(1, 1) = R.
class TrianglePatch {
public:
    TrianglePatch(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r);

    CMatrix evaluate(double s, double t) const;

    const MatrixPoint& p() const { return p_; }
    const MatrixPoint& q() const { return q_; }
    const MatrixPoint& r() const { return r_; }

private:
    MatrixPoint p_, q_, r_;
    MobiusMap to_origin_;
    MobiusMap from_origin_;
    GeodesicSegment base_edge_;  // translated Q' -> R'
};

/// U diag(tanh(s artanh sigma_i)) V* for w = U diag(sigma) V*: the point at
/// parameter s on the geodesic from the origin to w.
CMatrix radial_scale(const CMatrix& w, double s);

/// Upper bound r*pi for triangles in D_{p,q}.
double rank_bound(Index p, Index q);

/// True for repeated vertices or vertices on a common geodesic.
bool is_degenerate(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r);

/// Vertices with 1 - sigma_max below this are flagged ill-conditioned by every
/// method and rejected by the surface quadrature.
inline constexpr double kNearBoundary = 1e-10;

struct QuadratureOptions {
    double abs_tol = 1e-10;
    int max_depth = 6;
    /// Vertices with 1 - sigma_max below this are rejected.
    double boundary_floor = kNearBoundary;
    DerivativeMode hessian = DerivativeMode::analytic;
    Execution execution = Execution::serial;
};

AreaResult area_vformula(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r);
/// Same quantity, with v continued along the translated edge Q'R' by
/// adaptive phase unwrapping instead of the eigenvalue branch.
AreaResult area_vformula_tracked(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r);
AreaResult area_stokes(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r);
AreaResult area_quadrature(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r,
                           const QuadratureOptions& opts = {});
/// Disc only; throws DomainError for any other shape.
AreaResult area_gauss_bonnet(const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r);

AreaResult area(AreaMethod method, const MatrixPoint& p, const MatrixPoint& q, const MatrixPoint& r);
inline AreaResult area(AreaMethod method, const Triangle& t) { return area(method, t.p, t.q, t.r); }

/// 2 |arg(1 - conj(z1) z2)|: the unsigned area of the disc triangle (0, z1, z2).
double disc_closed_form(Complex z1, Complex z2);
/// Signed version, -2 arg(1 - conj(z1) z2).
double disc_signed_closed_form(Complex z1, Complex z2);

}  // namespace hsd
