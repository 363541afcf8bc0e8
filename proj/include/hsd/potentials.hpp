#pragma once

// Special potentials of the Kahler form and the pluriharmonic pair.
//
// With d^C = i (dbar - d) the potential rho_0(Z) = -log det(I - Z*Z) satisfies
// dd^C rho_0 = omega, and on the disc rho_0 = -log(1 - |z|^2) gives the area form
// of the curvature -1 metric. Translates rho_A(Z) = rho_0(phi_A(Z)) vanish at A,
// are invariant under the stabilizer of A, and d^C rho_A annihilates tangents of
// geodesics through A.

#include "hsd/domain.hpp"

#include <vector>

namespace hsd {

enum class DerivativeMode { analytic, finite_difference };

/// Defect 1 - sigma_max below which potential values are flagged as ill-conditioned.
inline constexpr double kPotentialDefectFloor = 1e-14;

double rho_origin(const MatrixPoint& z);
double rho_at(const MatrixPoint& center, const MatrixPoint& z);

/// True when rho_origin(z) is evaluated closer to the boundary than kPotentialDefectFloor.
bool potential_near_boundary(const MatrixPoint& z);

/// d^C rho_center at z, paired with a real tangent vector given as a p x q complex matrix.
double dC_rho(const MatrixPoint& center, const MatrixPoint& z, const CMatrix& tangent,
              DerivativeMode mode = DerivativeMode::analytic);

/// Complex Hessian of rho_0 (identical for every rho_A):
///   h_Z(x, y) = tr((I - ZZ*)^{-1} x (I - Z*Z)^{-1} y*).
Complex complex_hessian(const CMatrix& z, const CMatrix& x, const CMatrix& y);

/// omega_Z(x, y) = -4 Im h_Z(x, y).
double kahler_form(const CMatrix& z, const CMatrix& x, const CMatrix& y,
                   DerivativeMode mode = DerivativeMode::analytic);

/// Riemannian metric g_Z(x, y) = 4 Re h_Z(x, y).
double riemannian_metric(const CMatrix& z, const CMatrix& x, const CMatrix& y);

/// Potential centred at a fixed point.
class PotentialField {
public:
    explicit PotentialField(MatrixPoint center);

    const MatrixPoint& center() const { return center_; }
    Index rows() const { return center_.rows(); }
    Index cols() const { return center_.cols(); }

    double value(const MatrixPoint& z) const;
    double dC(const MatrixPoint& z, const CMatrix& tangent, DerivativeMode mode = DerivativeMode::analytic) const;

private:
    MatrixPoint center_;
    MobiusMap to_origin_;
};

/// Accumulated phase of a nonvanishing function along a path, unwrapped by
/// adaptive subdivision.
struct TrackedPhase {
    double increment = 0.0;  // total change of arg along the path
    int windings = 0;        // number of times the principal branch was crossed
    int intervals = 0;       // subintervals after refinement
    int max_depth = 0;
    bool capped = false;     // subdivision cap reached somewhere
    bool ambiguous = false;  // function came within kBranchFloor of zero
};

/// sum_i Log(1 - lambda_i) over the eigenvalues of a^* z (a, z in the domain).
/// Every |lambda_i| < 1, so each term has imaginary part in (-pi/2, pi/2) and
/// the sum is a continuous branch of log det(I - a^* z) on the whole domain.
Complex log_det_kernel(const CMatrix& a, const CMatrix& z);

/// The pair (u, v) = (Re H, Im H) with H(Z) = log det(I - Q*Q) - 2 log det(I - Q*Z),
/// so that u = rho_0 - rho_Q and d^C u = dv.
///
/// v uses the eigenvalue branch of log det(I - Q*Z), normalized by v(Q) = 0,
/// so |v| < r*pi everywhere. v_along recovers the same branch independently
/// by continuing the principal argument along a path.
class ConjugatePair {
public:
    static constexpr double kBranchFloor = 1e-12;

    explicit ConjugatePair(MatrixPoint anchor);

    const MatrixPoint& anchor() const { return anchor_; }

    double u(const MatrixPoint& z) const;
    double v(const MatrixPoint& z) const;
    /// -2 Arg det(I - Q*Z), the principal branch.
    double v_principal(const MatrixPoint& z) const;
    /// Number of 2pi shifts between the branch of v and the principal argument of det(I - Q*Z).
    int branch_index(const MatrixPoint& z) const;
    /// det(I - Q*Z).
    Complex kernel_det(const CMatrix& z) const;

    /// v at path.end(), continued from the principal value at path.start().
    double v_along(const GeodesicSegment& path, TrackedPhase* phase = nullptr) const;

    /// Continuous change of arg det(I - Q*Z) along the path.
    TrackedPhase track_phase(const GeodesicSegment& path) const;

private:
    MatrixPoint anchor_;
    CMatrix anchor_adj_;
    double log_det_anchor_ = 0.0;
    bool trivial_ = false;
};

ConjugatePair conjugate_pair(const MatrixPoint& q);

}  // namespace hsd
