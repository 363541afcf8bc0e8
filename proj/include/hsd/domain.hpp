#pragma once

// Type-I bounded symmetric domain D_{p,q} = { Z in C^{p x q} : I - Z*Z > 0 }.
//
// The disc is the 1x1 case, the complex ball is the q = 1 case, and the
// diagonal matrices form the totally geodesic polydisc of rank r = min(p, q).
// Every polydisc factor carries the curvature -1 Poincare metric
// ds = 2|dz| / (1 - |z|^2); all distances and areas in this library use that
// normalization.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <stdexcept>
#include <string>

namespace hsd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Input that violates a domain precondition (membership, dimensions, method applicability).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine failed to converge or hit a singular solve.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct DomainOptions {
    /// Points with sigma_max > 1 - membership_margin are rejected by require_inside.
    double membership_margin = 1e-12;
    /// Eigenvalue floor for square roots of I - AA* and I - A*A.
    double eigen_floor = 1e-14;
};

/// A p x q complex matrix, viewed as a point of D_{p,q} (or of its closure).
/// Membership is not enforced on construction; operations check their own
/// preconditions so that boundary points can still be represented.
class MatrixPoint {
public:
    MatrixPoint() = default;
    explicit MatrixPoint(CMatrix entries);

    static MatrixPoint zero(Index p, Index q);
    static MatrixPoint scalar(Complex z);
    static MatrixPoint diagonal(Index p, Index q, std::span<const Complex> entries);

    Index rows() const { return m_.rows(); }
    Index cols() const { return m_.cols(); }
    Index rank() const { return std::min(m_.rows(), m_.cols()); }

    const CMatrix& matrix() const { return m_; }
    Complex operator()(Index i, Index j) const { return m_(i, j); }

private:
    CMatrix m_;
};

RVector singular_values(const CMatrix& z);
double sigma_max(const CMatrix& z);

/// sigma_max(z) < 1 - margin.
bool contains(const CMatrix& z, double margin = 0.0);
/// As above, but throws DomainError when z is not p x q.
bool contains(Index p, Index q, const CMatrix& z, double margin = 0.0);

/// Throws DomainError naming `what` unless the point lies in the open domain
/// with the configured margin.
void require_inside(const MatrixPoint& z, std::string_view what, const DomainOptions& opts = {});
void require_same_shape(const MatrixPoint& a, const MatrixPoint& b);

/// Z = U diag(sigma) V*, with U p x p and V q x q unitary.
struct SingularDecomposition {
    CMatrix u;
    RVector sigma;
    CMatrix v;

    CMatrix reconstruct() const;
};

/// Concrete K-action taking Z into the diagonal polydisc: U* Z V = diag(sigma).
SingularDecomposition svd_reduce(const MatrixPoint& z);

/// Square root (or inverse square root) of a Hermitian positive-definite matrix.
/// Eigenvalues below `floor` are clamped; `clamped` reports whether that happened.
CMatrix hermitian_sqrt(const CMatrix& h, bool inverse, double floor, bool* clamped = nullptr);

/// Automorphism of D_{p,q} carrying `base` to the origin:
///   phi_A(Z) = (I - AA*)^{-1/2} (Z - A) (I - A*Z)^{-1} (I - A*A)^{1/2}.
/// For 1x1 this is z -> (z - a) / (1 - conj(a) z). The inverse map is phi_{-A}.
class MobiusMap {
public:
    explicit MobiusMap(const MatrixPoint& base, const DomainOptions& opts = {});

    CMatrix apply(const CMatrix& z) const;
    MatrixPoint operator()(const MatrixPoint& z) const { return MatrixPoint(apply(z.matrix())); }

    /// Derivative of phi_A at z in the (complex-linear) direction x.
    CMatrix differential(const CMatrix& z, const CMatrix& x) const;

    MobiusMap inverse() const;

    const MatrixPoint& base() const { return base_; }
    /// True when an eigenvalue floor was hit while forming the square roots.
    bool ill_conditioned() const { return clamped_; }

private:
    MobiusMap() = default;

    MatrixPoint base_;
    CMatrix base_adj_;
    CMatrix left_;   // (I - AA*)^{-1/2}
    CMatrix right_;  // (I - A*A)^{1/2}
    DomainOptions opts_;
    bool identity_ = false;
    bool clamped_ = false;
};

MatrixPoint mobius_translate(const MatrixPoint& base, const MatrixPoint& z);

/// Largest singular value kept for a translated endpoint.
inline constexpr double kMaxTranslatedSigma = 1.0 - 1e-15;

/// Constant-speed geodesic from start (t = 0) to end (t = 1).
///
/// Built by translating start to the origin, writing the image of end as
/// U diag(s_i) V*, following the radial curve U diag(tanh(t artanh s_i)) V*
/// and translating back.
class GeodesicSegment {
public:
    GeodesicSegment(const MatrixPoint& start, const MatrixPoint& end, const DomainOptions& opts = {});

    const MatrixPoint& start() const { return start_; }
    const MatrixPoint& end() const { return end_; }
    double length() const { return length_; }

    CMatrix evaluate(double t) const;
    MatrixPoint at(double t) const { return MatrixPoint(evaluate(t)); }
    /// d/dt of evaluate(t).
    CMatrix tangent(double t) const;

    /// A translated singular value had to be clamped below 1, or a square root
    /// hit its eigenvalue floor; the curve is then only approximate.
    bool ill_conditioned() const { return clamped_; }

private:
    CMatrix radial(double t) const;
    CMatrix radial_velocity(double t) const;

    MatrixPoint start_;
    MatrixPoint end_;
    MobiusMap back_;
    CMatrix u_;  // p x r
    CMatrix v_;  // q x r
    RVector rapidity_;
    double length_ = 0.0;
    bool clamped_ = false;
};

GeodesicSegment geodesic(const MatrixPoint& a, const MatrixPoint& b);

/// Riemannian distance from the origin: sqrt(sum_i (2 artanh sigma_i)^2).
double distance_from_origin(const CMatrix& z);
double distance(const MatrixPoint& a, const MatrixPoint& b);

/// 1 - sigma_min over the r singular values: zero exactly when every singular
/// value is 1 (the Shilov boundary). Accepts points of the closed ball.
double shilov_defect(const MatrixPoint& z);

}  // namespace hsd
