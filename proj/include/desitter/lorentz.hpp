#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

namespace desitter {

/// Element of R^5 carrying the form <x,y> = x1y1 + x2y2 + x3y3 + x4y4 - x5y5.
/// Points of the light cone, of de Sitter space and tangent vectors all use it.
using LorentzVector = Eigen::Matrix<double, 5, 1>;
using LorentzMatrix = Eigen::Matrix<double, 5, 5>;

inline constexpr double kDefaultCausalTol = 1e-8;

/// Unit coordinate vector e_{index+1} (zero-based index).
LorentzVector basis_vector(int index);

double inner(const LorentzVector& x, const LorentzVector& y);

/// Sign-symmetric, scale-invariant "norm" used for tolerances: max |x_i|.
inline double sup_norm(const LorentzVector& x) { return x.cwiseAbs().maxCoeff(); }

enum class CausalType { spacelike, timelike, lightlike, zero };

const char* to_string(CausalType type);

/// zero if |x|_inf <= tol; lightlike if |<x,x>| <= tol |x|_inf^2; otherwise by
/// the sign of <x,x>.
CausalType causal_type(const LorentzVector& x, double tol = kDefaultCausalTol);

/// Lorentz exterior product: the vector nu with <nu,w> = det(a,b,c,d,w) for every
/// w. It is orthogonal to a, b, c, d and vanishes iff they are dependent.
LorentzVector wedge4(const LorentzVector& a, const LorentzVector& b, const LorentzVector& c,
                     const LorentzVector& d);

/// Result of Lorentz Gram-Schmidt: basis[i] has <basis[i],basis[i]> = signs[i].
struct LorentzFrame {
  std::vector<LorentzVector> basis;
  std::vector<int> signs;

  int negative_count() const;
};

/// Sequential Gram-Schmidt for the Lorentz form. Throws GeometryError
/// (degenerate_span) when a step leaves a null vector, (rank_deficient) when a
/// step leaves nothing.
LorentzFrame gram_schmidt_lorentz(std::span<const LorentzVector> vectors, double tol = 1e-10);

/// Orthonormalizes a basis of a non-degenerate subspace without depending on the
/// input order: the Gram matrix is diagonalized, so a null first vector is not a
/// problem. Space-like directions come first in the output.
LorentzFrame orthonormalize_subspace(std::span<const LorentzVector> vectors, double tol = 1e-10);

/// Basis (euclidean-orthonormal, not Lorentz-normalized) of
/// {w : <w,v_i> = 0 for all i}. Throws GeometryError(rank_deficient).
std::vector<LorentzVector> orthogonal_complement(std::span<const LorentzVector> vectors,
                                                 double tol = 1e-10);

/// Lorentz-orthogonal projector onto the complement of span(vectors): the
/// returned matrix P satisfies P v_i = 0 and P w = w for w in the complement.
/// Requires span(vectors) non-degenerate.
LorentzMatrix complement_projector(std::span<const LorentzVector> vectors);

/// The Lorentz metric diag(1,1,1,1,-1).
const LorentzMatrix& metric();

/// Linear map of R^5 preserving the form: M^T G M = G.
class LorentzTransform {
 public:
  LorentzTransform() : matrix_(LorentzMatrix::Identity()) {}
  /// Throws GeometryError(precondition) if M^T G M differs from G by more than tol.
  explicit LorentzTransform(const LorentzMatrix& matrix, double tol = 1e-10);

  const LorentzMatrix& matrix() const { return matrix_; }
  LorentzVector operator()(const LorentzVector& x) const { return matrix_ * x; }
  LorentzTransform inverse() const;
  LorentzTransform compose(const LorentzTransform& after) const;

  /// max |M^T G M - G|.
  double form_residual() const;
  bool orthochronous() const { return matrix_(4, 4) > 0.0; }
  double determinant() const { return matrix_.determinant(); }

 private:
  LorentzMatrix matrix_;
};

/// Deterministic proper orthochronous Lorentz transform. The seed drives a
/// Gaussian perturbation I + spread*R of the identity which is then Lorentz
/// orthonormalized (time column first); degenerate draws are redrawn from the
/// same stream. Larger spread gives stronger boosts.
LorentzTransform random_lorentz_transform(std::uint64_t seed, double spread = 0.5);

}  // namespace desitter
