#include "desitter/lorentz.hpp"

#include "desitter/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace desitter {

LorentzVector basis_vector(int index) {
  LorentzVector e = LorentzVector::Zero();
  e(index) = 1.0;
  return e;
}

double inner(const LorentzVector& x, const LorentzVector& y) {
  return x(0) * y(0) + x(1) * y(1) + x(2) * y(2) + x(3) * y(3) - x(4) * y(4);
}

const char* to_string(CausalType type) {
  switch (type) {
    case CausalType::spacelike: return "spacelike";
    case CausalType::timelike: return "timelike";
    case CausalType::lightlike: return "lightlike";
    case CausalType::zero: return "zero";
  }
  return "unknown";
}

CausalType causal_type(const LorentzVector& x, double tol) {
  const double scale = sup_norm(x);
  if (scale <= tol) return CausalType::zero;
  const double q = inner(x, x);
  if (std::abs(q) <= tol * scale * scale) return CausalType::lightlike;
  return q > 0.0 ? CausalType::spacelike : CausalType::timelike;
}

LorentzVector wedge4(const LorentzVector& a, const LorentzVector& b, const LorentzVector& c,
                     const LorentzVector& d) {
  Eigen::Matrix<double, 5, 4> cols;
  cols << a, b, c, d;
  // <nu,w> = det[a b c d w] = sum_i w_i * cofactor_i; the metric sign moves to nu_5.
  LorentzVector nu;
  for (int i = 0; i < 5; ++i) {
    Eigen::Matrix4d minor;
    for (int r = 0, mr = 0; r < 5; ++r) {
      if (r == i) continue;
      minor.row(mr++) = cols.row(r);
    }
    const double sign = ((i + 4) % 2 == 0) ? 1.0 : -1.0;
    nu(i) = sign * minor.determinant();
  }
  nu(4) = -nu(4);
  return nu;
}

int LorentzFrame::negative_count() const {
  return static_cast<int>(std::count(signs.begin(), signs.end(), -1));
}

LorentzFrame gram_schmidt_lorentz(std::span<const LorentzVector> vectors, double tol) {
  LorentzFrame frame;
  for (const LorentzVector& v : vectors) {
    LorentzVector w = v;
    // Two passes keep the residual pairings at roundoff level.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < frame.basis.size(); ++i) {
        w -= frame.signs[i] * inner(w, frame.basis[i]) * frame.basis[i];
      }
    }
    const double scale = sup_norm(w);
    if (scale <= tol * std::max(1.0, sup_norm(v))) {
      throw GeometryError(ErrorKind::rank_deficient,
                          "gram_schmidt_lorentz: input vectors are linearly dependent");
    }
    const double q = inner(w, w);
    if (std::abs(q) <= tol * scale * scale) {
      throw GeometryError(ErrorKind::degenerate_span,
                          "gram_schmidt_lorentz: null direction in the flag");
    }
    frame.basis.push_back(w / std::sqrt(std::abs(q)));
    frame.signs.push_back(q > 0.0 ? 1 : -1);
  }
  return frame;
}

LorentzFrame orthonormalize_subspace(std::span<const LorentzVector> vectors, double tol) {
  const auto k = static_cast<Eigen::Index>(vectors.size());
  Eigen::Matrix<double, 5, Eigen::Dynamic> v(5, k);
  for (Eigen::Index j = 0; j < k; ++j) v.col(j) = vectors[j];

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v);
  const auto& sv = svd.singularValues();
  if (k == 0) return {};
  if (sv(k - 1) <= tol * sv(0)) {
    throw GeometryError(ErrorKind::rank_deficient, "orthonormalize_subspace: dependent vectors");
  }

  const Eigen::MatrixXd gram = v.transpose() * metric() * v;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const double scale = std::max(lambda.cwiseAbs().maxCoeff(), sv(0) * sv(0));

  LorentzFrame frame;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  // Space-like directions first, each group by decreasing |lambda|.
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if ((lambda(a) > 0) != (lambda(b) > 0)) return lambda(a) > 0;
    return std::abs(lambda(a)) > std::abs(lambda(b));
  });
  for (Eigen::Index j : order) {
    if (std::abs(lambda(j)) <= tol * scale) {
      throw GeometryError(ErrorKind::degenerate_span,
                          "orthonormalize_subspace: subspace is tangent to the light cone");
    }
    LorentzVector f = v * eig.eigenvectors().col(j) / std::sqrt(std::abs(lambda(j)));
    frame.basis.push_back(f);
    frame.signs.push_back(lambda(j) > 0 ? 1 : -1);
  }
  return frame;
}

std::vector<LorentzVector> orthogonal_complement(std::span<const LorentzVector> vectors,
                                                 double tol) {
  const auto k = static_cast<Eigen::Index>(vectors.size());
  if (k > 4) {
    throw GeometryError(ErrorKind::rank_deficient, "orthogonal_complement: more than 4 vectors");
  }
  std::vector<LorentzVector> out;
  if (k == 0) {
    for (int i = 0; i < 5; ++i) out.push_back(basis_vector(i));
    return out;
  }
  Eigen::MatrixXd rows(k, 5);
  for (Eigen::Index i = 0; i < k; ++i) rows.row(i) = (metric() * vectors[i]).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(k - 1) <= tol * sv(0)) {
    throw GeometryError(ErrorKind::rank_deficient, "orthogonal_complement: dependent vectors");
  }
  for (Eigen::Index j = k; j < 5; ++j) out.push_back(svd.matrixV().col(j));
  return out;
}

LorentzMatrix complement_projector(std::span<const LorentzVector> vectors) {
  const LorentzFrame frame = orthonormalize_subspace(vectors);
  LorentzMatrix p = LorentzMatrix::Identity();
  for (std::size_t i = 0; i < frame.basis.size(); ++i) {
    p -= frame.signs[i] * frame.basis[i] * (metric() * frame.basis[i]).transpose();
  }
  return p;
}

const LorentzMatrix& metric() {
  static const LorentzMatrix g = [] {
    LorentzMatrix m = LorentzMatrix::Identity();
    m(4, 4) = -1.0;
    return m;
  }();
  return g;
}

LorentzTransform::LorentzTransform(const LorentzMatrix& matrix, double tol) : matrix_(matrix) {
  const double residual = form_residual();
  if (!(residual <= tol)) {
    throw GeometryError(ErrorKind::precondition,
                        "LorentzTransform: matrix does not preserve the Lorentz form (residual " +
                            std::to_string(residual) + ")");
  }
}

double LorentzTransform::form_residual() const {
  return (matrix_.transpose() * metric() * matrix_ - metric()).cwiseAbs().maxCoeff();
}

LorentzTransform LorentzTransform::inverse() const {
  LorentzTransform inv;
  inv.matrix_ = metric() * matrix_.transpose() * metric();
  return inv;
}

LorentzTransform LorentzTransform::compose(const LorentzTransform& after) const {
  LorentzTransform out;
  out.matrix_ = after.matrix_ * matrix_;
  return out;
}

LorentzTransform random_lorentz_transform(std::uint64_t seed, double spread) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (;;) {
    LorentzMatrix draw = LorentzMatrix::Identity();
    for (int r = 0; r < 5; ++r) {
      for (int c = 0; c < 5; ++c) draw(r, c) += spread * normal(rng);
    }
    // Time column first so it is guaranteed a time-like slot in the flag.
    std::vector<LorentzVector> columns{draw.col(4), draw.col(0), draw.col(1), draw.col(2),
                                       draw.col(3)};
    if (causal_type(columns[0], 1e-3) != CausalType::timelike) continue;
    LorentzFrame frame;
    try {
      frame = gram_schmidt_lorentz(columns, 1e-6);
    } catch (const GeometryError&) {
      continue;
    }
    if (frame.signs[0] != -1) continue;

    LorentzMatrix m;
    LorentzVector time = frame.basis[0];
    if (time(4) < 0.0) time = -time;
    for (int c = 0; c < 4; ++c) m.col(c) = frame.basis[static_cast<std::size_t>(c) + 1];
    m.col(4) = time;
    if (m.determinant() < 0.0) m.col(0) = -m.col(0);
    return LorentzTransform(m, 1e-10);
  }
}

}  // namespace desitter
