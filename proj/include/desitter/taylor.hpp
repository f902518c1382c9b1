#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <span>

namespace desitter {

/// Truncated Taylor series f(t0 + h) = sum_{i <= K} c[i] h^i, with exact
/// arithmetic on the coefficients. Used to push curve derivatives through
/// rational and algebraic formulas without finite differences.
template <int K>
struct Taylor {
  std::array<double, K + 1> c{};

  static Taylor constant(double v) {
    Taylor t;
    t.c[0] = v;
    return t;
  }

  /// d[i] is the i-th derivative; only the first K + 1 entries are read.
  static Taylor from_derivatives(std::span<const double> d) {
    Taylor t;
    double fact = 1.0;
    for (int i = 0; i <= K && i < static_cast<int>(d.size()); ++i) {
      if (i > 0) fact *= i;
      t.c[static_cast<std::size_t>(i)] = d[static_cast<std::size_t>(i)] / fact;
    }
    return t;
  }

  double value() const { return c[0]; }

  double derivative(int order) const {
    double fact = 1.0;
    for (int i = 2; i <= order; ++i) fact *= i;
    return c[static_cast<std::size_t>(order)] * fact;
  }

  Taylor<K - 1> differentiate() const {
    static_assert(K >= 1);
    Taylor<K - 1> out;
    for (int i = 0; i < K; ++i) out.c[static_cast<std::size_t>(i)] = (i + 1) * c[static_cast<std::size_t>(i) + 1];
    return out;
  }

  template <int J>
  Taylor<J> truncate() const {
    static_assert(J <= K);
    Taylor<J> out;
    for (int i = 0; i <= J; ++i) out.c[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
    return out;
  }

  Taylor& operator+=(const Taylor& o) {
    for (int i = 0; i <= K; ++i) c[i] += o.c[i];
    return *this;
  }
  Taylor& operator-=(const Taylor& o) {
    for (int i = 0; i <= K; ++i) c[i] -= o.c[i];
    return *this;
  }
  Taylor& operator*=(double s) {
    for (auto& x : c) x *= s;
    return *this;
  }
};

template <int K>
Taylor<K> operator+(Taylor<K> a, const Taylor<K>& b) { return a += b; }
template <int K>
Taylor<K> operator-(Taylor<K> a, const Taylor<K>& b) { return a -= b; }
template <int K>
Taylor<K> operator-(Taylor<K> a) { return a *= -1.0; }
template <int K>
Taylor<K> operator*(Taylor<K> a, double s) { return a *= s; }
template <int K>
Taylor<K> operator*(double s, Taylor<K> a) { return a *= s; }
template <int K>
Taylor<K> operator+(Taylor<K> a, double s) {
  a.c[0] += s;
  return a;
}

template <int K>
Taylor<K> operator*(const Taylor<K>& a, const Taylor<K>& b) {
  Taylor<K> out;
  for (int n = 0; n <= K; ++n) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) s += a.c[i] * b.c[n - i];
    out.c[n] = s;
  }
  return out;
}

template <int K>
Taylor<K> operator/(const Taylor<K>& a, const Taylor<K>& b) {
  Taylor<K> q;
  for (int n = 0; n <= K; ++n) {
    double s = a.c[n];
    for (int i = 1; i <= n; ++i) s -= b.c[i] * q.c[n - i];
    q.c[n] = s / b.c[0];
  }
  return q;
}

template <int K>
Taylor<K> sqrt(const Taylor<K>& a) {
  Taylor<K> s;
  s.c[0] = std::sqrt(a.c[0]);
  for (int n = 1; n <= K; ++n) {
    double acc = a.c[n];
    for (int i = 1; i < n; ++i) acc -= s.c[i] * s.c[n - i];
    s.c[n] = acc / (2.0 * s.c[0]);
  }
  return s;
}

template <int K, std::size_t D>
using TaylorVec = std::array<Taylor<K>, D>;

template <int K, std::size_t D>
Taylor<K> dot(const TaylorVec<K, D>& a, const TaylorVec<K, D>& b) {
  Taylor<K> s;
  for (std::size_t i = 0; i < D; ++i) s += a[i] * b[i];
  return s;
}

template <int K>
TaylorVec<K, 3> cross(const TaylorVec<K, 3>& a, const TaylorVec<K, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

template <int K, std::size_t D>
TaylorVec<K - 1, D> differentiate(const TaylorVec<K, D>& a) {
  TaylorVec<K - 1, D> out;
  for (std::size_t i = 0; i < D; ++i) out[i] = a[i].differentiate();
  return out;
}

template <int K, std::size_t D>
TaylorVec<K, D> scale(const TaylorVec<K, D>& a, const Taylor<K>& s) {
  TaylorVec<K, D> out;
  for (std::size_t i = 0; i < D; ++i) out[i] = a[i] * s;
  return out;
}

/// Jet of a vector curve from its derivatives: derivs[j] is the j-th derivative.
template <int K, std::size_t D>
TaylorVec<K, D> taylor_from_derivatives(std::span<const Eigen::Matrix<double, static_cast<int>(D), 1>> derivs) {
  TaylorVec<K, D> out;
  double fact = 1.0;
  for (int j = 0; j <= K; ++j) {
    if (j > 0) fact *= j;
    for (std::size_t i = 0; i < D; ++i) out[i].c[j] = derivs[static_cast<std::size_t>(j)](i) / fact;
  }
  return out;
}

/// j-th derivative of the jet as a plain vector.
template <int K, std::size_t D>
Eigen::Matrix<double, static_cast<int>(D), 1> derivative_of(const TaylorVec<K, D>& a, int order) {
  Eigen::Matrix<double, static_cast<int>(D), 1> out;
  for (std::size_t i = 0; i < D; ++i) out(i) = a[i].derivative(order);
  return out;
}

}  // namespace desitter
