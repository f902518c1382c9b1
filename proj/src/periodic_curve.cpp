#include "desitter/periodic_curve.hpp"

#include "desitter/error.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

namespace desitter {
namespace {

using Complex = std::complex<double>;

// (A, B) such that d^m/dt^m [a cos(k w t) + b sin(k w t)] = A cos + B sin.
void differentiate_mode(double a, double b, double kw, int order, double& out_a, double& out_b) {
  const double scale = std::pow(kw, order);
  switch (order % 4) {
    case 0: out_a = a; out_b = b; break;
    case 1: out_a = b; out_b = -a; break;
    case 2: out_a = -a; out_b = -b; break;
    default: out_a = -b; out_b = a; break;
  }
  out_a *= scale;
  out_b *= scale;
}

}  // namespace

PeriodicCurve::PeriodicCurve(Eigen::MatrixXd samples, double period)
    : samples_(std::move(samples)), period_(period) {
  const auto n = samples_.rows();
  if (n < 16 || n % 2 != 0) {
    throw GeometryError(ErrorKind::too_few_samples,
                        "PeriodicCurve: need an even sample count >= 16, got " + std::to_string(n));
  }
  if (!(period_ > 0.0) || !std::isfinite(period_)) {
    throw GeometryError(ErrorKind::precondition, "PeriodicCurve: period must be positive");
  }
  if (!samples_.allFinite()) {
    throw GeometryError(ErrorKind::precondition, "PeriodicCurve: non-finite sample");
  }

  const auto half = n / 2;
  cos_coef_.resize(half + 1, samples_.cols());
  sin_coef_.resize(half + 1, samples_.cols());
  Eigen::FFT<double> fft;
  std::vector<double> column(static_cast<std::size_t>(n));
  std::vector<Complex> spectrum;
  for (Eigen::Index d = 0; d < samples_.cols(); ++d) {
    for (Eigen::Index j = 0; j < n; ++j) column[static_cast<std::size_t>(j)] = samples_(j, d);
    fft.fwd(spectrum, column);
    const double inv_n = 1.0 / static_cast<double>(n);
    cos_coef_(0, d) = spectrum[0].real() * inv_n;
    sin_coef_(0, d) = 0.0;
    for (Eigen::Index k = 1; k < half; ++k) {
      cos_coef_(k, d) = 2.0 * spectrum[static_cast<std::size_t>(k)].real() * inv_n;
      sin_coef_(k, d) = -2.0 * spectrum[static_cast<std::size_t>(k)].imag() * inv_n;
    }
    cos_coef_(half, d) = spectrum[static_cast<std::size_t>(half)].real() * inv_n;
    sin_coef_(half, d) = 0.0;
  }
}

PeriodicCurve PeriodicCurve::from_function(const std::function<Eigen::VectorXd(double)>& f,
                                           int samples, double period) {
  if (samples < 1) {
    throw GeometryError(ErrorKind::too_few_samples, "PeriodicCurve::from_function: no samples");
  }
  const Eigen::VectorXd first = f(0.0);
  Eigen::MatrixXd data(samples, first.size());
  data.row(0) = first.transpose();
  for (int j = 1; j < samples; ++j) data.row(j) = f(period * j / samples).transpose();
  return PeriodicCurve(std::move(data), period);
}

Eigen::VectorXd PeriodicCurve::evaluate(double t, int order) const {
  const double omega = 2.0 * std::numbers::pi / period_;
  const auto half = cos_coef_.rows() - 1;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(samples_.cols());
  if (order == 0) out = cos_coef_.row(0).transpose();

  // cos/sin of k*theta by rotation, reseeded periodically to bound drift.
  const double theta = omega * std::fmod(t, period_);
  const Complex step(std::cos(theta), std::sin(theta));
  Complex phase(1.0, 0.0);
  for (Eigen::Index k = 1; k <= half; ++k) {
    if (k % 16 == 0) {
      phase = Complex(std::cos(theta * static_cast<double>(k)), std::sin(theta * static_cast<double>(k)));
    } else {
      phase *= step;
    }
    const double kw = omega * static_cast<double>(k);
    for (Eigen::Index d = 0; d < out.size(); ++d) {
      double a = 0.0;
      double b = 0.0;
      differentiate_mode(cos_coef_(k, d), sin_coef_(k, d), kw, order, a, b);
      out(d) += a * phase.real() + b * phase.imag();
    }
  }
  return out;
}

Eigen::MatrixXd PeriodicCurve::on_grid(int order, int grid_size) const {
  const auto n = samples_.rows();
  if (grid_size < n || grid_size % 2 != 0) {
    throw GeometryError(ErrorKind::precondition,
                        "PeriodicCurve::on_grid: grid must be even and at least the sample count");
  }
  const double omega = 2.0 * std::numbers::pi / period_;
  const auto half = n / 2;
  const auto m = static_cast<std::size_t>(grid_size);

  Eigen::MatrixXd out(grid_size, samples_.cols());
  Eigen::FFT<double> fft;
  std::vector<Complex> bins(m);
  std::vector<double> values;
  for (Eigen::Index d = 0; d < samples_.cols(); ++d) {
    std::fill(bins.begin(), bins.end(), Complex(0.0, 0.0));
    if (order == 0) bins[0] = static_cast<double>(grid_size) * cos_coef_(0, d);
    for (Eigen::Index k = 1; k <= half; ++k) {
      double a = 0.0;
      double b = 0.0;
      differentiate_mode(cos_coef_(k, d), sin_coef_(k, d), omega * static_cast<double>(k), order, a, b);
      const auto ku = static_cast<std::size_t>(k);
      if (2 * ku == m) {
        bins[ku] += static_cast<double>(grid_size) * a;
      } else {
        bins[ku] += 0.5 * static_cast<double>(grid_size) * Complex(a, -b);
        bins[m - ku] += 0.5 * static_cast<double>(grid_size) * Complex(a, b);
      }
    }
    fft.inv(values, bins);
    for (std::size_t j = 0; j < m; ++j) out(static_cast<Eigen::Index>(j), d) = values[j];
  }
  return out;
}

Eigen::VectorXd PeriodicCurve::integral(double t) const {
  const double omega = 2.0 * std::numbers::pi / period_;
  const auto half = cos_coef_.rows() - 1;
  Eigen::VectorXd out = cos_coef_.row(0).transpose() * t;
  for (Eigen::Index k = 1; k <= half; ++k) {
    const double kw = omega * static_cast<double>(k);
    const double s = std::sin(kw * t);
    const double c = std::cos(kw * t);
    for (Eigen::Index d = 0; d < out.size(); ++d) {
      out(d) += (cos_coef_(k, d) * s + sin_coef_(k, d) * (1.0 - c)) / kw;
    }
  }
  return out;
}

Eigen::VectorXd PeriodicCurve::integral_over_period() const {
  return cos_coef_.row(0).transpose() * period_;
}

PeriodicCurve PeriodicCurve::resampled(int grid_size) const {
  return PeriodicCurve(on_grid(0, grid_size), period_);
}

double PeriodicCurve::spectral_tail() const {
  const auto half = cos_coef_.rows() - 1;
  const auto start = half - half / 4;
  double total = 0.0;
  double tail = 0.0;
  for (Eigen::Index k = 1; k <= half; ++k) {
    const double mag = cos_coef_.row(k).cwiseAbs().sum() + sin_coef_.row(k).cwiseAbs().sum();
    total += mag;
    if (k > start) tail += mag;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace desitter
