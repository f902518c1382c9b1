#pragma once

#include <Eigen/Dense>

#include <functional>

namespace desitter {

/// Closed parametric curve in R^d given by the trigonometric interpolant of N
/// uniform samples over one period. Immutable; derivatives of any order are
/// exact derivatives of the interpolant.
///
/// The Nyquist mode is carried as a pure cosine so the interpolant is real and
/// reproduces the samples exactly.
class PeriodicCurve {
 public:
  /// samples: N x d, row j is the value at t_j = j * period / N.
  /// Throws GeometryError(too_few_samples) unless N is even and N >= 16, and
  /// (precondition) for non-finite samples or period <= 0.
  PeriodicCurve(Eigen::MatrixXd samples, double period);

  /// Samples f at N uniform parameters and interpolates.
  static PeriodicCurve from_function(const std::function<Eigen::VectorXd(double)>& f, int samples,
                                     double period);

  int dimension() const { return static_cast<int>(samples_.cols()); }
  int sample_count() const { return static_cast<int>(samples_.rows()); }
  double period() const { return period_; }
  double parameter(int index) const { return period_ * index / sample_count(); }
  const Eigen::MatrixXd& samples() const { return samples_; }

  /// order-th derivative with respect to the curve parameter at arbitrary t.
  Eigen::VectorXd evaluate(double t, int order = 0) const;

  /// order-th derivative at the M uniform parameters j * period / M (M even,
  /// M >= N), by zero-padded FFT. Row j holds the value at the j-th parameter.
  Eigen::MatrixXd on_grid(int order, int grid_size) const;
  Eigen::MatrixXd on_grid(int order) const { return on_grid(order, sample_count()); }

  /// Integral of the curve from 0 to t (componentwise); exact for the interpolant.
  Eigen::VectorXd integral(double t) const;
  /// Integral over one period.
  Eigen::VectorXd integral_over_period() const;

  /// Same trigonometric polynomial sampled on a finer (or equal) grid.
  PeriodicCurve resampled(int grid_size) const;

  /// Fraction of the coefficient magnitude carried by the upper quarter of the
  /// modes; small values mean the samples resolve the curve.
  double spectral_tail() const;

 private:
  Eigen::MatrixXd samples_;
  Eigen::MatrixXd cos_coef_;  // (N/2 + 1) x d, mode k in row k
  Eigen::MatrixXd sin_coef_;
  double period_;
};

}  // namespace desitter
