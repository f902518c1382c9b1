#include "desitter/generators.hpp"

#include "desitter/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace desitter {
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd vec3(double x, double y, double z) {
  Eigen::VectorXd v(3);
  v << x, y, z;
  return v;
}

Eigen::Vector3d knot_point(int p, int q, double major, double minor, double t) {
  const double rho = major + minor * std::cos(q * t);
  return {rho * std::cos(p * t), rho * std::sin(p * t), minor * std::sin(q * t)};
}
}  // namespace

PeriodicCurve circle_curve(double radius, int samples) {
  return PeriodicCurve::from_function(
      [radius](double t) { return vec3(radius * std::cos(t), radius * std::sin(t), 0.0); }, samples,
      kTwoPi);
}

PeriodicCurve ellipse_curve(double a, double b, int samples) {
  return PeriodicCurve::from_function(
      [a, b](double t) { return vec3(a * std::cos(t), b * std::sin(t), 0.0); }, samples, kTwoPi);
}

PeriodicCurve torus_knot_curve(int p, int q, double major, double minor, int samples) {
  if (!(major > minor && minor > 0.0)) {
    throw GeometryError(ErrorKind::precondition, "torus_knot_curve: need R > r > 0");
  }
  return PeriodicCurve::from_function(
      [=](double t) { return Eigen::VectorXd(knot_point(p, q, major, minor, t)); }, samples, kTwoPi);
}

PeriodicCurve trefoil_curve(int samples) { return torus_knot_curve(2, 3, 2.0, 1.0, samples); }

PeriodicCurve perturbed_knot_curve(std::uint64_t seed, int samples, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> major_dist(1.8, 2.4);
  std::uniform_real_distribution<double> minor_dist(0.8, 1.1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double major = major_dist(rng);
  const double minor = minor_dist(rng);
  Eigen::Matrix<double, 3, 4> ca, sa;
  for (int m = 0; m < 4; ++m) {
    for (int i = 0; i < 3; ++i) {
      ca(i, m) = amplitude * normal(rng) / (m + 1);
      sa(i, m) = amplitude * normal(rng) / (m + 1);
    }
  }
  return PeriodicCurve::from_function(
      [=](double t) {
        Eigen::Vector3d x = knot_point(2, 3, major, minor, t);
        for (int m = 0; m < 4; ++m) x += ca.col(m) * std::cos((m + 1) * t) + sa.col(m) * std::sin((m + 1) * t);
        return Eigen::VectorXd(x);
      },
      samples, kTwoPi);
}

PeriodicCurve spherical_knot_curve(const Eigen::Vector3d& center, double radius, int samples) {
  return PeriodicCurve::from_function(
      [=](double t) {
        const Eigen::Vector3d x = knot_point(2, 3, 2.0, 1.0, t);
        return Eigen::VectorXd(center + radius * x.normalized());
      },
      samples, kTwoPi);
}

}  // namespace desitter
