#pragma once

#include "desitter/periodic_curve.hpp"
#include "desitter/sphere_model.hpp"

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace desitter {

/// Trigonometric interpolant of closed-curve samples (rows of points).
PeriodicCurve curve_from_samples(const Eigen::MatrixXd& points, double period);

/// Frenet apparatus at one point. Derivatives dk, ddk, dtau are with respect
/// to arc length; tau follows (x' x x'').x''' / |x' x x''|^2.
struct FrenetPoint {
  Vec3 position = Vec3::Zero();
  Vec3 T = Vec3::Zero();
  Vec3 N = Vec3::Zero();
  Vec3 B = Vec3::Zero();
  double speed = 0.0;
  double k = 0.0;
  double tau = 0.0;
  double dk = 0.0;
  double ddk = 0.0;
  double dtau = 0.0;

  /// k'^2 + k^2 tau^2, zero exactly at vertices.
  double g() const { return dk * dk + k * k * tau * tau; }
};

/// derivs[j] = x^(j)(t) for j = 0..5 (any parameter).
FrenetPoint frenet_from_derivatives(std::span<const Vec3> derivs);
FrenetPoint frenet_at(const PeriodicCurve& curve, double t);

/// Frenet data on the uniform parameter grid t_j = j L / M of a closed curve.
/// u holds the arc length at each t_j; quadrature over du uses weight(j) =
/// speed(j) * L / M (the trapezoid rule, spectrally accurate here).
struct FrenetData {
  std::shared_ptr<const PeriodicCurve> curve;
  Eigen::VectorXd t;
  Eigen::VectorXd u;
  Eigen::VectorXd speed;
  Eigen::VectorXd weight;
  Eigen::VectorXd k;
  Eigen::VectorXd tau;
  Eigen::VectorXd dk;
  Eigen::VectorXd ddk;
  Eigen::VectorXd dtau;
  Eigen::MatrixXd position;  // M x 3
  Eigen::MatrixXd T;
  Eigen::MatrixXd N;
  Eigen::MatrixXd B;
  double length = 0.0;

  int size() const { return static_cast<int>(t.size()); }
  double g(int j) const { return dk(j) * dk(j) + k(j) * k(j) * tau(j) * tau(j); }
  FrenetPoint point(int j) const;
};

/// Throws GeometryError(irregular_curve) if the speed drops below 1e-8 of its
/// maximum and (inflection) if min k < 1e-6 max k on the grid. grid_size = 0
/// uses the sample count of the curve.
FrenetData frenet_apparatus(const PeriodicCurve& curve, int grid_size = 0);

/// Curve parameter at arc length u (taken modulo the length).
double parameter_at_arclength(const FrenetData& f, double u);

struct VertexReport {
  std::vector<double> parameters;  // curve parameters of the vertices
  double min_g = 0.0;              // k'^2 + k^2 tau^2 where margin is attained
  double margin = 0.0;             // grid minimum of (k'^2 + k^2 tau^2) / k^4
  bool vertex_free = false;        // margin > tol
};

/// Vertices are the zeros of g = k'^2 + k^2 tau^2. The test uses g / k^4, which
/// is invariant under scaling and local: a point is reported when
/// g <= tol * k^4. Local minima of the ratio on the grid are refined with
/// Brent's method; runs of sub-threshold grid points (arcs of circles) are
/// reported whole.
VertexReport detect_vertices(const FrenetData& f, double tol = 1e-6);

/// Osculating sphere: center x + N/k - (k'/(k^2 tau)) B, radius
/// sqrt(1/k^2 + k'^2/(k^4 tau^2)). Throws GeometryError(vertex) where
/// g <= vertex_tol k^4 and (zero_torsion) where |tau| <= vertex_tol k.
EuclideanSphere osculating_sphere(const FrenetPoint& p, double vertex_tol = 1e-12);
EuclideanSphere osculating_sphere(const PeriodicCurve& x, double t, double vertex_tol = 1e-12);
/// Same at arc length u of the curve described by f.
EuclideanSphere osculating_sphere(const FrenetData& f, const PeriodicCurve& x, double u,
                                  double vertex_tol = 1e-12);

struct Circle3 {
  Vec3 center = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  double radius = 1.0;
};

struct Line3 {
  Vec3 point = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
};

Circle3 osculating_circle(const FrenetPoint& p);
Line3 tangent_line(const FrenetPoint& p);

using ContactTarget = std::variant<EuclideanSphere, Circle3, Line3>;

/// Euclidean distance from x to the target.
double distance_to(const ContactTarget& target, const Vec3& x);

struct ContactEstimate {
  int order = 0;          // estimated contact order
  double slope = 0.0;     // fitted order of vanishing of the distance
  double residual = 0.0;  // spread of the local slopes around the integer
};

/// Order of vanishing of h -> dist(x(t + h), target), from the halving slopes
/// at h = +-step * 2^-j. Contact order is that order minus one. Steps whose
/// distance falls under the roundoff floor are discarded.
ContactEstimate bouquet_contact_oracle(const std::function<Vec3(double)>& x, double t,
                                       double step, const ContactTarget& target);
/// Step = a quarter of the local length scale 1/max(k, |tau|, |k'|^(1/2), |k''|^(1/3)),
/// converted to the curve parameter.
ContactEstimate bouquet_contact_oracle(const PeriodicCurve& x, double t, const ContactTarget& target);

/// Light-cone lift (inverse stereographic image on the section x5 = 1) of a
/// space curve, sampled on grid_size points (0 = sample count of the curve).
PeriodicCurve lift_to_lightcone(const PeriodicCurve& curve, int grid_size = 0);

/// Exact derivatives 0..5 of the lift at t, pushed through the rational map.
std::array<LorentzVector, 6> lift_derivatives(const PeriodicCurve& curve, double t);
/// Same from space-curve derivatives derivs[0..5].
std::array<LorentzVector, 6> lift_derivatives(std::span<const Vec3> derivs);

/// Same curve traversed at unit speed, sampled at `samples` points (0 = twice
/// the input count). Throws GeometryError(irregular_curve).
PeriodicCurve arclength_reparametrize(const PeriodicCurve& curve, int samples = 0);
/// Same with a caller-supplied norm of the derivative (e.g. the Lorentz norm of
/// a space-like path in de Sitter space).
PeriodicCurve arclength_reparametrize(const PeriodicCurve& curve,
                                      const std::function<double(const Eigen::VectorXd&)>& norm,
                                      int samples = 0);

}  // namespace desitter
