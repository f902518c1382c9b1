#pragma once

#include "desitter/lorentz.hpp"
#include "desitter/periodic_curve.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace desitter {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;

/// Oriented 2-sphere of S^3: a point of de Sitter space <sigma,sigma> = 1.
/// The oriented ball is {span(gamma) : <sigma,gamma> > 0}.
class SpherePoint {
 public:
  /// Throws GeometryError(precondition) if |<v,v> - 1| > tol.
  explicit SpherePoint(const LorentzVector& v, double tol = 1e-9);
  /// Rescales a space-like vector onto de Sitter space.
  static SpherePoint normalized(const LorentzVector& v);

  const LorentzVector& sigma() const { return sigma_; }
  SpherePoint opposite() const { return SpherePoint(-sigma_); }

 private:
  LorentzVector sigma_;
};

/// Point of S^3 on the section x5 = 1 of the light cone.
class S3Point {
 public:
  /// Rescales a future or past null vector to x5 = 1.
  static S3Point from_lightcone(const LorentzVector& gamma, double tol = 1e-9);
  /// (x1..x4) must be a unit vector.
  static S3Point from_unit(const Vec4& x, double tol = 1e-9);

  const LorentzVector& gamma() const { return gamma_; }
  Vec4 point() const { return gamma_.head<4>(); }

 private:
  explicit S3Point(const LorentzVector& g) : gamma_(g) {}
  LorentzVector gamma_;
};

/// Center m on S^3 (unit vector of R^4) and spherical radius r in (0, pi).
struct CenterRadius {
  Vec4 center;
  double radius = 0.0;
};

/// Circle of S^3 as the intersection of two spheres spanning a space-like plane.
struct CircleRep {
  SpherePoint first;
  SpherePoint second;
};

/// Throws GeometryError(non_spacelike) unless span(first, second) is space-like.
CircleRep make_circle(const SpherePoint& first, const SpherePoint& second);

/// Round sphere of R^3. orientation = +1 means the oriented ball is the bounded one.
struct EuclideanSphere {
  Vec3 center = Vec3::Zero();
  double radius = 1.0;
  int orientation = 1;
};

/// (m, cos r) / sin r. Throws GeometryError(invalid_radius) for r outside (0, pi).
SpherePoint sphere_from_center_radius(const CenterRadius& cr);
CenterRadius center_radius_from_sphere(const SpherePoint& sphere);

/// Angle between two spheres, or the value |<s1,s2>| > 1 when they do not meet.
struct SphereRelation {
  bool intersecting = true;
  double angle = 0.0;    // in [0, pi/2], meaningful when intersecting
  double abs_pairing = 0.0;
};

SphereRelation angle_between(const SpherePoint& first, const SpherePoint& second);

/// Largest k <= kmax with |<sigma, gamma^(j)>| <= tol |sigma|_inf |gamma^(j)|_inf for
/// all j <= k; 0 both for a point off the sphere and for a point of plain
/// (order 0) incidence. derivatives[j] holds gamma^(j); kmax <= derivatives.size() - 1.
int contact_order(std::span<const LorentzVector> derivatives, const SpherePoint& sphere, int kmax,
                  double tol = 1e-8);
/// Same, with the derivatives taken from a light-cone curve at parameter t.
int contact_order(const PeriodicCurve& lightcone_curve, const SpherePoint& sphere, double t,
                  int kmax, double tol = 1e-8);

/// Lorentz-orthonormal frame (f1, f2 space-like, f3 future time-like) of the
/// 3-space orthogonal to a circle's spheres; circle points are the null lines
/// cos(theta) f1 + sin(theta) f2 + f3.
struct CircleFrame {
  LorentzVector f1;
  LorentzVector f2;
  LorentzVector f3;

  LorentzVector point(double theta) const;
};

/// Canonical frame: f3 is the normalized projection of e5, f1 the largest
/// projection of e1..e4; f2 completes an oriented frame, so swapping the two
/// spheres reverses the traversal without moving the point set.
CircleFrame circle_frame(const CircleRep& circle);
/// Frame whose theta = 0 point is span(anchor); anchor must be a future null
/// vector on the circle.
CircleFrame circle_frame(const CircleRep& circle, const LorentzVector& anchor);

/// n points at theta_i = 2 pi i / n.
std::vector<S3Point> circle_points(const CircleRep& circle, int n);

/// Projection from the pole (0,0,0,1); std::nullopt stands for the point at infinity.
std::optional<Vec3> stereographic_to_r3(const S3Point& p, double pole_tol = 1e-14);
S3Point stereographic_from_r3(const Vec3& x);
/// Null vector (inverse stereographic image, x5 = 1) of a point of R^3.
LorentzVector lift_point(const Vec3& x);

SpherePoint sphere_from_euclidean(const EuclideanSphere& s);
/// Inverse of sphere_from_euclidean. Throws GeometryError(invalid_radius) when the
/// sphere passes through the pole (its image is a plane).
EuclideanSphere euclidean_from_sphere(const SpherePoint& sphere, double plane_tol = 1e-12);

/// Open path of spheres sampled at increasing parameters.
struct SampledPath {
  std::vector<LorentzVector> positions;
  std::vector<LorentzVector> tangents;
};

/// True iff |<sigma_i, sigma_j>| > 1 for every pair of distinct samples. Throws
/// GeometryError(precondition) if a tangent is space-like or non-zero light-like.
bool nestedness_check(const SampledPath& path, double tol = kDefaultCausalTol);

}  // namespace desitter
