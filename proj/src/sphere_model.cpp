#include "desitter/sphere_model.hpp"

#include "desitter/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace desitter {

SpherePoint::SpherePoint(const LorentzVector& v, double tol) : sigma_(v) {
  const double q = inner(v, v);
  if (!(std::abs(q - 1.0) <= tol)) {
    throw GeometryError(ErrorKind::precondition,
                        "SpherePoint: <s,s> = " + std::to_string(q) + " is not 1");
  }
}

SpherePoint SpherePoint::normalized(const LorentzVector& v) {
  const double q = inner(v, v);
  if (!(q > 0.0)) {
    throw GeometryError(ErrorKind::non_spacelike, "SpherePoint::normalized: vector not space-like");
  }
  return SpherePoint(v / std::sqrt(q), 1e-6);
}

S3Point S3Point::from_lightcone(const LorentzVector& gamma, double tol) {
  if (!(std::abs(gamma(4)) > 0.0)) {
    throw GeometryError(ErrorKind::precondition, "S3Point: vector has x5 = 0");
  }
  const LorentzVector g = gamma / gamma(4);
  if (std::abs(inner(g, g)) > tol) {
    throw GeometryError(ErrorKind::precondition, "S3Point: vector is not null");
  }
  return S3Point(g);
}

S3Point S3Point::from_unit(const Vec4& x, double tol) {
  if (std::abs(x.norm() - 1.0) > tol) {
    throw GeometryError(ErrorKind::precondition, "S3Point: point is not on the unit sphere");
  }
  LorentzVector g;
  g << x, 1.0;
  return S3Point(g);
}

CircleRep make_circle(const SpherePoint& first, const SpherePoint& second) {
  const double c = inner(first.sigma(), second.sigma());
  // Gram matrix [[1, c], [c, 1]] is positive definite iff |c| < 1.
  if (!(std::abs(c) < 1.0 - 1e-12)) {
    throw GeometryError(ErrorKind::non_spacelike,
                        "make_circle: spheres do not span a space-like plane (|<s1,s2>| = " +
                            std::to_string(std::abs(c)) + ")");
  }
  return CircleRep{first, second};
}

SpherePoint sphere_from_center_radius(const CenterRadius& cr) {
  if (!(cr.radius > 0.0 && cr.radius < std::numbers::pi)) {
    throw GeometryError(ErrorKind::invalid_radius, "sphere_from_center_radius: radius outside (0, pi)");
  }
  const double s = std::sin(cr.radius);
  if (!(s > 0.0)) {
    throw GeometryError(ErrorKind::invalid_radius, "sphere_from_center_radius: sin r = 0");
  }
  LorentzVector v;
  v << cr.center / s, std::cos(cr.radius) / s;
  return SpherePoint(v, 1e-8);
}

CenterRadius center_radius_from_sphere(const SpherePoint& sphere) {
  const LorentzVector& s = sphere.sigma();
  // cot r = s5, in (0, pi) by construction of atan2.
  const double r = std::atan2(1.0, s(4));
  return CenterRadius{Vec4(s.head<4>() * std::sin(r)), r};
}

SphereRelation angle_between(const SpherePoint& first, const SpherePoint& second) {
  SphereRelation rel;
  rel.abs_pairing = std::abs(inner(first.sigma(), second.sigma()));
  if (rel.abs_pairing <= 1.0) {
    rel.intersecting = true;
    rel.angle = std::acos(rel.abs_pairing);
  } else {
    rel.intersecting = false;
    rel.angle = 0.0;
  }
  return rel;
}

int contact_order(std::span<const LorentzVector> derivatives, const SpherePoint& sphere, int kmax,
                  double tol) {
  if (kmax < 0 || static_cast<std::size_t>(kmax) >= derivatives.size()) {
    throw GeometryError(ErrorKind::precondition, "contact_order: not enough derivatives for kmax");
  }
  const LorentzVector& s = sphere.sigma();
  const double s_scale = sup_norm(s);
  int order = 0;
  for (int j = 0; j <= kmax; ++j) {
    const LorentzVector& g = derivatives[static_cast<std::size_t>(j)];
    const double scale = s_scale * sup_norm(g);
    if (std::abs(inner(s, g)) > tol * scale) break;
    order = j;
  }
  return order;
}

int contact_order(const PeriodicCurve& lightcone_curve, const SpherePoint& sphere, double t,
                  int kmax, double tol) {
  if (lightcone_curve.dimension() != 5) {
    throw GeometryError(ErrorKind::precondition, "contact_order: curve must live in R^5");
  }
  std::vector<LorentzVector> jets;
  for (int j = 0; j <= kmax; ++j) jets.emplace_back(lightcone_curve.evaluate(t, j));
  return contact_order(jets, sphere, kmax, tol);
}

LorentzVector CircleFrame::point(double theta) const {
  return std::cos(theta) * f1 + std::sin(theta) * f2 + f3;
}

namespace {

struct ComplementData {
  LorentzMatrix projector;
  LorentzVector time;  // future unit time-like vector of the complement
};

ComplementData circle_complement(const CircleRep& circle) {
  const std::vector<LorentzVector> span{circle.first.sigma(), circle.second.sigma()};
  ComplementData data;
  data.projector = complement_projector(span);
  // The projection of e5 onto a (+,+,-) complement of a space-like plane is time-like.
  LorentzVector t = data.projector * basis_vector(4);
  t /= std::sqrt(-inner(t, t));
  if (t(4) < 0.0) t = -t;
  data.time = t;
  return data;
}

LorentzVector complete_frame(const CircleRep& circle, const LorentzVector& f3,
                             const LorentzVector& f1) {
  LorentzVector f2 = wedge4(circle.first.sigma(), circle.second.sigma(), f3, f1);
  return f2 / std::sqrt(inner(f2, f2));
}

}  // namespace

CircleFrame circle_frame(const CircleRep& circle) {
  const ComplementData data = circle_complement(circle);
  LorentzVector best = LorentzVector::Zero();
  double best_norm = -1.0;
  for (int i = 0; i < 4; ++i) {
    LorentzVector v = data.projector * basis_vector(i);
    v += inner(v, data.time) * data.time;  // remove the time component
    const double q = inner(v, v);
    if (q > best_norm + 1e-12) {
      best_norm = q;
      best = v;
    }
  }
  CircleFrame frame;
  frame.f3 = data.time;
  frame.f1 = best / std::sqrt(best_norm);
  frame.f2 = complete_frame(circle, frame.f3, frame.f1);
  return frame;
}

CircleFrame circle_frame(const CircleRep& circle, const LorentzVector& anchor) {
  const ComplementData data = circle_complement(circle);
  const double a = -inner(anchor, data.time);
  if (!(a > 0.0)) {
    throw GeometryError(ErrorKind::precondition, "circle_frame: anchor must be a future null vector");
  }
  CircleFrame frame;
  frame.f3 = data.time;
  LorentzVector f1 = anchor / a - data.time;
  f1 = data.projector * f1;  // drop the roundoff component along the spheres
  frame.f1 = f1 / std::sqrt(inner(f1, f1));
  frame.f2 = complete_frame(circle, frame.f3, frame.f1);
  return frame;
}

std::vector<S3Point> circle_points(const CircleRep& circle, int n) {
  if (n < 1) throw GeometryError(ErrorKind::precondition, "circle_points: n must be positive");
  const CircleFrame frame = circle_frame(circle);
  std::vector<S3Point> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(S3Point::from_lightcone(frame.point(2.0 * std::numbers::pi * i / n), 1e-8));
  }
  return out;
}

std::optional<Vec3> stereographic_to_r3(const S3Point& p, double pole_tol) {
  const Vec4 x = p.point();
  const double denom = 1.0 - x(3);
  if (denom <= pole_tol) return std::nullopt;
  return Vec3(x.head<3>() / denom);
}

S3Point stereographic_from_r3(const Vec3& x) {
  const double n2 = x.squaredNorm();
  Vec4 p;
  p << 2.0 * x / (n2 + 1.0), (n2 - 1.0) / (n2 + 1.0);
  return S3Point::from_unit(p, 1e-12);
}

LorentzVector lift_point(const Vec3& x) {
  const double n2 = x.squaredNorm();
  LorentzVector g;
  g << 2.0 * x / (n2 + 1.0), (n2 - 1.0) / (n2 + 1.0), 1.0;
  return g;
}

SpherePoint sphere_from_euclidean(const EuclideanSphere& s) {
  if (!(s.radius > 0.0)) {
    throw GeometryError(ErrorKind::invalid_radius, "sphere_from_euclidean: radius must be positive");
  }
  const double a = s.center.squaredNorm() - s.radius * s.radius;
  LorentzVector v;
  v << s.center / s.radius, (a - 1.0) / (2.0 * s.radius), (a + 1.0) / (2.0 * s.radius);
  return SpherePoint(static_cast<double>(s.orientation) * v, 1e-8);
}

EuclideanSphere euclidean_from_sphere(const SpherePoint& sphere, double plane_tol) {
  const LorentzVector& s = sphere.sigma();
  // For orientation +1: s5 - s4 = 1 / rho > 0.
  const double d = s(4) - s(3);
  if (std::abs(d) <= plane_tol * sup_norm(s)) {
    throw GeometryError(ErrorKind::invalid_radius,
                        "euclidean_from_sphere: sphere passes through the pole (plane in R^3)");
  }
  EuclideanSphere out;
  out.orientation = d > 0.0 ? 1 : -1;
  out.radius = 1.0 / std::abs(d);
  out.center = s.head<3>() * out.radius * out.orientation;
  return out;
}

bool nestedness_check(const SampledPath& path, double tol) {
  if (path.positions.size() != path.tangents.size()) {
    throw GeometryError(ErrorKind::precondition, "nestedness_check: positions/tangents size mismatch");
  }
  for (const LorentzVector& v : path.tangents) {
    const CausalType type = causal_type(v, tol);
    if (type != CausalType::timelike && type != CausalType::zero) {
      throw GeometryError(ErrorKind::precondition,
                          std::string("nestedness_check: tangent is ") + to_string(type));
    }
  }
  const auto n = path.positions.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const LorentzVector& a = path.positions[i];
      const LorentzVector& b = path.positions[j];
      if (sup_norm(a - b) <= 1e-14 * std::max(1.0, sup_norm(a))) continue;
      if (!(std::abs(inner(a, b)) > 1.0)) return false;
    }
  }
  return true;
}

}  // namespace desitter
