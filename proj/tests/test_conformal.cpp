#include "desitter/conformal.hpp"
#include "desitter/error.hpp"
#include "desitter/generators.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace desitter;

namespace {
constexpr double kPi = std::numbers::pi;

Eigen::Vector3d helix_derivative(double a, double b, double t, int order) {
  // order >= 1
  const double c = std::cos(t + order * kPi / 2), s = std::sin(t + order * kPi / 2);
  return {a * c, a * s, order == 1 ? b : 0.0};
}

PeriodicCurve mirrored(const PeriodicCurve& x) {
  return PeriodicCurve::from_function(
      [&x](double t) {
        Eigen::VectorXd v = x.evaluate(t, 0);
        v(2) = -v(2);
        return v;
      },
      x.sample_count(), x.period());
}

double sign_free_distance(const LorentzVector& a, const LorentzVector& b) {
  return std::min((a - b).lpNorm<Eigen::Infinity>(), (a + b).lpNorm<Eigen::Infinity>());
}

struct Fixture {
  PeriodicCurve trefoil = trefoil_curve(64);
  OsculatingCanal oc = osculating_canal(trefoil, 512);
};

const Fixture& fixture() {
  static const Fixture f;
  return f;
}
}  // namespace

TEST(OsculatingCanal, AgreesWithEuclideanSphere) {
  const auto& f = fixture();
  ASSERT_TRUE(f.oc.orientation_coherent);
  for (int j = 0; j < f.oc.size(); j += 7) {
    const LorentzVector euclid = sphere_from_euclidean(osculating_sphere(f.trefoil, f.oc.t[j])).sigma();
    EXPECT_LE(sign_free_distance(euclid, f.oc.jets[j].sigma), 1e-7) << f.oc.t[j];
  }
}

TEST(OsculatingCanal, OrientationIsContinuousAndCloses) {
  const auto& f = fixture();
  for (int j = 1; j < f.oc.size(); ++j) {
    EXPECT_GT(inner(f.oc.jets[j].sigma, f.oc.jets[j - 1].sigma), 0.0);
  }
  EXPECT_GT(f.oc.closure_pairing, 0.0);
  ASSERT_TRUE(f.oc.path.has_value());
  EXPECT_TRUE(f.oc.path->spacelike());
}

TEST(OsculatingCanal, ContactAtLeastThree) {
  const auto& f = fixture();
  for (int j = 0; j < f.oc.size(); j += 16) {
    const SphereJet& jet = f.oc.jets[j];
    EXPECT_GE(contact_order(jet.gamma, SpherePoint(jet.sigma), 5, 1e-8), 3);
  }
}

TEST(OsculatingCanal, SphericalCurveHasConstantSphere) {
  // A closed curve on a sphere has vertices, so the check is pointwise away
  // from them.
  const Vec3 center(0.3, -0.2, 0.1);
  const PeriodicCurve x = spherical_knot_curve(center, 1.5, 512);
  EXPECT_THROW(osculating_canal(x), GeometryError);
  const LorentzVector expected = sphere_from_euclidean({center, 1.5, 1}).sigma();
  const FrenetData f = frenet_apparatus(x, 512);
  int tested = 0;
  for (int j = 0; j < f.size(); ++j) {
    if (f.g(j) < 1e-3 * std::pow(f.k(j), 4)) continue;
    const SphereJet jet = osculating_sphere_jet(x, f.t(j));
    EXPECT_LE(sign_free_distance(jet.sigma, expected), 1e-8);
    EXPECT_LE(std::abs(jet.mu()), 1e-5);
    ++tested;
  }
  EXPECT_GT(tested, f.size() / 2);
}

TEST(OsculatingCanal, RejectsVertices) {
  EXPECT_THROW(osculating_canal(circle_curve(1.0, 64)), GeometryError);
  EXPECT_THROW(osculating_canal(ellipse_curve(2.0, 1.0, 64)), GeometryError);
}

TEST(OsculatingCanal, PerturbedKnotSeedNineIsCoherent) {
  // The osculating sphere turns fast between grid points on this curve.
  const OsculatingCanal oc = osculating_canal(perturbed_knot_curve(9, 64), 256);
  EXPECT_TRUE(oc.orientation_coherent);
}

TEST(DrillCheck, TrefoilPasses) {
  const DrillReport report = drill_check(fixture().oc);
  EXPECT_GT(report.tested, 0);
  EXPECT_LT(report.max_lightlike_ratio, 1e-6);
  EXPECT_LT(report.max_angle, 1e-6);
  EXPECT_GT(report.min_kg_sup, 0.0);
  EXPECT_TRUE(report.pass());
}

TEST(DrillCheck, CorruptedSpheresFail) {
  OsculatingCanal oc = fixture().oc;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 1e-3);
  for (SphereJet& jet : oc.jets) {
    for (LorentzVector* v : {&jet.sigma, &jet.dsigma, &jet.ddsigma}) {
      for (int i = 0; i < 5; ++i) (*v)(i) += noise(rng);
    }
  }
  EXPECT_FALSE(drill_check(oc).pass());
}

TEST(SphericalPoints, TrefoilHasNone) { EXPECT_TRUE(fixture().oc.spherical_points.empty()); }

TEST(SphericalPoints, PerturbedKnotMatchesContactOracles) {
  const PeriodicCurve x = perturbed_knot_curve(20, 64);
  const OsculatingCanal oc = osculating_canal(x, 256);
  ASSERT_EQ(oc.spherical_points.size(), 2u);
  for (const SphericalPointCheck& c : cross_check_spherical_points(x, oc.spherical_points)) {
    EXPECT_GE(c.contact_order, 4);
    const EuclideanSphere s = euclidean_from_sphere(SpherePoint::normalized(osculating_sphere_jet(x, c.t).sigma));
    EXPECT_GE(bouquet_contact_oracle(x, c.t, s).order, 4);
    const FrenetPoint p = frenet_at(x, c.t);
    EXPECT_NEAR(conformal_torsion(p.k, p.dk, p.ddk, p.tau, p.dtau), 0.0, 1e-6);
  }
}

TEST(SphericalPoints, TorsionZerosMatch) {
  const PeriodicCurve x = perturbed_knot_curve(20, 64);
  const OsculatingCanal oc = osculating_canal(x, 256);
  const ConformalInvariants inv = conformal_invariants(x, 1024);
  std::vector<double> zeros;
  for (int j = 0; j < inv.T.size(); ++j) {
    const double a = inv.T(j), b = inv.T((j + 1) % inv.T.size());
    if (a == 0.0 || a * b < 0.0) zeros.push_back(inv.frenet.t(j));
  }
  ASSERT_EQ(zeros.size(), oc.spherical_points.size());
  const double h = x.period() / 1024;
  for (double z : zeros) {
    double best = x.period();
    for (double s : oc.spherical_points) {
      const double d = std::abs(std::remainder(z - s, x.period()));
      best = std::min(best, d);
    }
    EXPECT_LE(best, h);
  }
}

TEST(ConformalTorsion, HelixPointwise) {
  // k = tau = 1/2 for a = b = 1: T = 1 and dt/du = 1/2.
  const double a = 1.0, b = 1.0;
  for (double t : {0.5, 1.7, 3.0}) {
    std::array<Vec3, 6> d;
    d[0] = Vec3(a * std::cos(t), a * std::sin(t), b * t);
    for (int order = 1; order < 6; ++order) d[order] = helix_derivative(a, b, t, order);
    const FrenetPoint p = frenet_from_derivatives(d);
    EXPECT_NEAR(p.k, 0.5, 1e-12);
    EXPECT_NEAR(p.tau, 0.5, 1e-12);
    EXPECT_NEAR(std::pow(p.g(), 0.25), 0.5, 1e-12);
    EXPECT_NEAR(conformal_torsion(p.k, p.dk, p.ddk, p.tau, p.dtau), 1.0, 1e-12);
  }
  // sqrt(tau / k) in general.
  EXPECT_NEAR(conformal_torsion(2.0, 0.0, 0.0, 0.5, 0.0), 0.5, 1e-14);
}

TEST(ConformalTorsion, PlanarCurveIsZero) {
  const FrenetData f = frenet_apparatus(ellipse_curve(2.0, 1.0, 64), 256);
  for (int j = 0; j < f.size(); ++j) {
    if (std::abs(f.dk(j)) < 1e-3) continue;
    EXPECT_EQ(f.tau(j), 0.0);
    EXPECT_EQ(conformal_torsion(f.k(j), f.dk(j), f.ddk(j), f.tau(j), f.dtau(j)), 0.0);
  }
}

TEST(ConformalInvariants, OmegaIsAbsTTimesDensity) {
  const ConformalInvariants inv = conformal_invariants(fixture().trefoil, 512);
  for (int j = 0; j < inv.T.size(); ++j) {
    EXPECT_NEAR(inv.omega(j), std::abs(inv.T(j)) * inv.dt_du(j), 1e-8);
  }
}

TEST(ConformalInvariants, ThreeOmegaRoutesAgree) {
  const auto& f = fixture();
  const ConformalInvariants inv = conformal_invariants(f.trefoil, 512);
  const Eigen::VectorXd canal = omega_via_canal(f.oc);
  const Eigen::VectorXd spheres = omega_via_spheres(f.trefoil, 512);
  int compared = 0;
  for (int j = 0; j < inv.T.size(); ++j) {
    EXPECT_NEAR(inv.omega(j), canal(j), 1e-6);
    if (std::isnan(spheres(j))) continue;
    EXPECT_NEAR(inv.omega(j), spheres(j), 1e-6);
    ++compared;
  }
  EXPECT_GT(compared, inv.T.size() / 2);
}

TEST(ConformalInvariants, MirrorNegatesIntegral) {
  const PeriodicCurve x = perturbed_knot_curve(3, 64);
  const ConformalInvariants a = conformal_invariants(x, 1024);
  const ConformalInvariants b = conformal_invariants(mirrored(x), 1024);
  EXPECT_NEAR(a.integral_T, -b.integral_T, 1e-9);
  EXPECT_NEAR(a.total_torsion, -b.total_torsion, 1e-9);
}

TEST(ConformalInvariants, MobiusInvariancePointwise) {
  const PeriodicCurve x = perturbed_knot_curve(7, 64);
  const LorentzTransform map = random_lorentz_transform(71, 0.3);
  for (int j = 0; j < 200; ++j) {
    const double t = x.period() * (j + 0.25) / 200;
    const FrenetPoint p = frenet_at(x, t);
    const FrenetPoint q = frenet_from_derivatives(mobius_image_derivatives(x, map, t));
    EXPECT_NEAR(conformal_torsion(p.k, p.dk, p.ddk, p.tau, p.dtau),
                conformal_torsion(q.k, q.dk, q.ddk, q.tau, q.dtau), 1e-5);
    EXPECT_NEAR(std::pow(p.g(), 0.25) * p.speed, std::pow(q.g(), 0.25) * q.speed, 1e-5);
  }
  const PeriodicCurve y = mobius_image(x, map);
  const ConformalInvariants a = conformal_invariants(x, 1024);
  const ConformalInvariants b = conformal_invariants(y, std::max(1024, y.sample_count()));
  EXPECT_NEAR(a.integral_T, b.integral_T, 1e-6);
  EXPECT_LE(congruence_residual(a.total_torsion - b.total_torsion), 1e-4);
}

TEST(MobiusImage, JetsMatchResampledCurve) {
  const PeriodicCurve x = trefoil_curve(64);
  const LorentzTransform map = random_lorentz_transform(5, 0.3);
  const PeriodicCurve y = mobius_image(x, map);
  for (double t : {0.3, 2.2, 4.9}) {
    const auto d = mobius_image_derivatives(x, map, t);
    EXPECT_LE((d[0] - Vec3(y.evaluate(t, 0))).norm(), 1e-10);
    EXPECT_LE((d[1] - Vec3(y.evaluate(t, 1))).norm(), 1e-7 * std::max(1.0, d[1].norm()));
  }
}

TEST(ConformalInvariants, NearInflectionImageStaysCongruent) {
  // The image comes close to an inflection (k ~ 1e-3), so tau du is peaked.
  const PeriodicCurve y = mobius_image(perturbed_knot_curve(5, 64), random_lorentz_transform(52, 0.3));
  const ConformalInvariants inv = conformal_invariants(y, std::max(1024, y.sample_count()));
  EXPECT_LT(inv.frenet.k.minCoeff(), 1e-2);
  EXPECT_LE(congruence_residual(inv.integral_T - inv.total_torsion), 1e-4);
}

TEST(Corollary, TrefoilPasses) {
  const CorollaryReport r = corollary_check(fixture().trefoil, 1e-6, 1e-8, 1e-4, 512);
  EXPECT_EQ(r.verdict, BoundVerdict::pass);
  EXPECT_GE(r.integral_abs_T, 2 * kPi);
  EXPECT_NEAR(r.sign_residual, 0.0, 1e-8);
  EXPECT_LE(r.congruence_residual, 1e-4);
}

TEST(Corollary, SphericalPointsAreNotApplicable) {
  const CorollaryReport r = corollary_check(perturbed_knot_curve(20, 64), 1e-6, 1e-8, 1e-4, 1024);
  EXPECT_EQ(r.verdict, BoundVerdict::not_applicable);
  EXPECT_EQ(r.spherical_points.size(), 2u);
  EXPECT_TRUE(r.congruent);
}

TEST(Corollary, MutatedTorsionBreaksCongruence) {
  InvariantOptions mutated;
  mutated.mutate_sign = true;
  const CorollaryReport r = corollary_check(fixture().trefoil, 1e-6, 1e-8, 1e-4, 512, mutated);
  EXPECT_FALSE(r.congruent);
  EXPECT_EQ(r.verdict, BoundVerdict::fail);
}

TEST(CyclideCurve, LiesOnTorusAtConstantAngle) {
  const double R = 2.0, r = 1.0;
  const PeriodicCurve x = constant_angle_cyclide_curve(R, r, 1, 2, 256);
  double first_angle = 0.0;
  for (int j = 0; j < 64; ++j) {
    const double t = x.period() * j / 64;
    const Vec3 p = x.evaluate(t, 0);
    const double rho = std::hypot(p(0), p(1));
    EXPECT_NEAR(std::hypot(rho - R, p(2)), r, 1e-9);
    // Angle with the meridian circle (the characteristic circle of the torus).
    const Vec3 d = x.evaluate(t, 1).normalized();
    const Vec3 phi_dir(-p(1) / rho, p(0) / rho, 0.0);
    const double angle = std::acos(std::abs(d.dot(phi_dir)));
    if (j == 0) first_angle = angle;
    EXPECT_NEAR(angle, first_angle, 1e-8);
  }
}

TEST(CyclideCurve, UsableParameterSetPassesCorollary) {
  const CyclideCurveReport report = cyclide_curve_report(2.0, 1.0, 1, 2, 256);
  ASSERT_TRUE(report.usable());
  const CorollaryReport r = corollary_check(constant_angle_cyclide_curve(2.0, 1.0, 1, 2, 256), 1e-6, 1e-8, 1e-4, 1024);
  EXPECT_EQ(r.verdict, BoundVerdict::pass);
  EXPECT_GE(r.integral_abs_T, 2 * kPi - 1e-6);
  EXPECT_LE(r.sign_residual, 1e-8);
}

TEST(CyclideCurve, RejectsBadParameters) {
  EXPECT_THROW(constant_angle_cyclide_curve(2.0, 1.0, 1, 0), GeometryError);
  EXPECT_THROW(constant_angle_cyclide_curve(1.0, 2.0, 1, 2), GeometryError);
  EXPECT_THROW(constant_angle_cyclide_curve(2.0, 1.0, 2, 4), GeometryError);
  EXPECT_THROW(constant_angle_cyclide_curve(2.0, 0.0, 1, 2), GeometryError);
}

TEST(CyclideCurve, ReportFlagsIrregularCases) {
  EXPECT_FALSE(cyclide_curve_report(3.0, 1.0, 1, 1, 256).usable());
}

TEST(CurvatureTube, SingularLocusIsTheCurve) {
  const auto& f = fixture();
  const CurvatureTube tube = curvature_tube_mesh(f.oc, 128, 32);
  ASSERT_EQ(static_cast<int>(tube.singular_vertices.size()), 128);
  for (int v : tube.singular_vertices) {
    const int row = tube.mesh.vertex_grid[v][0];
    const Vec3 expected = f.trefoil.evaluate(f.oc.path->period() * row / 128, 0);
    EXPECT_LE((tube.mesh.vertices[v] - expected).norm(), 1e-8);
  }
}
