#include "desitter/canal.hpp"
#include "desitter/error.hpp"
#include "desitter/mesh.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace desitter;

namespace {
constexpr double kPi = std::numbers::pi;

LorentzVector e(int i) { return basis_vector(i - 1); }

LorentzVector vec(double a, double b, double c, double d, double f) {
  LorentzVector v;
  v << a, b, c, d, f;
  return v;
}

CanalPath pencil_geodesic() {
  return CanalPath::from_function([](double s) -> LorentzVector { return std::cos(s) * e(1) + std::sin(s) * e(2); },
                                  32, 2 * kPi);
}

PeriodicCurve lambda_curve(double a, double b) {
  return PeriodicCurve::from_function(
      [=](double s) {
        Eigen::VectorXd v(1);
        v << a + b * std::sin(s);
        return v;
      },
      32, 2 * kPi);
}

const LorentzVector kU = vec(0, 0, 0, 1, 1);

// Distance from p to the revolution torus with core radius a and tube radius b.
double torus_distance(const Vec3& p, double a, double b) {
  const double rho = std::hypot(p(0), p(1)) - a;
  return std::abs(std::hypot(rho, p(2)) - b);
}

// Independent length oracle: trapezoid rule (spectrally accurate for a smooth
// periodic integrand) on a fine grid.
double trapezoid_length(const CanalPath& path, int n) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const LorentzVector d = path.derivative(path.period() * i / n, 1);
    sum += std::sqrt(inner(d, d));
  }
  return sum * path.period() / n;
}
}  // namespace

TEST(CanalPath, RejectsOffShellSamples) {
  EXPECT_THROW(CanalPath::from_function([](double s) -> LorentzVector { return 1.1 * (std::cos(s) * e(1) + std::sin(s) * e(2)); },
                                        32, 2 * kPi),
               GeometryError);
}

TEST(Length, PencilGeodesic) {
  const CanalPath path = pencil_geodesic();
  EXPECT_NEAR(length(path), 2 * kPi, 1e-9);
  for (double s : {0.0, 0.7, 2.0, 5.5}) {
    EXPECT_LE(sup_norm(geodesic_curvature_vector(path, s)), 1e-8);
  }
  EXPECT_EQ(classify(path).verdict, CanalVerdict::geodesic);
}

TEST(Length, MinimalDrill) {
  const CanalPath path = minimal_drill(lambda_curve(2, 1), kU, e(1), e(2));
  EXPECT_NEAR(length(path), 2 * kPi, 1e-9);
}

TEST(Length, RegularCyclideCircle) {
  const CanalPath path = dupin_cyclide_canal(e(5), e(1), e(2));
  EXPECT_NEAR(length(path), 2 * kPi * std::sqrt(2.0), 1e-9);
  EXPECT_NEAR(length(path), 8.885766, 1e-6);
}

TEST(Length, AgreesWithTrapezoidOracle) {
  for (std::uint64_t seed : {3u, 11u, 29u}) {
    const CanalPath path = random_closed_path(seed);
    if (!path.spacelike()) continue;
    EXPECT_NEAR(length(path), trapezoid_length(path, 2048), 1e-9 * length(path)) << seed;
  }
}

TEST(Length, LorentzInvariant) {
  const CanalPath path = random_closed_path(5);
  ASSERT_TRUE(path.spacelike());
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const CanalPath moved = path.transformed(random_lorentz_transform(seed));
    EXPECT_NEAR(length(moved), length(path), 1e-9 * length(path));
  }
}

TEST(Length, NonSpacelikeThrows) {
  const CanalPath nested = nested_sphere_path();
  try {
    length(nested);
    FAIL();
  } catch (const GeometryError& err) {
    EXPECT_EQ(err.kind(), ErrorKind::non_spacelike);
  }
}

TEST(GeodesicCurvature, MinimalDrillFamily) {
  const struct {
    double a, b, coefficient;
  } cases[] = {{1, 0, 1}, {2, 1, 2}, {1, 0.999, 1}};
  for (const auto& c : cases) {
    const CanalPath path = minimal_drill(lambda_curve(c.a, c.b), kU, e(1), e(2));
    for (int i = 0; i < 16; ++i) {
      const double s = 2 * kPi * i / 16;
      EXPECT_LE(sup_norm(geodesic_curvature_vector(path, s) - c.coefficient * kU), 1e-7) << c.b << ' ' << s;
    }
    EXPECT_EQ(classify(path).verdict, CanalVerdict::drill);
  }
}

TEST(GeodesicCurvature, SingularCyclideClosedForm) {
  const LorentzVector x = 0.8 * e(1);
  const CanalPath path = dupin_cyclide_canal(x, e(2), e(3));
  // Unit-speed circle of radius R about x: sigma-double-dot = -(sigma - x)/R^2.
  const double r2 = 0.36;
  for (double s : {0.0, 0.4, 1.9}) {
    const double t = path.parameter_at_arclength(s);
    const LorentzVector sigma = path.position(t);
    const LorentzVector expected = sigma - (sigma - x) / r2;
    const LorentzVector kg = geodesic_curvature_vector(path, s);
    EXPECT_LE(sup_norm(kg - expected), 1e-9);
    EXPECT_NEAR(inner(kg, kg), 0.64 + std::pow(16.0 / 15.0, 2), 1e-9);
    EXPECT_EQ(causal_type(kg), CausalType::spacelike);
  }
}

TEST(GeodesicCurvature, RegularCyclideTimelike) {
  const CanalPath path = dupin_cyclide_canal(e(5), e(1), e(2));
  for (double s : {0.0, 1.0, 4.0}) {
    const LorentzVector sigma = path.position(path.parameter_at_arclength(s));
    const LorentzVector kg = geodesic_curvature_vector(path, s);
    EXPECT_LE(sup_norm(kg - 0.5 * (sigma + e(5))), 1e-9);
    EXPECT_NEAR(inner(kg, kg), -0.5, 1e-9);
  }
  EXPECT_EQ(classify(path).verdict, CanalVerdict::regular);
}

TEST(GeodesicCurvature, TangentialIdentities) {
  for (std::uint64_t seed : {2u, 7u}) {
    const CanalPath path = random_closed_path(seed);
    ASSERT_TRUE(path.spacelike());
    const PeriodicCurve unit = arclength_path(path);
    for (int i = 0; i < 25; ++i) {
      const double s = unit.period() * i / 25;
      const LorentzVector sigma = unit.evaluate(s, 0);
      const LorentzVector dot = unit.evaluate(s, 1);
      const LorentzVector ddot = unit.evaluate(s, 2);
      EXPECT_NEAR(inner(sigma, dot), 0.0, 1e-7);
      EXPECT_NEAR(inner(dot, dot), 1.0, 1e-7);
      EXPECT_NEAR(inner(sigma, ddot), -1.0, 1e-7);
      const LorentzVector kg = geodesic_curvature_vector(path, s);
      EXPECT_NEAR(inner(kg, sigma), 0.0, 1e-7);
      EXPECT_NEAR(inner(kg, dot), 0.0, 1e-7);
      // Chain-rule route against the unit-speed route.
      EXPECT_LE(sup_norm(kg - (sigma + ddot)), 1e-7);
    }
  }
}

TEST(Classify, NestedFamilyIsNotCanal) {
  const CanalClassification c = classify(nested_sphere_path());
  EXPECT_EQ(c.verdict, CanalVerdict::not_canal);
  EXPECT_FALSE(c.almost_regular());
}

TEST(Classify, VerdictMatchesCounts) {
  bool saw_mixed = false;
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const CanalPath path = random_closed_path(seed);
    const CanalClassification c = classify(path);
    const int n = c.kg_type.total();
    switch (c.verdict) {
      case CanalVerdict::regular: EXPECT_EQ(c.kg_type.timelike, n); break;
      case CanalVerdict::drill: EXPECT_EQ(c.kg_type.lightlike, n); break;
      case CanalVerdict::almost_regular:
        EXPECT_EQ(c.kg_type.timelike + c.kg_type.lightlike, n);
        EXPECT_LE(c.max_kg_norm2, 1e-8 * c.max_kg_sup * c.max_kg_sup);
        break;
      case CanalVerdict::mixed:
        saw_mixed = true;
        EXPECT_GT(c.kg_type.spacelike, 0);
        EXPECT_LT(c.kg_type.spacelike, n);
        break;
      case CanalVerdict::not_canal: EXPECT_LT(c.tangent_type.spacelike, c.tangent_type.total()); break;
      default: break;
    }
  }
  EXPECT_TRUE(saw_mixed);
}

TEST(CharacteristicCircle, PencilIsConstant) {
  const CanalPath path = pencil_geodesic();
  const CircleRep c0 = characteristic_circle(path, 0.0);
  const CircleFrame f = circle_frame(c0);
  for (double t : {0.5, 1.7, 4.0}) {
    for (int j = 0; j < 8; ++j) {
      const LorentzVector g = f.point(2 * kPi * j / 8);
      EXPECT_NEAR(inner(g, path.position(t)), 0.0, 1e-12);
      EXPECT_NEAR(inner(g, path.derivative(t, 1)), 0.0, 1e-12);
    }
  }
}

TEST(CharacteristicCircle, TorusCyclideSweepsTorus) {
  const CanalPath path = dupin_cyclide_canal(e(5), e(1), e(2));
  for (double t : {0.0, 0.9, 3.3}) {
    for (const S3Point& p : circle_points(characteristic_circle(path, t), 24)) {
      const auto x = stereographic_to_r3(p);
      ASSERT_TRUE(x.has_value());
      EXPECT_LT(torus_distance(*x, std::sqrt(2.0), 1.0), 1e-8);
    }
  }
}

TEST(CharacteristicCircle, EnvelopeTangency) {
  const CanalPath path = random_closed_path(4);
  ASSERT_TRUE(path.spacelike());
  const double h = 1e-4;
  for (double t : {0.3, 2.2, 5.0}) {
    const CircleFrame f = circle_frame(characteristic_circle(path, t));
    for (int j = 0; j < 6; ++j) {
      const LorentzVector g = f.point(2 * kPi * j / 6);
      const double fd = (inner(g, path.position(t + h)) - inner(g, path.position(t - h))) / (2 * h);
      EXPECT_NEAR(fd, 0.0, 1e-6);
    }
  }
}

TEST(CharacteristicCircle, NonSpacelikeThrows) {
  EXPECT_THROW(characteristic_circle(nested_sphere_path(), 0.5), GeometryError);
}

TEST(Involute, GeodesicIsConstant) {
  const Involute phi = involute(pencil_geodesic(), 0.4);
  for (double s : {0.0, 1.0, 3.0}) EXPECT_LE(sup_norm(phi.derivative(s)), 1e-8);
  EXPECT_LE(sup_norm(phi.value(0.0) - phi.value(2.5)), 1e-8);
}

TEST(Involute, DrillDerivative) {
  const Involute phi = involute(minimal_drill(lambda_curve(2, 1), kU, e(1), e(2)), 0.0);
  EXPECT_LE(sup_norm(phi.derivative(kPi / 2) - vec(0, 0, 0, -2, -2)), 1e-7);
}

TEST(Involute, DerivativeMatchesFiniteDifferences) {
  const auto paths = random_almost_regular_paths(100, 2);
  ASSERT_EQ(paths.size(), 2u);
  for (const auto& sample : paths) {
    const Involute phi = involute(sample.path, 0.8);
    const double h = 1e-3;
    for (int i = 1; i < 10; ++i) {
      const double s = phi.length() * i / 10;
      // Five-point stencil, error O(h^4).
      const LorentzVector fd = (phi.value(s - 2 * h) - 8 * phi.value(s - h) + 8 * phi.value(s + h) -
                                phi.value(s + 2 * h)) /
                               (12 * h);
      EXPECT_LE(sup_norm(fd - phi.derivative(s)), 1e-7);
      const LorentzVector kg = geodesic_curvature_vector(sample.path, s);
      EXPECT_LE(sup_norm(phi.derivative(s) + std::sin(s + 0.8) * kg), 1e-7);
    }
    const CausalCounts profile = phi.derivative_profile(200);
    EXPECT_EQ(profile.spacelike, 0) << sample.seed;
  }
}

TEST(Cyclide, Regimes) {
  struct Case {
    LorentzVector x, h1, h2;
    double length;
    CanalVerdict verdict;
  };
  const Case cases[] = {
      {e(5), e(1), e(2), 2 * kPi * std::sqrt(2.0), CanalVerdict::regular},
      {0.8 * e(1), e(2), e(3), 1.2 * kPi, CanalVerdict::spacelike_curvature},
      {0.7 * kU, e(1), e(2), 2 * kPi, CanalVerdict::drill},
  };
  for (const Case& c : cases) {
    const CanalPath path = dupin_cyclide_canal(c.x, c.h1, c.h2);
    EXPECT_NEAR(length(path), 2 * kPi * std::sqrt(1 - inner(c.x, c.x)), 1e-8);
    EXPECT_NEAR(length(path), c.length, 1e-8);
    EXPECT_EQ(classify(path).verdict, c.verdict);
  }
}

TEST(Cyclide, Preconditions) {
  try {
    dupin_cyclide_canal(e(1), e(2), e(3));
    FAIL();
  } catch (const GeometryError& err) {
    EXPECT_EQ(err.kind(), ErrorKind::empty_intersection);
  }
  EXPECT_THROW(dupin_cyclide_canal(e(5), e(1), e(5) + 0.1 * e(2)), GeometryError);
  EXPECT_THROW(dupin_cyclide_canal(e(5) + 0.3 * e(1), e(1), e(2)), GeometryError);
}

TEST(MinimalDrill, Preconditions) {
  EXPECT_THROW(minimal_drill(lambda_curve(2, 1), e(4), e(1), e(2)), GeometryError);
  EXPECT_THROW(minimal_drill(lambda_curve(2, 1), kU, e(1), e(1)), GeometryError);
  EXPECT_THROW(minimal_drill(lambda_curve(0.5, 1), kU, e(1), e(2)), GeometryError);
}

TEST(Bound, Examples) {
  const BoundReport drill = verify_2pi_bound(minimal_drill(lambda_curve(2, 1), kU, e(1), e(2)));
  EXPECT_EQ(drill.verdict, BoundVerdict::pass);
  EXPECT_NEAR(drill.length, 2 * kPi, 1e-9);
  EXPECT_TRUE(drill.equality_family_detected);

  const BoundReport torus = verify_2pi_bound(dupin_cyclide_canal(e(5), e(1), e(2)));
  EXPECT_EQ(torus.verdict, BoundVerdict::pass);
  EXPECT_NEAR(torus.margin, 2 * kPi * (std::sqrt(2.0) - 1), 1e-8);
  EXPECT_FALSE(torus.equality_family_detected);

  const BoundReport singular = verify_2pi_bound(dupin_cyclide_canal(0.8 * e(1), e(2), e(3)));
  EXPECT_EQ(singular.verdict, BoundVerdict::not_applicable);
  EXPECT_NEAR(singular.length, 1.2 * kPi, 1e-8);

  const BoundReport nested = verify_2pi_bound(nested_sphere_path());
  EXPECT_EQ(nested.verdict, BoundVerdict::not_applicable);
  EXPECT_TRUE(std::isnan(nested.length));
}

TEST(Bound, LightlikeCyclideIsEquality) {
  const BoundReport r = verify_2pi_bound(dupin_cyclide_canal(0.3 * kU, e(1), e(2)));
  EXPECT_TRUE(r.equality_family_detected);
  EXPECT_LE(r.direction_deviation, 1e-9);
}

TEST(RandomPaths, DeterministicAndAboveBound) {
  const auto first = random_almost_regular_paths(1, 40);
  const auto again = random_almost_regular_paths(1, 40);
  ASSERT_EQ(first.size(), 40u);
  for (std::size_t i = 0; i < first.size(); ++i) {
    EXPECT_EQ(first[i].seed, again[i].seed);
    EXPECT_EQ(first[i].path.sigma().samples(), again[i].path.sigma().samples());
    EXPECT_GE(length(first[i].path), 2 * kPi - 1e-6) << first[i].seed;
  }
}

TEST(Mesh, TorusCyclide) {
  const CanalPath path = dupin_cyclide_canal(e(5), e(1), e(2));
  const TriMesh mesh = envelope_mesh(path, 64, 32);
  EXPECT_FALSE(mesh.degenerate);
  EXPECT_EQ(mesh.culled_vertices, 0);
  double worst = 0.0;
  for (const Vec3& v : mesh.vertices) worst = std::max(worst, torus_distance(v, std::sqrt(2.0), 1.0));
  EXPECT_LT(worst, 1e-6);
  const MeshAudit audit = audit_mesh(mesh);
  EXPECT_TRUE(audit.watertight);
  EXPECT_EQ(audit.euler_characteristic, 0);
  EXPECT_GT(audit.min_quality, 0.05);
  // Outward orientation: normals point away from the core circle.
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Vec3& b = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Vec3& c = mesh.vertices[static_cast<std::size_t>(tri[2])];
    const Vec3 centroid = (a + b + c) / 3.0;
    Vec3 core(centroid(0), centroid(1), 0.0);
    core *= std::sqrt(2.0) / core.norm();
    EXPECT_GT((b - a).cross(c - a).dot(centroid - core), 0.0);
  }
}

TEST(Mesh, PencilIsDegenerate) {
  const TriMesh mesh = envelope_mesh(pencil_geodesic(), 32, 16);
  EXPECT_TRUE(mesh.degenerate);
  EXPECT_TRUE(mesh.triangles.empty());
  EXPECT_FALSE(mesh.fallback_polyline.empty());
  std::ostringstream obj;
  write_obj(mesh, obj);
  EXPECT_NE(obj.str().find("\nl "), std::string::npos);
  EXPECT_EQ(obj.str().find("\nf "), std::string::npos);
}

TEST(Mesh, ObjRecords) {
  const TriMesh mesh = envelope_mesh(dupin_cyclide_canal(e(5), e(1), e(2)), 8, 6);
  std::ostringstream obj;
  write_obj(mesh, obj);
  std::istringstream in(obj.str());
  std::string line;
  int v = 0, f = 0;
  while (std::getline(in, line)) {
    if (line.rfind("v ", 0) == 0) ++v;
    if (line.rfind("f ", 0) == 0) {
      ++f;
      std::istringstream rec(line.substr(2));
      int a, b, c;
      rec >> a >> b >> c;
      EXPECT_GE(std::min({a, b, c}), 1);
      EXPECT_LE(std::max({a, b, c}), static_cast<int>(mesh.vertices.size()));
    }
  }
  EXPECT_EQ(v, static_cast<int>(mesh.vertices.size()));
  EXPECT_EQ(f, static_cast<int>(mesh.triangles.size()));
}

TEST(Mesh, CullsPointsAtInfinity) {
  // Every characteristic circle of this drill passes through span(x), the pole.
  const LorentzVector x = 0.5 * kU;
  const CanalPath path = dupin_cyclide_canal(x, e(1), e(2));
  const TriMesh mesh = envelope_mesh(path, 16, 16, [&](double) { return x; });
  EXPECT_EQ(mesh.culled_vertices, 16);
  EXPECT_EQ(mesh.dropped_triangles % 2, 0);
  EXPECT_GE(mesh.dropped_triangles, 4 * 16);
  for (const Vec3& v : mesh.vertices) EXPECT_TRUE(v.allFinite());
}
