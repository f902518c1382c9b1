#include "desitter/acceptance.hpp"

#include "desitter/canal.hpp"
#include "desitter/conformal.hpp"
#include "desitter/error.hpp"
#include "desitter/generators.hpp"
#include "desitter/mesh.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

namespace desitter {
namespace {
constexpr double kPi = std::numbers::pi;

LorentzVector e(int i) { return basis_vector(i - 1); }

LorentzVector null_u() {
  LorentzVector u;
  u << 0, 0, 0, 1, 1;
  return u;
}

AcceptanceCheck at_most(std::string name, double value, double tol) {
  return {std::move(name), value, tol, false, value <= tol};
}

AcceptanceCheck at_least(std::string name, double value, double bound) {
  return {std::move(name), value, bound, true, value >= bound};
}

AcceptanceCheck holds(std::string name, bool ok) { return {std::move(name), ok ? 1.0 : 0.0, 1.0, true, ok}; }

PeriodicCurve scalar_curve(const std::function<double(double)>& f, int samples) {
  return PeriodicCurve::from_function(
      [&f](double s) {
        Eigen::VectorXd v(1);
        v << f(s);
        return v;
      },
      samples, 2 * kPi);
}

void pencil(CriterionResult& r, const AcceptanceOptions&) {
  const CanalPath path = CanalPath::from_function(
      [](double s) -> LorentzVector { return std::cos(s) * e(1) + std::sin(s) * e(2); }, 32, 2 * kPi);
  r.checks.push_back(at_most("|length - 2pi|", std::abs(length(path) - 2 * kPi), 1e-9));
  double kg = 0.0;
  for (int i = 0; i < 64; ++i) {
    kg = std::max(kg, sup_norm(geodesic_curvature_at_parameter(path, path.period() * i / 64)));
  }
  r.checks.push_back(at_most("max |k_g|", kg, 1e-8));
}

void equality_family(CriterionResult& r, const AcceptanceOptions&) {
  const PeriodicCurve lambda = scalar_curve([](double s) { return 2.0 + std::sin(s); }, 32);
  const CanalPath path = minimal_drill(lambda, null_u(), e(1), e(2));
  r.checks.push_back(at_most("|length - 2pi|", std::abs(length(path) - 2 * kPi), 1e-9));
  r.checks.push_back(holds("classification drill", classify(path).verdict == CanalVerdict::drill));
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double s = 2 * kPi * i / 64;
    // lambda + lambda'' = 2 for lambda = 2 + sin s.
    worst = std::max(worst, sup_norm(geodesic_curvature_at_parameter(path, s) - 2.0 * null_u()));
  }
  r.checks.push_back(at_most("max |k_g - (lambda + lambda'')u|", worst, 1e-7));
  r.checks.push_back(holds("equality family detected", verify_2pi_bound(path).equality_family_detected));
}

void cyclide_regimes(CriterionResult& r, const AcceptanceOptions&) {
  struct Case {
    const char* name;
    LorentzVector x, h1, h2;
    double length;
    CanalVerdict verdict;
    BoundVerdict bound;
  };
  const Case cases[] = {
      {"<x,x> = -1", e(5), e(1), e(2), 2 * kPi * std::sqrt(2.0), CanalVerdict::regular, BoundVerdict::pass},
      {"<x,x> = 0.64", 0.8 * e(1), e(2), e(3), 1.2 * kPi, CanalVerdict::spacelike_curvature,
       BoundVerdict::not_applicable},
      {"<x,x> = 0", 0.7 * null_u(), e(1), e(2), 2 * kPi, CanalVerdict::drill, BoundVerdict::pass},
  };
  for (const Case& c : cases) {
    const CanalPath path = dupin_cyclide_canal(c.x, c.h1, c.h2);
    const BoundReport report = verify_2pi_bound(path);
    r.checks.push_back(at_most(std::string(c.name) + " |length - expected|", std::abs(length(path) - c.length), 1e-8));
    r.checks.push_back(holds(std::string(c.name) + " classification " + to_string(c.verdict),
                             report.classification.verdict == c.verdict && report.verdict == c.bound));
  }
}

void randomized_theorem(CriterionResult& r, const AcceptanceOptions& options) {
  const int count = options.quick ? 100 : 1000;
  const auto paths = random_almost_regular_paths(1, count);
  r.checks.push_back(at_least("almost-regular paths", static_cast<double>(paths.size()), count));
  double margin = std::numeric_limits<double>::infinity();
  for (const auto& sample : paths) margin = std::min(margin, length(sample.path) - 2 * kPi);
  r.checks.push_back(at_least("min (length - 2pi)", margin, -1e-6));
}

void osculating_drill(CriterionResult& r, const AcceptanceOptions&) {
  const PeriodicCurve x = trefoil_curve(64);
  r.checks.push_back(holds("vertex-free", detect_vertices(frenet_apparatus(x, 512)).vertex_free));
  const DrillReport report = drill_check(osculating_canal(x, 512));
  r.checks.push_back(at_least("tested points", report.tested, 1));
  r.checks.push_back(at_most("max |<k_g,k_g>| / |k_g|^2", report.max_lightlike_ratio, 1e-6));
  r.checks.push_back(at_most("max angle(span k_g, span gamma)", report.max_angle, 1e-6));
  r.checks.push_back(holds("k_g nonzero", report.nonzero));
}

void contact_orders(CriterionResult& r, const AcceptanceOptions&) {
  // Perturbed knot with two spherical points; 98 regular points + those two.
  const PeriodicCurve x = perturbed_knot_curve(20, 64);
  const OsculatingCanal oc = osculating_canal(x, 256);
  std::vector<double> params;
  const int regular = 100 - static_cast<int>(oc.spherical_points.size());
  for (int i = 0; i < regular; ++i) params.push_back(x.period() * (i + 0.5) / regular);
  int agree = 0, exact3 = 0, high = 0;
  for (std::size_t i = 0; i < params.size() + oc.spherical_points.size(); ++i) {
    const bool spherical = i >= params.size();
    const double t = spherical ? oc.spherical_points[i - params.size()] : params[i];
    const SphereJet jet = osculating_sphere_jet(x, t);
    const int lift = contact_order(jet.gamma, SpherePoint::normalized(jet.sigma), 5, 1e-8);
    const EuclideanSphere sphere = euclidean_from_sphere(SpherePoint::normalized(jet.sigma));
    const int bouquet = bouquet_contact_oracle(x, t, sphere).order;
    if (lift == bouquet) ++agree;
    if (!spherical && lift == 3 && bouquet == 3) ++exact3;
    if (spherical && lift >= 4 && bouquet >= 4) ++high;
  }
  r.checks.push_back(at_least("spherical points found", static_cast<double>(oc.spherical_points.size()), 1));
  r.checks.push_back(at_least("points with order 3 by both routes", exact3, regular));
  r.checks.push_back(at_least("spherical points with order >= 4 by both routes", high,
                              static_cast<double>(oc.spherical_points.size())));
  r.checks.push_back(at_least("routes agree", agree, 100));
}

void omega_routes(CriterionResult& r, const AcceptanceOptions& options) {
  const PeriodicCurve x = trefoil_curve(64);
  const int grid = 512;
  const ConformalInvariants inv = conformal_invariants(x, grid, {options.mutate});
  const Eigen::VectorXd canal = omega_via_canal(osculating_canal(x, grid));
  const Eigen::VectorXd spheres = omega_via_spheres(x, grid);
  double a_b = 0.0, a_c = 0.0;
  int compared = 0;
  for (int j = 0; j < grid; ++j) {
    a_b = std::max(a_b, std::abs(inv.omega(j) - canal(j)));
    if (std::isnan(spheres(j))) continue;
    a_c = std::max(a_c, std::abs(inv.omega(j) - spheres(j)));
    ++compared;
  }
  r.checks.push_back(at_most("max ||T| dt/du - |sigma'(u)||", a_b, 1e-6));
  r.checks.push_back(at_most("max ||T| dt/du - sqrt(|m'|^2 - r'^2)/r|", a_c, 1e-6));
  r.checks.push_back(at_least("points compared on all three routes", compared, grid / 2));
}

void corollary(CriterionResult& r, const AcceptanceOptions& options) {
  struct Params {
    double R, r;
    int p, q;
  };
  const Params candidates[] = {{3, 1, 1, 2}, {2, 1, 1, 2}, {3, 1, 2, 1}, {2, 1, 1, 3}};
  for (const Params& c : candidates) {
    if (!cyclide_curve_report(c.R, c.r, c.p, c.q).usable()) continue;
    char label[64];
    std::snprintf(label, sizeof label, "(R,r,p,q) = (%g,%g,%d,%d) ", c.R, c.r, c.p, c.q);
    const CorollaryReport report = corollary_check(constant_angle_cyclide_curve(c.R, c.r, c.p, c.q, 256), 1e-6,
                                                   1e-8, 1e-4, 1024, {options.mutate});
    r.checks.push_back(at_least(std::string(label) + "int |T| dt", report.integral_abs_T, 2 * kPi - 1e-6));
    r.checks.push_back(at_most(std::string(label) + "int |T| dt - |int T dt|", report.sign_residual, 1e-8));
    return;
  }
  r.checks.push_back(holds("usable constant-angle curve found", false));
}

void congruence(CriterionResult& r, const AcceptanceOptions& options) {
  const int wanted = options.quick ? 5 : 20;
  int used = 0;
  double original = 0.0, image = 0.0;
  for (std::uint64_t seed = 0; used < wanted && seed < 200; ++seed) {
    const PeriodicCurve x = perturbed_knot_curve(seed, 64);
    if (!detect_vertices(frenet_apparatus(x, 256)).vertex_free) continue;
    ++used;
    const ConformalInvariants a = conformal_invariants(x, 1024, {options.mutate});
    original = std::max(original, congruence_residual(a.integral_T - a.total_torsion));
    const PeriodicCurve y = mobius_image(x, random_lorentz_transform(seed * 10 + 1, 0.3));
    const ConformalInvariants b = conformal_invariants(y, std::max(1024, y.sample_count()), {options.mutate});
    image = std::max(image, congruence_residual(b.total_torsion - a.total_torsion));
  }
  r.checks.push_back(at_least("vertex-free curves", used, wanted));
  r.checks.push_back(at_most("max dist(int T dt - int tau du, 2pi Z)", original, 1e-4));
  r.checks.push_back(at_most("max dist(change of int tau du under Moebius, 2pi Z)", image, 1e-4));
}

void model_identities(CriterionResult& r, const AcceptanceOptions&) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n(0.0, 1.0);
  double angle_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double r1 = 0.2 + 2 * u(rng), r2 = 0.2 + 2 * u(rng);
    const double lo = std::abs(r1 - r2), hi = r1 + r2;
    const double d = lo + (0.02 + 0.96 * u(rng)) * (hi - lo);
    const Vec3 c1 = 3 * (Vec3(u(rng), u(rng), u(rng)) - Vec3::Constant(0.5));
    const Vec3 c2 = c1 + d * Vec3(n(rng), n(rng), n(rng)).normalized();
    // Law of cosines at a point of the intersection circle.
    const double expected = std::acos(std::abs((r1 * r1 + r2 * r2 - d * d) / (2 * r1 * r2)));
    const SphereRelation rel = angle_between(sphere_from_euclidean({c1, r1, 1}), sphere_from_euclidean({c2, r2, 1}));
    angle_err = std::max(angle_err, rel.intersecting ? std::abs(rel.angle - expected) : kPi);
  }
  r.checks.push_back(at_most("max |angle - euclidean dihedral angle| (100 pairs)", angle_err, 1e-8));

  double round_trip = 0.0;
  std::uniform_real_distribution<double> radius(0.05, kPi - 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    Vec4 m(n(rng), n(rng), n(rng), n(rng));
    const SpherePoint s = sphere_from_center_radius({m.normalized(), radius(rng)});
    const SpherePoint back = sphere_from_center_radius(center_radius_from_sphere(s));
    round_trip = std::max(round_trip, sup_norm(back.sigma() - s.sigma()) / sup_norm(s.sigma()));
  }
  r.checks.push_back(at_most("max relative center/radius round-trip error", round_trip, 1e-10));

  bool nested = true;
  const CanalPath concentric = nested_sphere_path();
  nested = nested && nestedness_check({concentric.grid_positions(), concentric.grid_tangents()});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LorentzTransform map = random_lorentz_transform(seed);
    SampledPath path;
    for (int i = 0; i <= 15; ++i) {
      const double t = -1.0 + i / 7.5;
      path.positions.push_back(map(std::cosh(t) * e(1) + std::sinh(t) * e(5)));
      path.tangents.push_back(map(std::sinh(t) * e(1) + std::cosh(t) * e(5)));
    }
    nested = nested && nestedness_check(path);
  }
  r.checks.push_back(holds("time-like paths nested (21 paths)", nested));
}

void mesh_fidelity(CriterionResult& r, const AcceptanceOptions&) {
  const TriMesh mesh = envelope_mesh(dupin_cyclide_canal(e(5), e(1), e(2)), 64, 32);
  double hausdorff = 0.0;
  for (const Vec3& v : mesh.vertices) {
    const double rho = std::hypot(v(0), v(1)) - std::sqrt(2.0);
    hausdorff = std::max(hausdorff, std::abs(std::hypot(rho, v(2)) - 1.0));
  }
  r.checks.push_back(at_most("max vertex distance to the torus", hausdorff, 1e-6));
  const MeshAudit audit = audit_mesh(mesh);
  r.checks.push_back(holds("torus mesh watertight, Euler characteristic 0",
                           audit.watertight && audit.euler_characteristic == 0));

  const PeriodicCurve x = trefoil_curve(64);
  const OsculatingCanal oc = osculating_canal(x, 512);
  const int rows = 128;
  const CurvatureTube tube = curvature_tube_mesh(oc, rows, 32);
  double on_curve = 0.0;
  for (int v : tube.singular_vertices) {
    const auto& cell = tube.mesh.vertex_grid[static_cast<std::size_t>(v)];
    const Vec3 expected = x.evaluate(x.period() * cell[0] / rows, 0);
    on_curve = std::max(on_curve, (tube.mesh.vertices[static_cast<std::size_t>(v)] - expected).norm());
  }
  r.checks.push_back(at_least("singular vertices (one per row)", static_cast<double>(tube.singular_vertices.size()), rows));
  r.checks.push_back(at_most("max distance of singular locus to the curve", on_curve, 1e-8));
}

struct Criterion {
  const char* title;
  void (*run)(CriterionResult&, const AcceptanceOptions&);
};

const Criterion kCriteria[] = {
    {"pencil geodesic length", pencil},
    {"minimal drill equality family", equality_family},
    {"Dupin cyclide regimes", cyclide_regimes},
    {"randomized 2pi bound", randomized_theorem},
    {"osculating canal is a drill", osculating_drill},
    {"contact orders", contact_orders},
    {"three omega routes", omega_routes},
    {"conformal torsion bound", corollary},
    {"total torsion congruence mod 2pi", congruence},
    {"sphere model identities", model_identities},
    {"mesh fidelity", mesh_fidelity},
};
}  // namespace

bool CriterionResult::pass() const {
  if (!error.empty() || checks.empty()) return false;
  for (const AcceptanceCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& options) {
  CriterionResult result;
  result.id = id;
  if (id < 1 || id > static_cast<int>(std::size(kCriteria))) {
    result.error = "no such criterion";
    return result;
  }
  const Criterion& c = kCriteria[id - 1];
  result.title = c.title;
  const auto start = std::chrono::steady_clock::now();
  try {
    c.run(result, options);
  } catch (const std::exception& err) {
    result.error = err.what();
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& progress) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= static_cast<int>(std::size(kCriteria)); ++id) {
    out.push_back(run_criterion(id, options));
    if (progress) progress(out.back());
  }
  return out;
}

std::string summary_line(const CriterionResult& result) {
  std::string line = "criterion " + std::to_string(result.id) + (result.id < 10 ? "  " : " ") +
                     (result.pass() ? "PASS" : "FAIL") + "  " + result.title;
  if (!result.error.empty()) return line + "  (error: " + result.error + ")";
  // The failing check, or the first one.
  const AcceptanceCheck* shown = result.checks.empty() ? nullptr : &result.checks.front();
  for (const AcceptanceCheck& c : result.checks) {
    if (!c.pass) {
      shown = &c;
      break;
    }
  }
  if (shown) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "  (%s = %.3g, %s %.3g)", shown->name.c_str(), shown->value,
                  shown->at_least ? "need >=" : "tol", shown->tolerance);
    line += buf;
  }
  return line;
}

}  // namespace desitter
