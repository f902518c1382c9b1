#include "commands.hpp"

#include "desitter/acceptance.hpp"
#include "desitter/conformal.hpp"
#include "desitter/error.hpp"
#include "desitter/generators.hpp"
#include "desitter/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <sstream>

namespace desitter::cli {
namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kLengthTol = 1e-10;  // relative tolerance of the length quadrature

int analysis_grid(const PeriodicCurve& x) { return std::max(1024, 4 * x.sample_count()); }

Json counts_json(const CausalCounts& c) {
  return Json{{"spacelike", c.spacelike}, {"timelike", c.timelike}, {"lightlike", c.lightlike}, {"zero", c.zero}};
}

Json classification_json(const CanalClassification& c, double tol) {
  return Json{{"verdict", to_string(c.verdict)},
              {"almost_regular", c.almost_regular()},
              {"tangent_types", counts_json(c.tangent_type)},
              {"kg_types", counts_json(c.kg_type)},
              {"min_tangent_norm2", measured(c.min_tangent_norm2, tol)},
              {"min_kg_norm2", measured(c.min_kg_norm2, tol)},
              {"max_kg_norm2", measured(c.max_kg_norm2, tol)},
              {"min_kg_sup", measured(c.min_kg_sup, tol)},
              {"max_kg_sup", measured(c.max_kg_sup, tol)}};
}

Json bound_json(const BoundReport& b, double tol) {
  return Json{{"verdict", to_string(b.verdict)},
              {"length", measured(b.length, kLengthTol)},
              {"margin", tested(b.margin, tol, b.verdict != BoundVerdict::fail)},
              {"equality_family_detected", b.equality_family_detected},
              {"direction_deviation", measured(b.direction_deviation, tol)}};
}

Json audit_json(const TriMesh& mesh) {
  const MeshAudit a = audit_mesh(mesh);
  return Json{{"vertices", a.vertices},
              {"faces", a.faces},
              {"euler_characteristic", a.euler_characteristic},
              {"boundary_edges", a.boundary_edges},
              {"nonmanifold_edges", a.nonmanifold_edges},
              {"watertight", a.watertight},
              {"culled_vertices", mesh.culled_vertices},
              {"dropped_triangles", mesh.dropped_triangles},
              {"degenerate", mesh.degenerate},
              {"min_quality", measured(a.min_quality, 0.0)},
              {"min_area", measured(a.min_area, 0.0)}};
}

void write_mesh_file(const TriMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GeometryError(ErrorKind::parse, "cannot write " + path);
  write_obj(mesh, out);
}

Json curve_json(const PeriodicCurve& x, const std::string& source) {
  return Json{{"source", source},
              {"samples", x.sample_count()},
              {"dimension", x.dimension()},
              {"period", measured(x.period(), 0.0)},
              {"spectral_tail", measured(x.spectral_tail(), 0.0)}};
}

// Peeks at the dimension field of a curve file.
int input_dimension(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError(ErrorKind::parse, "input: cannot open " + path);
  try {
    nlohmann::json j;
    in >> j;
    return j.at("dimension").get<int>();
  } catch (const nlohmann::json::exception& err) {
    throw GeometryError(ErrorKind::parse, std::string("input: ") + err.what());
  }
}
}  // namespace

int cmd_analyze_curve(const RunConfig& cfg, Json& report) {
  std::string source;
  const PeriodicCurve x = load_curve(cfg, source);
  report["curve"] = curve_json(x, source);
  const int grid = analysis_grid(x);
  report["grid"] = grid;

  const FrenetData f = frenet_apparatus(x, grid);
  report["frenet"] = Json{{"length", measured(f.length, 1e-10)},
                          {"k_min", measured(f.k.minCoeff(), 1e-10)},
                          {"k_max", measured(f.k.maxCoeff(), 1e-10)},
                          {"tau_min", measured(f.tau.minCoeff(), 1e-10)},
                          {"tau_max", measured(f.tau.maxCoeff(), 1e-10)}};
  const VertexReport vertices = detect_vertices(f, cfg.tol);
  Json vertex_params = Json::array();
  // Arcs of circles flag every grid point; the list is capped.
  constexpr std::size_t kMaxListed = 64;
  for (std::size_t i = 0; i < std::min(kMaxListed, vertices.parameters.size()); ++i) {
    vertex_params.push_back(measured(vertices.parameters[i], 1e-10));
  }
  report["vertices"] = Json{{"vertex_free", vertices.vertex_free},
                            {"margin", tested(vertices.margin, cfg.tol, vertices.vertex_free)},
                            {"count", vertices.parameters.size()},
                            {"parameters", vertex_params},
                            {"parameters_truncated", vertices.parameters.size() > kMaxListed}};
  if (!vertices.vertex_free) {
    throw GeometryError(ErrorKind::vertex, "curve has " + std::to_string(vertices.parameters.size()) +
                                               " vertices (g/k^4 margin " + std::to_string(vertices.margin) + ")");
  }

  const OsculatingCanal oc = osculating_canal(x, grid);
  const DrillReport drill = drill_check(oc, cfg.tol, 1e-6);
  Json spherical = Json::array();
  for (const SphericalPointCheck& c : cross_check_spherical_points(x, oc.spherical_points)) {
    spherical.push_back(Json{{"t", measured(c.t, 1e-12)}, {"contact_order", c.contact_order}});
  }
  report["osculating_canal"] = Json{
      {"orientation_coherent", oc.orientation_coherent},
      {"closure_pairing", measured(oc.closure_pairing, 0.0)},
      {"drill_check",
       Json{{"pass", drill.pass()},
            {"tested_points", drill.tested},
            {"lightlike_ratio", tested(drill.max_lightlike_ratio, cfg.tol, drill.lightlike)},
            {"span_angle", tested(drill.max_angle, 1e-6, drill.aligned)},
            {"min_kg_sup", tested(drill.min_kg_sup, 0.0, drill.nonzero)}}},
      {"spherical_points", spherical}};

  const ConformalInvariants inv = conformal_invariants(x, grid);
  const Eigen::VectorXd via_canal = omega_via_canal(oc);
  const double route_gap = (inv.omega - via_canal).cwiseAbs().maxCoeff();
  report["conformal"] = Json{{"conformal_length", measured(inv.conformal_length, 1e-10)},
                             {"integral_T", measured(inv.integral_T, 1e-10)},
                             {"integral_abs_T", measured(inv.integral_abs_T, 1e-10)},
                             {"total_torsion", measured(inv.total_torsion, 1e-11)},
                             {"omega_route_gap", tested(route_gap, 1e-6, route_gap <= 1e-6)}};
  if (cfg.per_sample) {
    report["per_sample"] = Json{{"t", sampled(inv.frenet.t, 0.0)},
                                {"dt_du", sampled(inv.dt_du, 1e-10)},
                                {"T", sampled(inv.T, 1e-8)},
                                {"omega", sampled(inv.omega, 1e-8)}};
  }

  const CorollaryReport cor = corollary_check(x, cfg.tol, 1e-8, 1e-4, grid);
  report["corollary"] = Json{{"verdict", to_string(cor.verdict)},
                             {"integral_omega", Json{{"value", number_or_null(cor.integral_omega)}, {"bound", 2 * kPi}, {"tol", cfg.tol},
                                                        {"pass", cor.bound_holds}}},
                             {"sign_residual", tested(cor.sign_residual, 1e-8, cor.sign_constant)},
                             {"congruence_residual", tested(cor.congruence_residual, 1e-4, cor.congruent)},
                             {"winding", cor.winding}};
  const bool ok = drill.pass() && cor.verdict != BoundVerdict::fail && oc.orientation_coherent;
  return ok ? kSuccess : kVerificationFailure;
}

int cmd_analyze_canal(const RunConfig& cfg, Json& report) {
  const CanalSource src = load_canal(cfg);
  report["canal"] = Json{{"source", src.description}};
  if (!src.path) {
    // Random batch.
    Json paths = Json::array();
    double min_margin = std::numeric_limits<double>::infinity();
    int failures = 0, applicable = 0;
    for (const RandomPathSample& s : src.random_paths) {
      const BoundReport b = verify_2pi_bound(s.path, cfg.tol);
      if (b.verdict == BoundVerdict::fail) ++failures;
      if (b.verdict != BoundVerdict::not_applicable) {
        ++applicable;
        min_margin = std::min(min_margin, b.margin);
      }
      paths.push_back(Json{{"seed", s.seed},
                           {"classification", to_string(b.classification.verdict)},
                           {"verdict", to_string(b.verdict)},
                           {"length", measured(b.length, kLengthTol)},
                           {"margin", tested(b.margin, cfg.tol, b.verdict != BoundVerdict::fail)}});
    }
    report["batch"] = Json{{"filter", cfg.filter.empty() ? "none" : cfg.filter},
                           {"count", src.random_paths.size()},
                           {"applicable", applicable},
                           {"failures", failures},
                           {"min_margin", tested(min_margin, cfg.tol, failures == 0)},
                           {"paths", paths}};
    return failures == 0 ? kSuccess : kVerificationFailure;
  }

  const CanalPath& path = *src.path;
  report["canal"]["samples"] = path.sigma().sample_count();
  report["canal"]["period"] = measured(path.period(), 0.0);
  const BoundReport b = verify_2pi_bound(path, cfg.tol);
  report["classification"] = classification_json(b.classification, kDefaultCausalTol);
  report["length"] = measured(b.length, kLengthTol);
  report["bound"] = bound_json(b, cfg.tol);
  if (!cfg.out_obj.empty()) {
    const TriMesh mesh = envelope_mesh(path, cfg.nt, cfg.ntheta);
    write_mesh_file(mesh, cfg.out_obj);
    report["mesh"] = audit_json(mesh);
    report["mesh"]["obj"] = cfg.out_obj;
  }
  return b.verdict == BoundVerdict::fail ? kVerificationFailure : kSuccess;
}

int cmd_mesh(const RunConfig& cfg, Json& report) {
  if (cfg.out_obj.empty()) throw GeometryError(ErrorKind::precondition, "mesh: --out-obj is required");
  bool tube = false;
  if (!cfg.input.empty()) {
    tube = input_dimension(cfg.input) == 3;
  } else if (!cfg.generator.empty()) {
    tube = is_curve_generator(parse_generator(cfg.generator).name);
  }
  if (tube) {
    std::string source;
    const PeriodicCurve x = load_curve(cfg, source);
    report["curve"] = curve_json(x, source);
    const OsculatingCanal oc = osculating_canal(x, analysis_grid(x));
    const CurvatureTube t = curvature_tube_mesh(oc, cfg.nt, cfg.ntheta);
    write_mesh_file(t.mesh, cfg.out_obj);
    // Singular locus: the column of each row that sits on the curve.
    Json locus = Json::array();
    for (int v : t.singular_vertices) {
      const int row = t.mesh.vertex_grid[static_cast<std::size_t>(v)][0];
      locus.push_back(Json{{"obj_index", v + 1}, {"row", row}, {"t", measured(x.period() * row / cfg.nt, 0.0)}});
    }
    const std::string annotation = cfg.out_obj + ".singular.json";
    Json ann{{"kind", "curvature-tube singular locus"}, {"source", source}, {"obj", cfg.out_obj},
             {"rows", cfg.nt}, {"cols", cfg.ntheta}, {"singular_vertices", locus}};
    std::ofstream(annotation) << ann.dump(2) << "\n";
    report["mesh"] = audit_json(t.mesh);
    report["mesh"]["kind"] = "curvature-tube";
    report["mesh"]["obj"] = cfg.out_obj;
    report["mesh"]["singular_locus_file"] = annotation;
    report["mesh"]["singular_vertices"] = t.singular_vertices.size();
    return kSuccess;
  }
  const CanalSource src = load_canal(cfg);
  if (!src.path) {
    if (src.random_paths.empty()) throw GeometryError(ErrorKind::precondition, "mesh: no path");
  }
  const CanalPath& path = src.path ? *src.path : src.random_paths.front().path;
  report["canal"] = Json{{"source", src.description}};
  const TriMesh mesh = envelope_mesh(path, cfg.nt, cfg.ntheta);
  write_mesh_file(mesh, cfg.out_obj);
  report["mesh"] = audit_json(mesh);
  report["mesh"]["kind"] = "envelope";
  report["mesh"]["obj"] = cfg.out_obj;
  if (mesh.degenerate) {
    const std::string warning = "degenerate envelope (single characteristic circle); wrote a polyline";
    std::cerr << "warning: " << warning << "\n";
    report["warnings"] = Json::array({warning});
  }
  return kSuccess;
}

int cmd_verify_suite(const RunConfig& cfg, Json& report) {
  AcceptanceOptions options;
  options.quick = cfg.quick;
  options.mutate = cfg.mutate;
  Json criteria = Json::array();
  bool ok = true;
  run_acceptance(options, [&](const CriterionResult& r) {
    std::cout << summary_line(r) << std::endl;
    ok = ok && r.pass();
    Json checks = Json::array();
    for (const AcceptanceCheck& c : r.checks) {
      checks.push_back(Json{{"name", c.name},
                            {"value", number_or_null(c.value)},
                            {"tol", c.tolerance},
                            {"comparison", c.at_least ? ">=" : "<="},
                            {"pass", c.pass}});
    }
    Json item{{"id", r.id}, {"title", r.title}, {"pass", r.pass()}, {"seconds", measured(r.seconds, 0.0)},
              {"checks", checks}};
    if (!r.error.empty()) item["error"] = r.error;
    criteria.push_back(item);
  });
  report["quick"] = cfg.quick;
  report["mutate"] = cfg.mutate;
  report["criteria"] = criteria;
  report["pass"] = ok;
  return ok ? kSuccess : kVerificationFailure;
}

int cmd_sweep(const RunConfig& cfg, Json& report) {
  std::ostringstream csv;
  Json rows = Json::array();
  auto invariants_row = [&](const PeriodicCurve& x, Json& row) {
    const int grid = analysis_grid(x);
    const ConformalInvariants inv = conformal_invariants(x, grid);
    row["integral_abs_T"] = inv.integral_abs_T;
    row["integral_T"] = inv.integral_T;
    row["total_torsion"] = inv.total_torsion;
    row["congruence_residual"] = congruence_residual(inv.integral_T - inv.total_torsion);
  };
  const char* value_columns[] = {"integral_abs_T", "integral_T", "total_torsion", "congruence_residual"};
  auto emit = [&](const Json& row, const std::vector<std::string>& keys) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      if (i) csv << ',';
      const Json& v = row.contains(keys[i]) ? row.at(keys[i]) : Json(nullptr);
      if (v.is_null()) continue;
      if (v.is_number_float()) {
        std::ostringstream s;
        s.precision(12);
        s << v.get<double>();
        csv << s.str();
      } else if (v.is_string()) {
        csv << v.get<std::string>();
      } else {
        csv << v.dump();
      }
    }
    csv << '\n';
    rows.push_back(row);
  };

  std::vector<std::string> keys;
  if (cfg.family == "cyclide") {
    keys = {"R", "r", "p", "q", "regular", "vertex_free", "vertex_margin", "spherical_points"};
    keys.insert(keys.end(), std::begin(value_columns), std::end(value_columns));
    for (std::size_t i = 0; i < keys.size(); ++i) csv << (i ? "," : "") << keys[i];
    csv << '\n';
    for (double R : cfg.major_radii) {
      for (double r : cfg.minor_radii) {
        if (!(R > r && r > 0.0)) continue;
        for (int p = 1; p <= cfg.max_winding; ++p) {
          for (int q = 1; q <= cfg.max_winding; ++q) {
            if (std::gcd(p, q) != 1) continue;
            const CyclideCurveReport c = cyclide_curve_report(R, r, p, q, cfg.samples);
            Json row{{"R", R}, {"r", r}, {"p", p}, {"q", q}, {"regular", c.regular},
                     {"vertex_free", c.vertices.vertex_free}, {"vertex_margin", c.vertices.margin},
                     {"spherical_points", static_cast<int>(c.spherical_points.size())}};
            if (c.regular && c.vertices.vertex_free) {
              invariants_row(constant_angle_cyclide_curve(R, r, p, q, cfg.samples), row);
            }
            emit(row, keys);
          }
        }
      }
    }
  } else if (cfg.family == "perturbed-knot") {
    keys = {"seed", "vertex_free", "vertex_margin", "spherical_points"};
    keys.insert(keys.end(), std::begin(value_columns), std::end(value_columns));
    for (std::size_t i = 0; i < keys.size(); ++i) csv << (i ? "," : "") << keys[i];
    csv << '\n';
    for (int i = 0; i < cfg.count; ++i) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
      const PeriodicCurve x = perturbed_knot_curve(seed, cfg.samples);
      const VertexReport v = detect_vertices(frenet_apparatus(x, analysis_grid(x)), cfg.tol);
      Json row{{"seed", seed}, {"vertex_free", v.vertex_free}, {"vertex_margin", v.margin}};
      if (v.vertex_free) {
        row["spherical_points"] = static_cast<int>(osculating_canal(x, 4 * x.sample_count()).spherical_points.size());
        invariants_row(x, row);
      }
      emit(row, keys);
    }
  } else {
    throw GeometryError(ErrorKind::precondition, "sweep: --family must be cyclide or perturbed-knot");
  }

  if (!cfg.out_csv.empty()) {
    std::ofstream out(cfg.out_csv);
    if (!out) throw GeometryError(ErrorKind::parse, "cannot write " + cfg.out_csv);
    out << csv.str();
  } else if (cfg.out_json.empty()) {
    std::cout << csv.str();
  }
  // Data only: a sweep never issues a verdict.
  report["family"] = cfg.family;
  report["columns"] = keys;
  report["value_tol"] = 1e-10;
  report["rows"] = rows;
  return kSuccess;
}

}  // namespace desitter::cli
