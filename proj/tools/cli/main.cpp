#include "commands.hpp"

#include "desitter/error.hpp"

#include "CLI11.hpp"

#include <cstring>
#include <fstream>
#include <iostream>

using namespace desitter;
using namespace desitter::cli;

namespace {

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--input", cfg.input, "Curve file: JSON {dimension, period, samples}");
  sub->add_option("--generator", cfg.generator, "Built-in generator, name[:key=value,...]");
  sub->add_option("--samples", cfg.samples, "Sample count N (even, >= 64)");
  sub->add_option("--tol", cfg.tol, "Verification tolerance");
  sub->add_option("--seed", cfg.seed, "Random seed");
  sub->add_option("--out-json", cfg.out_json, "Write the JSON report here");
  sub->add_option("--out-csv", cfg.out_csv, "Write CSV here");
  sub->add_option("--out-obj", cfg.out_obj, "Write an OBJ mesh here");
  sub->add_flag("--quick", cfg.quick, "Reduced sample counts");
}

// The config file is read before the flags so that flags override it.
std::string find_config(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

void emit(const RunConfig& cfg, const Json& report) {
  if (!cfg.out_json.empty()) {
    std::ofstream out(cfg.out_json);
    if (!out) {
      std::cerr << "error: cannot write " << cfg.out_json << "\n";
      return;
    }
    out << report.dump(2) << "\n";
  } else if (cfg.command != "sweep" && cfg.command != "verify") {
    std::cout << report.dump(2) << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;
  CLI::App app{"Space-of-spheres geometry of canal surfaces and space curves"};
  app.require_subcommand(1);
  app.add_option("--config", config_path, "JSON config file; flags override its values");

  CLI::App* curve = app.add_subcommand("analyze-curve", "Frenet data, osculating canal and conformal invariants");
  CLI::App* canal = app.add_subcommand("analyze-canal", "Classification, length and the 2pi bound of a canal path");
  CLI::App* mesh = app.add_subcommand("mesh", "Envelope or curvature-tube mesh as OBJ");
  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance criteria");
  CLI::App* sweep = app.add_subcommand("sweep", "Invariant table over a family of curves (data only)");
  for (CLI::App* sub : {curve, canal, mesh, verify, sweep}) {
    add_common(sub, cfg);
    sub->add_option("--config", config_path, "JSON config file; flags override its values");
  }
  curve->add_flag("--per-sample", cfg.per_sample, "Include per-sample arrays");
  for (CLI::App* sub : {canal, mesh}) {
    sub->add_option("--x", cfg.x, "Cyclide center: timelike|spacelike|lightlike SCALE")->expected(2);
    sub->add_option("--lambda", cfg.lambda, "Minimal drill profile, e.g. 2+sin");
    sub->add_option("--filter", cfg.filter, "Random paths: almost-regular");
    sub->add_option("--count", cfg.count, "Random paths: how many");
  }
  for (CLI::App* sub : {canal, mesh}) {
    sub->add_option("--nt", cfg.nt, "Mesh rows");
    sub->add_option("--ntheta", cfg.ntheta, "Mesh columns");
  }
  verify->add_flag("--mutate", cfg.mutate, "Inject a sign error into T (negative control)");
  sweep->add_option("--family", cfg.family, "cyclide or perturbed-knot");
  sweep->add_option("--major-radii", cfg.major_radii, "Torus R values")->delimiter(',');
  sweep->add_option("--minor-radii", cfg.minor_radii, "Torus r values")->delimiter(',');
  sweep->add_option("--max-winding", cfg.max_winding, "Largest p and q");
  sweep->add_option("--count", cfg.count, "perturbed-knot: number of seeds");

  Json report;
  try {
    const std::string early = find_config(argc, argv);
    if (!early.empty()) apply_config_file(early, cfg);
  } catch (const GeometryError& err) {
    report = Json{{"error", {{"kind", std::string(to_string(err.kind()))}, {"message", err.what()}}}};
    std::cout << report.dump(2) << "\n";
    return kInputError;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? kSuccess : kInputError;
  }

  const std::pair<CLI::App*, int (*)(const RunConfig&, Json&)> table[] = {
      {curve, cmd_analyze_curve}, {canal, cmd_analyze_canal}, {mesh, cmd_mesh},
      {verify, cmd_verify_suite}, {sweep, cmd_sweep}};
  int code = kInternalError;
  for (const auto& [sub, run] : table) {
    if (!sub->parsed()) continue;
    cfg.command = sub->get_name();
    report = Json{{"command", cfg.command}};
    try {
      validate(cfg);
      code = run(cfg, report);
    } catch (const GeometryError& err) {
      report["error"] = Json{{"kind", std::string(to_string(err.kind()))}, {"message", err.what()}};
      code = kInputError;
    } catch (const std::exception& err) {
      report["error"] = Json{{"kind", "internal"}, {"message", err.what()}};
      code = kInternalError;
    }
    report["exit_code"] = code;
    emit(cfg, report);
    if (report.contains("error")) std::cerr << "error: " << report["error"]["message"].get<std::string>() << "\n";
  }
  return code;
}
