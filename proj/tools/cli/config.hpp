#pragma once

#include "desitter/canal.hpp"
#include "desitter/periodic_curve.hpp"

#include "json.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace desitter::cli {

struct RunConfig {
  std::string command;
  std::string input;      // JSON curve file
  std::string generator;  // name[:key=value,...]
  int samples = 128;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  std::string out_json;
  std::string out_csv;
  std::string out_obj;
  bool quick = false;
  bool per_sample = false;

  // canal generators
  std::vector<std::string> x;  // cyclide center: {timelike|spacelike|lightlike, scale}
  std::string lambda = "2+sin";
  std::string filter;          // random: "almost-regular" or empty
  int count = 1;

  // mesh
  int nt = 64;
  int ntheta = 32;

  // sweep
  std::string family = "cyclide";
  std::vector<double> major_radii{2.0, 3.0};
  std::vector<double> minor_radii{1.0};
  int max_winding = 3;

  bool mutate = false;  // verify: negative-control fixture
};

/// Values from a JSON config file, keyed like the long flags (without "--").
/// Throws GeometryError(parse) for unknown keys or wrong types.
void apply_config_file(const std::string& path, RunConfig& cfg);

/// Throws GeometryError(precondition) on invalid values.
void validate(const RunConfig& cfg);

struct GeneratorSpec {
  std::string name;
  std::map<std::string, std::string> params;

  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
};

/// "name:key=value,key=value". Throws GeometryError(parse).
GeneratorSpec parse_generator(const std::string& spec);

bool is_curve_generator(const std::string& name);
bool is_canal_generator(const std::string& name);

/// {dimension, period, samples: [[...], ...]}. Throws GeometryError(parse).
PeriodicCurve read_curve_file(const std::string& path, int expected_dimension);

/// Space curve from --input or a curve generator.
PeriodicCurve load_curve(const RunConfig& cfg, std::string& source);

struct CanalSource {
  std::string description;
  std::optional<CanalPath> path;              // single path
  std::vector<RandomPathSample> random_paths;  // random generator
};

/// Canal path(s) from --input or a canal generator.
CanalSource load_canal(const RunConfig& cfg);

/// lambda(s) from "a", "a+sin", "a+b*cos", "a-b*sin(ks)" and similar.
PeriodicCurve parse_lambda(const std::string& text, int samples);

}  // namespace desitter::cli
