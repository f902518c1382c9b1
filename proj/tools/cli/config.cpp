#include "config.hpp"

#include "desitter/conformal.hpp"
#include "desitter/error.hpp"
#include "desitter/generators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

namespace desitter::cli {
namespace {
constexpr double kPi = std::numbers::pi;

[[noreturn]] void parse_error(const std::string& what) { throw GeometryError(ErrorKind::parse, what); }

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& err) {
    parse_error(std::string("config: bad value for '") + key + "': " + err.what());
  }
}

LorentzVector e(int i) { return basis_vector(i - 1); }
}  // namespace

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) parse_error("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& err) {
    parse_error("config: " + std::string(err.what()));
  }
  if (!j.is_object()) parse_error("config: top level must be an object");
  static const char* known[] = {"input",  "generator", "samples",     "tol",         "seed",        "out-json",
                                "out-csv", "out-obj",  "quick",       "per-sample",  "x",           "lambda",
                                "filter", "count",     "nt",          "ntheta",      "family",      "major-radii",
                                "minor-radii", "max-winding"};
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known)) {
      parse_error("config: unknown key '" + key + "'");
    }
  }
  read_key(j, "input", cfg.input);
  read_key(j, "generator", cfg.generator);
  read_key(j, "samples", cfg.samples);
  read_key(j, "tol", cfg.tol);
  read_key(j, "seed", cfg.seed);
  read_key(j, "out-json", cfg.out_json);
  read_key(j, "out-csv", cfg.out_csv);
  read_key(j, "out-obj", cfg.out_obj);
  read_key(j, "quick", cfg.quick);
  read_key(j, "per-sample", cfg.per_sample);
  read_key(j, "x", cfg.x);
  read_key(j, "lambda", cfg.lambda);
  read_key(j, "filter", cfg.filter);
  read_key(j, "count", cfg.count);
  read_key(j, "nt", cfg.nt);
  read_key(j, "ntheta", cfg.ntheta);
  read_key(j, "family", cfg.family);
  read_key(j, "major-radii", cfg.major_radii);
  read_key(j, "minor-radii", cfg.minor_radii);
  read_key(j, "max-winding", cfg.max_winding);
}

void validate(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw GeometryError(ErrorKind::precondition, what); };
  const bool analysis = cfg.command == "analyze-curve" || cfg.command == "analyze-canal" || cfg.command == "mesh" ||
                        cfg.command == "sweep";
  if (analysis && (cfg.samples < 64 || cfg.samples % 2 != 0)) fail("--samples must be even and >= 64");
  if (!(cfg.tol > 0.0)) fail("--tol must be positive");
  if (cfg.count < 1) fail("--count must be >= 1");
  if (cfg.nt < 3 || cfg.ntheta < 3) fail("--nt and --ntheta must be >= 3");
  if (!cfg.filter.empty() && cfg.filter != "almost-regular") fail("--filter accepts only almost-regular");
  if (!cfg.x.empty() && cfg.x.size() != 2) fail("--x takes a kind and a scale");
  if (!cfg.input.empty() && !cfg.generator.empty()) fail("give either --input or --generator, not both");
}

double GeneratorSpec::number(const std::string& key, double fallback) const {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    parse_error("generator: '" + key + "' is not a number");
  }
}

int GeneratorSpec::integer(const std::string& key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::round(v)) parse_error("generator: '" + key + "' is not an integer");
  return static_cast<int>(v);
}

GeneratorSpec parse_generator(const std::string& spec) {
  GeneratorSpec out;
  const auto colon = spec.find(':');
  out.name = spec.substr(0, colon);
  if (out.name.empty()) parse_error("generator: empty name");
  if (colon == std::string::npos) return out;
  std::stringstream rest(spec.substr(colon + 1));
  std::string item;
  while (std::getline(rest, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) parse_error("generator: expected key=value, got '" + item + "'");
    out.params[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

bool is_curve_generator(const std::string& name) {
  return name == "trefoil" || name == "circle" || name == "ellipse" || name == "torus-knot" ||
         name == "perturbed-knot" || name == "spherical-knot" || name == "cyclide-curve";
}

bool is_canal_generator(const std::string& name) {
  return name == "pencil" || name == "cyclide" || name == "minimal-drill" || name == "random" || name == "nested";
}

PeriodicCurve read_curve_file(const std::string& path, int expected_dimension) {
  std::ifstream in(path);
  if (!in) parse_error("input: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
    const int dimension = j.at("dimension").get<int>();
    const double period = j.at("period").get<double>();
    const auto& rows = j.at("samples");
    if (dimension != expected_dimension) {
      parse_error("input: expected dimension " + std::to_string(expected_dimension) + ", got " +
                  std::to_string(dimension));
    }
    if (!rows.is_array() || rows.empty()) parse_error("input: samples must be a non-empty array");
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(rows.size()), dimension);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      if (!row.is_array() || static_cast<int>(row.size()) != dimension) {
        parse_error("input: sample " + std::to_string(i) + " does not have " + std::to_string(dimension) + " entries");
      }
      for (int d = 0; d < dimension; ++d) samples(static_cast<Eigen::Index>(i), d) = row[static_cast<std::size_t>(d)].get<double>();
    }
    return PeriodicCurve(samples, period);
  } catch (const nlohmann::json::exception& err) {
    parse_error("input: " + std::string(err.what()));
  }
}

PeriodicCurve load_curve(const RunConfig& cfg, std::string& source) {
  if (!cfg.input.empty()) {
    source = cfg.input;
    return read_curve_file(cfg.input, 3);
  }
  const GeneratorSpec g = parse_generator(cfg.generator.empty() ? "trefoil" : cfg.generator);
  source = g.name;
  const int n = cfg.samples;
  if (g.name == "trefoil") return trefoil_curve(n);
  if (g.name == "circle") return circle_curve(g.number("radius", 1.0), n);
  if (g.name == "ellipse") return ellipse_curve(g.number("a", 2.0), g.number("b", 1.0), n);
  if (g.name == "torus-knot") {
    return torus_knot_curve(g.integer("p", 2), g.integer("q", 3), g.number("R", 2.0), g.number("r", 1.0), n);
  }
  if (g.name == "perturbed-knot") {
    return perturbed_knot_curve(static_cast<std::uint64_t>(g.integer("seed", static_cast<int>(cfg.seed))), n,
                                g.number("amplitude", 0.06));
  }
  if (g.name == "spherical-knot") {
    return spherical_knot_curve(Vec3(g.number("cx", 0.0), g.number("cy", 0.0), g.number("cz", 0.0)),
                                g.number("radius", 1.5), n);
  }
  if (g.name == "cyclide-curve") {
    return constant_angle_cyclide_curve(g.number("R", 2.0), g.number("r", 1.0), g.integer("p", 1), g.integer("q", 2), n);
  }
  parse_error("unknown curve generator '" + g.name + "'");
}

PeriodicCurve parse_lambda(const std::string& text, int samples) {
  static const std::regex form(R"(^\s*([0-9]*\.?[0-9]+)\s*(?:([+-])\s*(?:([0-9]*\.?[0-9]+)\s*\*?\s*)?(sin|cos)\s*(?:\(\s*([0-9]*)\s*s\s*\))?)?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) parse_error("lambda: cannot parse '" + text + "' (expected e.g. 2+sin)");
  const double a = std::stod(m[1]);
  double b = m[2].matched ? (m[3].matched && m[3].length() > 0 ? std::stod(m[3]) : 1.0) : 0.0;
  if (m[2].matched && m[2] == "-") b = -b;
  const bool use_sin = !m[4].matched || m[4] == "sin";
  const int k = m[5].matched && m[5].length() > 0 ? std::stoi(m[5]) : 1;
  return PeriodicCurve::from_function(
      [=](double s) {
        Eigen::VectorXd v(1);
        v << a + b * (use_sin ? std::sin(k * s) : std::cos(k * s));
        return v;
      },
      samples, 2 * kPi);
}

CanalSource load_canal(const RunConfig& cfg) {
  CanalSource out;
  if (!cfg.input.empty()) {
    out.description = cfg.input;
    out.path.emplace(read_curve_file(cfg.input, 5));
    return out;
  }
  const GeneratorSpec g = parse_generator(cfg.generator.empty() ? "cyclide" : cfg.generator);
  out.description = g.name;
  if (g.name == "pencil") {
    out.path = CanalPath::from_function(
        [](double s) -> LorentzVector { return std::cos(s) * e(1) + std::sin(s) * e(2); }, cfg.samples, 2 * kPi);
  } else if (g.name == "cyclide") {
    std::string kind = g.params.count("kind") ? g.params.at("kind") : "timelike";
    double scale = g.number("scale", 1.0);
    if (!cfg.x.empty()) {
      kind = cfg.x[0];
      try {
        scale = std::stod(cfg.x[1]);
      } catch (const std::exception&) {
        parse_error("--x: scale is not a number");
      }
    }
    LorentzVector u;
    u << 0, 0, 0, 1, 1;
    if (kind == "timelike") {
      out.path = dupin_cyclide_canal(scale * e(5), e(1), e(2), cfg.samples);
    } else if (kind == "spacelike") {
      out.path = dupin_cyclide_canal(scale * e(1), e(2), e(3), cfg.samples);
    } else if (kind == "lightlike") {
      out.path = dupin_cyclide_canal(scale * u, e(1), e(2), cfg.samples);
    } else {
      parse_error("--x: kind must be timelike, spacelike or lightlike");
    }
    out.description += " " + kind + " " + std::to_string(scale);
  } else if (g.name == "minimal-drill") {
    LorentzVector u;
    u << 0, 0, 0, 1, 1;
    out.path = minimal_drill(parse_lambda(cfg.lambda, cfg.samples), u, e(1), e(2));
    out.description += " lambda=" + cfg.lambda;
  } else if (g.name == "random") {
    RandomPathOptions options;
    if (cfg.filter == "almost-regular") {
      out.random_paths = random_almost_regular_paths(cfg.seed, cfg.count, options);
    } else {
      for (int i = 0; i < cfg.count; ++i) {
        const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        out.random_paths.push_back({seed, random_closed_path(seed, options)});
      }
    }
  } else if (g.name == "nested") {
    out.path = nested_sphere_path(cfg.samples);
  } else {
    parse_error("unknown canal generator '" + g.name + "'");
  }
  return out;
}

}  // namespace desitter::cli
