#include "desitter/canal.hpp"

#include "desitter/curves.hpp"
#include "desitter/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace desitter {
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

LorentzVector row5(const Eigen::MatrixXd& m, int j) { return m.row(j).transpose(); }

// sigma + (sigma'' - (<sigma'',sigma'>/v2) sigma') / v2 with v2 = <sigma',sigma'>.
LorentzVector curvature_from_jets(const LorentzVector& s0, const LorentzVector& s1,
                                  const LorentzVector& s2) {
  const double v2 = inner(s1, s1);
  return s0 + (s2 - (inner(s2, s1) / v2) * s1) / v2;
}

double lorentz_speed(const Eigen::VectorXd& d) {
  const LorentzVector v = d;
  return std::sqrt(std::max(inner(v, v), 0.0));
}
}  // namespace

void CausalCounts::add(CausalType type) {
  switch (type) {
    case CausalType::spacelike: ++spacelike; break;
    case CausalType::timelike: ++timelike; break;
    case CausalType::lightlike: ++lightlike; break;
    case CausalType::zero: ++zero; break;
  }
}

CanalPath::CanalPath(PeriodicCurve sigma, double tol) : sigma_(std::move(sigma)) {
  if (sigma_.dimension() != 5) {
    throw GeometryError(ErrorKind::precondition, "CanalPath: samples must be 5-dimensional");
  }
  const Eigen::MatrixXd& samples = sigma_.samples();
  for (int j = 0; j < sigma_.sample_count(); ++j) {
    const LorentzVector s = row5(samples, j);
    if (!(std::abs(inner(s, s) - 1.0) <= tol)) {
      throw GeometryError(ErrorKind::precondition, "CanalPath: sample off de Sitter space");
    }
  }
  grid_size_ = 4 * sigma_.sample_count();
  const Eigen::MatrixXd p0 = sigma_.on_grid(0, grid_size_);
  const Eigen::MatrixXd p1 = sigma_.on_grid(1, grid_size_);
  const Eigen::MatrixXd p2 = sigma_.on_grid(2, grid_size_);
  positions_.reserve(static_cast<std::size_t>(grid_size_));
  tangents_.reserve(static_cast<std::size_t>(grid_size_));
  for (int j = 0; j < grid_size_; ++j) {
    positions_.push_back(row5(p0, j));
    tangents_.push_back(row5(p1, j));
    const double scale = std::max(1.0, sup_norm(tangents_.back()));
    if (!(std::abs(inner(positions_.back(), tangents_.back())) <= 1e-8 * scale)) {
      throw GeometryError(ErrorKind::precondition,
                          "CanalPath: <sigma, sigma'> != 0; samples do not resolve the path");
    }
    tangent_profile_.add(causal_type(tangents_.back()));
  }
  if (!spacelike()) return;

  Eigen::MatrixXd speed(grid_size_, 1);
  curvature_.reserve(static_cast<std::size_t>(grid_size_));
  for (int j = 0; j < grid_size_; ++j) {
    speed(j, 0) = std::sqrt(inner(tangents_[j], tangents_[j]));
    curvature_.push_back(curvature_from_jets(positions_[j], tangents_[j], row5(p2, j)));
  }
  speed_.emplace(std::move(speed), period());
  total_length_ = speed_->integral_over_period()(0);
}

CanalPath CanalPath::from_function(const std::function<LorentzVector(double)>& f, int samples,
                                   double period) {
  return CanalPath(PeriodicCurve::from_function(
      [&f](double t) { return Eigen::VectorXd(f(t)); }, samples, period));
}

LorentzVector CanalPath::position(double t) const { return sigma_.evaluate(t, 0); }

LorentzVector CanalPath::derivative(double t, int order) const { return sigma_.evaluate(t, order); }

void CanalPath::require_spacelike(const char* who) const {
  if (!spacelike()) {
    throw GeometryError(ErrorKind::non_spacelike, std::string(who) + ": tangent not space-like");
  }
}

double CanalPath::arclength_at(double t) const {
  require_spacelike("arclength_at");
  return speed_->integral(t)(0);
}

double CanalPath::parameter_at_arclength(double s) const {
  require_spacelike("parameter_at_arclength");
  const double turns = std::floor(s / total_length_);
  const double target = s - turns * total_length_;
  double t = period() * target / total_length_;
  for (int iter = 0; iter < 80; ++iter) {
    const double step = (speed_->integral(t)(0) - target) / speed_->evaluate(t)(0);
    t -= step;
    if (std::abs(step) <= 1e-15 * period()) break;
  }
  return t + turns * period();
}

CanalPath CanalPath::transformed(const LorentzTransform& map) const {
  Eigen::MatrixXd out = sigma_.samples() * map.matrix().transpose();
  return CanalPath(PeriodicCurve(std::move(out), period()));
}

double length(const CanalPath& path, double rel_tol) {
  if (!path.spacelike()) {
    throw GeometryError(ErrorKind::non_spacelike, "length: tangent not space-like");
  }
  auto integrand = [&path](double t) {
    const LorentzVector d = path.derivative(t, 1);
    return std::sqrt(std::max(inner(d, d), 0.0));
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, path.period(),
                                                                       20, rel_tol);
}

LorentzVector geodesic_curvature_at_parameter(const CanalPath& path, double t) {
  if (!path.spacelike()) {
    throw GeometryError(ErrorKind::non_spacelike, "geodesic_curvature: tangent not space-like");
  }
  return curvature_from_jets(path.position(t), path.derivative(t, 1), path.derivative(t, 2));
}

LorentzVector geodesic_curvature_vector(const CanalPath& path, double s) {
  return geodesic_curvature_at_parameter(path, path.parameter_at_arclength(s));
}

PeriodicCurve arclength_path(const CanalPath& path, int samples) {
  if (!path.spacelike()) {
    throw GeometryError(ErrorKind::non_spacelike, "arclength_path: tangent not space-like");
  }
  return arclength_reparametrize(path.sigma(), lorentz_speed, samples);
}

const char* to_string(CanalVerdict verdict) {
  switch (verdict) {
    case CanalVerdict::regular: return "regular";
    case CanalVerdict::almost_regular: return "almost_regular";
    case CanalVerdict::drill: return "drill";
    case CanalVerdict::geodesic: return "geodesic";
    case CanalVerdict::spacelike_curvature: return "spacelike_curvature";
    case CanalVerdict::not_canal: return "not_canal";
    case CanalVerdict::mixed: return "mixed";
  }
  return "unknown";
}

bool CanalClassification::almost_regular() const {
  return verdict == CanalVerdict::regular || verdict == CanalVerdict::almost_regular ||
         verdict == CanalVerdict::drill;
}

CanalClassification classify(const CanalPath& path, double tol) {
  CanalClassification out;
  const double inf = std::numeric_limits<double>::infinity();
  out.min_tangent_norm2 = inf;
  for (const auto& d : path.grid_tangents()) {
    out.tangent_type.add(causal_type(d, tol));
    const double s = sup_norm(d);
    out.min_tangent_norm2 = std::min(out.min_tangent_norm2, s > 0.0 ? inner(d, d) / (s * s) : 0.0);
  }
  if (out.tangent_type.spacelike != out.tangent_type.total() || !path.spacelike()) {
    out.verdict = CanalVerdict::not_canal;
    return out;
  }
  out.min_abs_kg_norm2 = inf;
  out.min_kg_norm2 = inf;
  out.max_kg_norm2 = -inf;
  out.min_kg_sup = inf;
  out.max_kg_sup = 0.0;
  for (const auto& k : path.grid_curvature()) {
    out.kg_type.add(causal_type(k, tol));
    const double q = inner(k, k);
    out.min_abs_kg_norm2 = std::min(out.min_abs_kg_norm2, std::abs(q));
    out.min_kg_norm2 = std::min(out.min_kg_norm2, q);
    out.max_kg_norm2 = std::max(out.max_kg_norm2, q);
    out.min_kg_sup = std::min(out.min_kg_sup, sup_norm(k));
    out.max_kg_sup = std::max(out.max_kg_sup, sup_norm(k));
  }
  const CausalCounts& c = out.kg_type;
  const int n = c.total();
  if (c.zero == n) {
    out.verdict = CanalVerdict::geodesic;
  } else if (c.timelike == n) {
    out.verdict = CanalVerdict::regular;
  } else if (c.lightlike == n) {
    out.verdict = CanalVerdict::drill;
  } else if (c.timelike + c.lightlike == n) {
    out.verdict = CanalVerdict::almost_regular;
  } else if (c.spacelike == n) {
    out.verdict = CanalVerdict::spacelike_curvature;
  } else {
    out.verdict = CanalVerdict::mixed;
  }
  return out;
}

CircleRep characteristic_circle(const CanalPath& path, double t) {
  const LorentzVector d = path.derivative(t, 1);
  const double q = inner(d, d);
  if (causal_type(d) != CausalType::spacelike) {
    throw GeometryError(ErrorKind::non_spacelike, "characteristic_circle: tangent not space-like");
  }
  const LorentzVector s = path.position(t);
  LorentzVector u = d / std::sqrt(q);
  u -= inner(u, s) * s;  // roundoff only
  return make_circle(SpherePoint::normalized(s), SpherePoint::normalized(u));
}

Involute::Involute(const CanalPath& path, double t_offset)
    : unit_(arclength_path(path)), offset_(t_offset) {}

LorentzVector Involute::value(double s) const {
  const double a = s + offset_;
  return std::cos(a) * LorentzVector(unit_.evaluate(s, 0)) -
         std::sin(a) * LorentzVector(unit_.evaluate(s, 1));
}

LorentzVector Involute::derivative(double s) const {
  const double a = s + offset_;
  return -std::sin(a) * (LorentzVector(unit_.evaluate(s, 0)) + LorentzVector(unit_.evaluate(s, 2)));
}

CausalCounts Involute::derivative_profile(int n, double tol) const {
  CausalCounts out;
  for (int i = 0; i < n; ++i) out.add(causal_type(derivative(length() * i / n), tol));
  return out;
}

Involute involute(const CanalPath& path, double t_offset) { return Involute(path, t_offset); }

CanalPath dupin_cyclide_canal(const LorentzVector& x, const LorentzVector& h1,
                              const LorentzVector& h2, int samples) {
  const LorentzVector span[] = {h1, h2};
  LorentzFrame frame;
  try {
    frame = orthonormalize_subspace(span);
  } catch (const GeometryError&) {
    throw GeometryError(ErrorKind::precondition, "dupin_cyclide_canal: h basis is degenerate");
  }
  if (frame.negative_count() != 0) {
    throw GeometryError(ErrorKind::precondition, "dupin_cyclide_canal: h basis is not space-like");
  }
  const LorentzVector& f1 = frame.basis[0];
  const LorentzVector& f2 = frame.basis[1];
  const double scale = std::max(1.0, sup_norm(x));
  if (std::abs(inner(x, f1)) > 1e-9 * scale || std::abs(inner(x, f2)) > 1e-9 * scale) {
    throw GeometryError(ErrorKind::precondition, "dupin_cyclide_canal: x not orthogonal to the plane");
  }
  const double r2 = 1.0 - inner(x, x);
  if (!(r2 > 0.0)) {
    throw GeometryError(ErrorKind::empty_intersection,
                        "dupin_cyclide_canal: <x,x> >= 1, the plane misses de Sitter space");
  }
  const double radius = std::sqrt(r2);
  return CanalPath::from_function(
      [&](double t) -> LorentzVector { return x + radius * (std::cos(t) * f1 + std::sin(t) * f2); },
      samples, kTwoPi);
}

CanalPath minimal_drill(const PeriodicCurve& lambda, const LorentzVector& u, const LorentzVector& v,
                        const LorentzVector& w, int samples) {
  if (lambda.dimension() != 1 || std::abs(lambda.period() - kTwoPi) > 1e-12) {
    throw GeometryError(ErrorKind::precondition, "minimal_drill: lambda must be scalar with period 2 pi");
  }
  constexpr double tol = 1e-9;
  const double su = std::max(1.0, sup_norm(u));
  const bool ok = std::abs(inner(u, u)) <= tol * su * su && sup_norm(u) > tol &&
                  std::abs(inner(v, v) - 1.0) <= tol && std::abs(inner(w, w) - 1.0) <= tol &&
                  std::abs(inner(u, v)) <= tol * su && std::abs(inner(u, w)) <= tol * su &&
                  std::abs(inner(v, w)) <= tol;
  if (!ok) {
    throw GeometryError(ErrorKind::precondition,
                        "minimal_drill: need u null, v and w orthonormal, all pairwise orthogonal");
  }
  if (!(lambda.samples().minCoeff() > 0.0)) {
    throw GeometryError(ErrorKind::precondition, "minimal_drill: lambda must be positive");
  }
  const int n = samples > 0 ? samples : std::max(lambda.sample_count(), 16);
  return CanalPath::from_function(
      [&](double s) -> LorentzVector {
        return lambda.evaluate(s, 0)(0) * u + std::cos(s) * v + std::sin(s) * w;
      },
      n, kTwoPi);
}

const char* to_string(BoundVerdict verdict) {
  switch (verdict) {
    case BoundVerdict::pass: return "pass";
    case BoundVerdict::fail: return "fail";
    case BoundVerdict::not_applicable: return "not_applicable";
  }
  return "unknown";
}

BoundReport verify_2pi_bound(const CanalPath& path, double tol) {
  BoundReport out;
  out.classification = classify(path);
  if (out.classification.verdict == CanalVerdict::not_canal) {
    out.length = std::numeric_limits<double>::quiet_NaN();
    out.margin = out.length;
    return out;
  }
  out.length = length(path);
  out.margin = out.length - kTwoPi;

  const auto& kg = path.grid_curvature();
  if (out.classification.verdict == CanalVerdict::drill && !kg.empty()) {
    // Sign-normalize by the component that dominates the first sample.
    Eigen::Index lead = 0;
    kg.front().cwiseAbs().maxCoeff(&lead);
    auto direction = [lead](const LorentzVector& k) {
      LorentzVector d = k / sup_norm(k);
      return d(lead) < 0.0 ? LorentzVector(-d) : d;
    };
    const LorentzVector first = direction(kg.front());
    double dev = 0.0;
    for (const auto& k : kg) dev = std::max(dev, sup_norm(direction(k) - first));
    out.direction_deviation = dev;
    out.equality_family_detected = dev <= tol;
  }
  if (!out.classification.almost_regular()) return out;
  out.verdict = out.length >= kTwoPi - tol ? BoundVerdict::pass : BoundVerdict::fail;
  return out;
}

CanalPath random_closed_path(std::uint64_t seed, const RandomPathOptions& options) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> log_delta(options.min_log_delta, options.max_log_delta);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int modes = std::max(options.modes, 0);
  const LorentzTransform map = random_lorentz_transform(rng(), 0.3);

  for (;;) {
    const double delta = std::pow(10.0, log_delta(rng));
    const double radius = std::sqrt(1.0 + delta);
    const double amplitude = options.amplitude * std::pow(10.0, -options.amplitude_decades * unit(rng));
    Eigen::Matrix<double, 5, Eigen::Dynamic> ca(5, modes + 1), sa(5, modes + 1);
    for (int m = 0; m <= modes; ++m) {
      for (int i = 0; i < 5; ++i) {
        ca(i, m) = amplitude * normal(rng) / (m + 1);
        sa(i, m) = amplitude * normal(rng) / (m + 1);
      }
    }
    auto raw = [&](double t) {
      LorentzVector p = std::sqrt(delta) * basis_vector(4) +
                        radius * (std::cos(t) * basis_vector(0) + std::sin(t) * basis_vector(1));
      for (int m = 0; m <= modes; ++m) p += ca.col(m) * std::cos(m * t) + sa.col(m) * std::sin(m * t);
      return p;
    };
    bool ok = true;
    for (int j = 0; j < 4 * options.samples && ok; ++j) {
      const LorentzVector p = raw(kTwoPi * j / (4 * options.samples));
      ok = inner(p, p) > 0.05 * p.squaredNorm();
    }
    if (!ok) continue;
    return CanalPath::from_function(
        [&](double t) -> LorentzVector {
          const LorentzVector p = raw(t);
          return map(p / std::sqrt(inner(p, p)));
        },
        options.samples, kTwoPi);
  }
}

std::vector<RandomPathSample> random_almost_regular_paths(std::uint64_t first_seed, int count,
                                                          const RandomPathOptions& options,
                                                          int max_attempts) {
  std::vector<RandomPathSample> out;
  for (int i = 0; i < max_attempts && static_cast<int>(out.size()) < count; ++i) {
    const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(i);
    CanalPath path = random_closed_path(seed, options);
    if (classify(path).almost_regular()) out.push_back({seed, std::move(path)});
  }
  return out;
}

CanalPath nested_sphere_path(int samples) {
  Vec4 m;
  m << 0.0, 0.0, 0.0, -1.0;
  return CanalPath::from_function(
      [&](double t) {
        return sphere_from_center_radius({m, std::numbers::pi / 2 + 0.6 * std::sin(t)}).sigma();
      },
      samples, kTwoPi);
}

}  // namespace desitter
