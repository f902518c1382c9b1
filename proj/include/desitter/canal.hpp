#pragma once

#include "desitter/lorentz.hpp"
#include "desitter/periodic_curve.hpp"
#include "desitter/sphere_model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace desitter {

/// Per-sample causal type counts.
struct CausalCounts {
  int spacelike = 0;
  int timelike = 0;
  int lightlike = 0;
  int zero = 0;

  void add(CausalType type);
  int total() const { return spacelike + timelike + lightlike + zero; }
};

/// Closed path in de Sitter space (a one-parameter family of oriented spheres).
/// Immutable; the dense-grid tangent profile, the geodesic curvature vectors and
/// the arc-length table are computed at construction.
class CanalPath {
 public:
  /// sigma: N x 5 periodic curve. Throws GeometryError(precondition) when
  /// |<sigma,sigma> - 1| > tol on the samples or <sigma,sigma'> is not ~0.
  explicit CanalPath(PeriodicCurve sigma, double tol = 1e-9);
  static CanalPath from_function(const std::function<LorentzVector(double)>& f, int samples,
                                 double period);

  const PeriodicCurve& sigma() const { return sigma_; }
  double period() const { return sigma_.period(); }
  LorentzVector position(double t) const;
  LorentzVector derivative(double t, int order = 1) const;

  /// Dense grid (4N points) used for profiles.
  int grid_size() const { return grid_size_; }
  double grid_parameter(int j) const { return period() * j / grid_size_; }
  const std::vector<LorentzVector>& grid_positions() const { return positions_; }
  const std::vector<LorentzVector>& grid_tangents() const { return tangents_; }
  const CausalCounts& tangent_profile() const { return tangent_profile_; }
  bool spacelike() const { return tangent_profile_.spacelike == tangent_profile_.total(); }
  /// k_g at the grid parameters; empty unless spacelike().
  const std::vector<LorentzVector>& grid_curvature() const { return curvature_; }

  /// Arc length from 0 to t (spectral antiderivative of the speed). Throws
  /// GeometryError(non_spacelike) unless spacelike().
  double arclength_at(double t) const;
  double parameter_at_arclength(double s) const;

  /// Image under an ambient Lorentz transform.
  CanalPath transformed(const LorentzTransform& map) const;

 private:
  void require_spacelike(const char* who) const;

  PeriodicCurve sigma_;
  int grid_size_ = 0;
  std::vector<LorentzVector> positions_;
  std::vector<LorentzVector> tangents_;
  std::vector<LorentzVector> curvature_;
  CausalCounts tangent_profile_;
  std::optional<PeriodicCurve> speed_;
  double total_length_ = 0.0;
};

/// Integral of sqrt<sigma',sigma'> over one period by adaptive Gauss-Kronrod.
/// Throws GeometryError(non_spacelike) when the tangent is not space-like.
double length(const CanalPath& path, double rel_tol = 1e-10);

/// k_g = sigma + sigma-double-dot (arc-length derivatives) at curve parameter t,
/// by the chain rule from the t-derivatives.
LorentzVector geodesic_curvature_at_parameter(const CanalPath& path, double t);
/// Same at arc length s.
LorentzVector geodesic_curvature_vector(const CanalPath& path, double s);

/// Unit-speed reparametrization (period = length), using the Lorentz norm.
PeriodicCurve arclength_path(const CanalPath& path, int samples = 0);

enum class CanalVerdict {
  regular,              // k_g time-like everywhere
  almost_regular,       // <k_g,k_g> <= 0, k_g != 0, neither of the pure cases
  drill,                // k_g light-like and non-zero everywhere
  geodesic,             // k_g = 0 everywhere
  spacelike_curvature,  // k_g space-like everywhere
  not_canal,            // tangent not space-like somewhere
  mixed
};

const char* to_string(CanalVerdict verdict);

struct CanalClassification {
  CausalCounts tangent_type;
  CausalCounts kg_type;
  CanalVerdict verdict = CanalVerdict::mixed;
  double min_tangent_norm2 = 0.0;  // min <sigma',sigma'> / |sigma'|_inf^2
  double min_abs_kg_norm2 = 0.0;   // min |<k_g,k_g>|
  double min_kg_norm2 = 0.0;       // extremes of <k_g,k_g>
  double max_kg_norm2 = 0.0;
  double min_kg_sup = 0.0;         // extremes of |k_g|_inf
  double max_kg_sup = 0.0;

  /// regular, almost_regular or drill: the hypothesis of the length bound.
  bool almost_regular() const;
};

CanalClassification classify(const CanalPath& path, double tol = kDefaultCausalTol);

/// Circle span(sigma(t), sigma'(t))^perp. Throws GeometryError(non_spacelike).
CircleRep characteristic_circle(const CanalPath& path, double t);

/// phi(s) = cos(s + t) sigma(s) - sin(s + t) sigma-dot(s) on the unit-speed
/// path, s in [0, length].
class Involute {
 public:
  Involute(const CanalPath& path, double t_offset);

  double length() const { return unit_.period(); }
  double offset() const { return offset_; }
  LorentzVector value(double s) const;
  /// -sin(s + t)(sigma + sigma-double-dot).
  LorentzVector derivative(double s) const;
  /// Causal types of the derivative at n uniform points of [0, length).
  CausalCounts derivative_profile(int n, double tol = kDefaultCausalTol) const;

 private:
  PeriodicCurve unit_;
  double offset_;
};

Involute involute(const CanalPath& path, double t_offset);

/// Circle x + R(cos t f1 + sin t f2) cut from de Sitter space by the affine plane
/// x + span(h1, h2), R = sqrt(1 - <x,x>). Throws GeometryError(precondition) if
/// span(h1,h2) is not space-like or x is not orthogonal to it, and
/// (empty_intersection) if <x,x> >= 1.
CanalPath dupin_cyclide_canal(const LorentzVector& x, const LorentzVector& h1,
                              const LorentzVector& h2, int samples = 64);

/// sigma(s) = lambda(s) u + cos s v + sin s w. lambda: scalar curve of period
/// 2 pi, positive. u null, v, w orthonormal space-like, all pairwise orthogonal;
/// violations throw GeometryError(precondition).
CanalPath minimal_drill(const PeriodicCurve& lambda, const LorentzVector& u, const LorentzVector& v,
                        const LorentzVector& w, int samples = 0);

enum class BoundVerdict { pass, fail, not_applicable };

const char* to_string(BoundVerdict verdict);

struct BoundReport {
  BoundVerdict verdict = BoundVerdict::not_applicable;
  CanalClassification classification;
  double length = 0.0;  // NaN for paths that are not canals
  double margin = 0.0;  // length - 2 pi
  bool equality_family_detected = false;
  double direction_deviation = 0.0;  // max deviation of k_g/|k_g|_inf from its first value
};

BoundReport verify_2pi_bound(const CanalPath& path, double tol = 1e-6);

struct RandomPathOptions {
  int samples = 128;
  int modes = 3;
  double amplitude = 0.06;          // largest perturbation scale
  double amplitude_decades = 1.5;   // scale drawn log-uniformly below amplitude
  double min_log_delta = -3.0;  // <x,x> = -delta, log10 delta uniform in [min, max]
  double max_log_delta = 0.0;
};

/// Radial projection onto de Sitter space of a random Fourier perturbation of a
/// circle around a time-like center, moved by a random Lorentz transform.
/// Deterministic in the seed; draws with <p,p> <= 0 are redrawn.
CanalPath random_closed_path(std::uint64_t seed, const RandomPathOptions& options = {});

struct RandomPathSample {
  std::uint64_t seed = 0;
  CanalPath path;
};

/// Rejection sampling: seeds first_seed, first_seed + 1, ... are kept while their
/// classification satisfies almost_regular(), until count paths are collected
/// or max_attempts seeds were tried.
std::vector<RandomPathSample> random_almost_regular_paths(std::uint64_t first_seed, int count,
                                                          const RandomPathOptions& options = {},
                                                          int max_attempts = 1000000);

/// Path with time-like tangent: concentric spheres of radius r(t) = pi/2 +
/// 0.6 sin t about one center. Not a canal.
CanalPath nested_sphere_path(int samples = 64);

}  // namespace desitter
