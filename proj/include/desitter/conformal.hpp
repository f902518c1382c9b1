#pragma once

#include "desitter/canal.hpp"
#include "desitter/curves.hpp"
#include "desitter/mesh.hpp"

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace desitter {

/// Osculating sphere of a space curve and its first two parameter derivatives,
/// from the exact lift jets: nu = gamma ^ gamma' ^ gamma'' ^ gamma''',
/// sigma = nu / sqrt<nu,nu> (sign of nu, not yet oriented).
struct SphereJet {
  std::array<LorentzVector, 6> gamma;  // lift derivatives 0..5
  LorentzVector sigma;
  LorentzVector dsigma;
  LorentzVector ddsigma;
  double nu_norm2 = 0.0;  // <nu,nu>, positive away from vertices

  /// sigma' = mu e with e the unit space-like normal of span(gamma, gamma',
  /// gamma'', sigma); mu does not depend on the orientation of sigma.
  double mu() const;
  SphereJet flipped() const;
};

/// Throws GeometryError(vertex) when <nu,nu> <= vertex_tol |nu|_inf^2.
SphereJet osculating_sphere_jet(const PeriodicCurve& x, double t, double vertex_tol = 1e-14);

struct OsculatingCanal {
  std::shared_ptr<const PeriodicCurve> curve;
  std::vector<double> t;        // grid parameters
  std::vector<SphereJet> jets;  // coherently oriented
  std::optional<CanalPath> path;
  bool orientation_coherent = true;
  double closure_pairing = 1.0;  // <sigma(last), sigma(first)>
  std::vector<double> spherical_points;

  int size() const { return static_cast<int>(t.size()); }
};

/// Osculating-sphere path of a vertex-free closed curve on grid_size uniform
/// parameters (0 = four times the sample count). Orientation is propagated by
/// continuity; a closure with sigma(L) = -sigma(0) throws
/// GeometryError(orientation_incoherent). Throws (vertex) for curves with
/// vertices. spherical_points is filled by detect_spherical_points.
OsculatingCanal osculating_canal(const PeriodicCurve& x, int grid_size = 0);

struct DrillReport {
  int tested = 0;                 // grid points away from spherical points
  double max_lightlike_ratio = 0.0;  // max |<k_g,k_g>| / |k_g|_inf^2
  double min_kg_sup = 0.0;
  double max_angle = 0.0;         // between span(k_g) and span(gamma), radians
  bool lightlike = false;
  bool nonzero = false;
  bool aligned = false;

  bool pass() const { return lightlike && nonzero && aligned; }
};

/// k_g of the osculating canal at each grid point with |sigma'| above
/// exclusion * max |sigma'|, checked for being light-like (tol) and spanning the
/// curve point (angle_tol).
DrillReport drill_check(const OsculatingCanal& oc, double tol = 1e-6, double angle_tol = 1e-6,
                        double exclusion = 1e-3);

/// Zeros of sigma' (roots of mu, refined by TOMS 748, plus near-double roots
/// with |mu| <= tol max|mu|). When sigma' vanishes on the whole grid every grid
/// parameter is returned.
std::vector<double> detect_spherical_points(const OsculatingCanal& oc, double tol = 1e-6);

struct SphericalPointCheck {
  double t = 0.0;
  int contact_order = 0;  // from the light-cone criterion, kmax = 5
};
/// Contact order of the osculating sphere at each reported point.
std::vector<SphericalPointCheck> cross_check_spherical_points(const PeriodicCurve& x,
                                                              const std::vector<double>& points,
                                                              double tol = 1e-8);

struct InvariantOptions {
  /// Negates the k k'' tau term of the numerator of T. Only for the mutation
  /// test of the verification suite.
  bool mutate_sign = false;
};

/// Per-sample conformal data on the FrenetData grid; densities are per unit
/// euclidean arc length.
struct ConformalInvariants {
  FrenetData frenet;
  Eigen::VectorXd dt_du;          // (k'^2 + k^2 tau^2)^(1/4)
  Eigen::VectorXd T;              // conformal torsion
  Eigen::VectorXd omega;          // |T| dt/du
  double conformal_length = 0.0;  // integral of dt
  double integral_T = 0.0;
  double integral_abs_T = 0.0;
  double total_torsion = 0.0;     // integral of tau du
};

/// Throws GeometryError(vertex) for curves with vertices.
ConformalInvariants conformal_invariants(const PeriodicCurve& x, int grid_size = 0,
                                         const InvariantOptions& options = {});

/// (2 k'^2 tau + k^2 tau^3 + k k' tau' - k k'' tau) / (k'^2 + k^2 tau^2)^(5/4).
double conformal_torsion(double k, double dk, double ddk, double tau, double dtau,
                         const InvariantOptions& options = {});

/// Distance from a / (2 pi) to the nearest integer, times 2 pi.
double congruence_residual(double a);

struct CorollaryReport {
  double integral_omega = 0.0;
  double integral_T = 0.0;
  double integral_abs_T = 0.0;
  double total_torsion = 0.0;
  double congruence_residual = 0.0;  // (int T dt - int tau du) modulo 2 pi
  long winding = 0;                  // nearest integer of the difference / 2 pi
  double sign_residual = 0.0;        // int |T| dt - |int T dt|
  std::vector<double> spherical_points;
  BoundVerdict verdict = BoundVerdict::not_applicable;
  bool bound_holds = false;
  bool sign_constant = false;
  bool congruent = false;
};

/// Checks int |T| dt >= 2 pi - tol, |int T dt| = int |T| dt (to sign_tol) and
/// the congruence modulo 2 pi (to congruence_tol). Curves with spherical
/// points are not_applicable, with values still reported.
CorollaryReport corollary_check(const PeriodicCurve& x, double tol = 1e-6, double sign_tol = 1e-8,
                                double congruence_tol = 1e-4, int grid_size = 0,
                                const InvariantOptions& options = {});

/// Omega density per unit arc length from the euclidean osculating spheres,
/// sqrt(|m'|^2 - r'^2) / r, with m', r' by a five-point stencil in the curve
/// parameter. Entries where |tau| < torsion_floor * k (center formula
/// singular) are NaN; a negative radicand (round-off on spherical arcs) gives 0.
Eigen::VectorXd omega_via_spheres(const PeriodicCurve& x, int grid_size = 0,
                                  double torsion_floor = 0.05);

/// ||sigma'|| / |x'| at the grid parameters of the osculating canal.
Eigen::VectorXd omega_via_canal(const OsculatingCanal& oc);

/// Loxodrome of the revolution torus ((R + r cos v) cos phi, (R + r cos v) sin phi,
/// r sin v): a straight line in isothermal coordinates winding p times along
/// phi and q times along v, hence at a constant angle to the meridian circles.
/// Throws GeometryError(precondition) unless R > r > 0, p, q != 0 and gcd = 1.
PeriodicCurve constant_angle_cyclide_curve(double R, double r, int p, int q, int samples = 256);

struct CyclideCurveReport {
  double R = 0.0, r = 0.0;
  int p = 0, q = 0;
  bool regular = true;  // false when the Frenet frame fails (inflection)
  VertexReport vertices;
  std::vector<double> spherical_points;
  bool usable() const { return regular && vertices.vertex_free && spherical_points.empty(); }
};

CyclideCurveReport cyclide_curve_report(double R, double r, int p, int q, int samples = 256);

/// Image of a space curve under the Moebius map induced by a Lorentz transform,
/// resampled at `samples` points; samples <= 0 doubles the count (from 128)
/// until the spectral tail is below 1e-9, at most 8192. Throws GeometryError(precondition) when the
/// image passes within pole_tol of the point at infinity.
PeriodicCurve mobius_image(const PeriodicCurve& x, const LorentzTransform& map, int samples = 0,
                           double pole_tol = 1e-3);

/// Exact derivatives 0..5 at t of the Moebius image of x (lift, map, project),
/// without resampling. Feed to frenet_from_derivatives for pointwise invariants.
std::array<Vec3, 6> mobius_image_derivatives(const PeriodicCurve& x, const LorentzTransform& map,
                                             double t);

struct CurvatureTube {
  TriMesh mesh;
  std::vector<int> singular_vertices;  // column-0 vertices, which lie on the curve
};

/// Envelope of the osculating spheres, with each characteristic circle (the
/// osculating circle) anchored at its point of the curve.
CurvatureTube curvature_tube_mesh(const OsculatingCanal& oc, int nt, int ntheta);

}  // namespace desitter
