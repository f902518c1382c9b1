#include "desitter/conformal.hpp"

#include "desitter/error.hpp"
#include "desitter/taylor.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace desitter {
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angle between the lines spanned by a and b in euclidean R^5.
double line_angle(const LorentzVector& a, const LorentzVector& b) {
  const LorentzVector ua = a.normalized();
  LorentzVector ub = b.normalized();
  if (ua.dot(ub) < 0.0) ub = -ub;
  return 2.0 * std::asin(std::min(1.0, 0.5 * (ua - ub).norm()));
}

double wrap_parameter(double t, double period) {
  t = std::fmod(t, period);
  return t < 0.0 ? t + period : t;
}

std::vector<double> dedupe(std::vector<double> v, double period, double eps) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double t : v) {
    if (!out.empty() && t - out.back() <= eps) continue;
    out.push_back(t);
  }
  if (out.size() > 1 && out.front() + period - out.back() <= eps) out.pop_back();
  return out;
}
// Continuity test for the orientation: next.sigma is compared with the
// second-order prediction from prev, which stays reliable when the sphere
// turns quickly between grid points.
bool same_side(const SphereJet& prev, const SphereJet& next, double h) {
  const LorentzVector predicted = prev.sigma + h * prev.dsigma + 0.5 * h * h * prev.ddsigma;
  return (next.sigma - predicted).norm() <= (next.sigma + predicted).norm();
}
}  // namespace

double SphereJet::mu() const {
  const LorentzVector e = wedge4(gamma[0], gamma[1], gamma[2], sigma);
  const double q = inner(e, e);
  if (!(q > 0.0)) return 0.0;
  return inner(dsigma, e) / std::sqrt(q);
}

SphereJet SphereJet::flipped() const {
  SphereJet out = *this;
  out.sigma = -sigma;
  out.dsigma = -dsigma;
  out.ddsigma = -ddsigma;
  return out;
}

SphereJet osculating_sphere_jet(const PeriodicCurve& x, double t, double vertex_tol) {
  SphereJet out;
  out.gamma = lift_derivatives(x, t);
  const auto& g = out.gamma;
  const LorentzVector nu = wedge4(g[0], g[1], g[2], g[3]);
  const LorentzVector nu1 = wedge4(g[0], g[1], g[2], g[4]);
  const LorentzVector nu2 = wedge4(g[0], g[1], g[3], g[4]) + wedge4(g[0], g[1], g[2], g[5]);
  TaylorVec<2, 5> jet;
  for (std::size_t i = 0; i < 5; ++i) {
    jet[i].c = {nu(static_cast<Eigen::Index>(i)), nu1(static_cast<Eigen::Index>(i)),
                0.5 * nu2(static_cast<Eigen::Index>(i))};
  }
  Taylor<2> q;
  for (std::size_t i = 0; i < 4; ++i) q += jet[i] * jet[i];
  q -= jet[4] * jet[4];
  out.nu_norm2 = q.value();
  const double scale = sup_norm(nu);
  if (!(out.nu_norm2 > vertex_tol * scale * scale)) {
    throw GeometryError(ErrorKind::vertex, "osculating_sphere_jet: <nu,nu> vanishes (vertex)");
  }
  const Taylor<2> n = sqrt(q);
  for (std::size_t i = 0; i < 5; ++i) {
    const Taylor<2> s = jet[i] / n;
    const auto k = static_cast<Eigen::Index>(i);
    out.sigma(k) = s.derivative(0);
    out.dsigma(k) = s.derivative(1);
    out.ddsigma(k) = s.derivative(2);
  }
  return out;
}

OsculatingCanal osculating_canal(const PeriodicCurve& x, int grid_size) {
  const int m = grid_size > 0 ? grid_size : 4 * x.sample_count();
  const FrenetData frenet = frenet_apparatus(x, m);
  if (!detect_vertices(frenet).vertex_free) {
    throw GeometryError(ErrorKind::vertex, "osculating_canal: curve has vertices");
  }
  OsculatingCanal oc;
  oc.curve = std::make_shared<const PeriodicCurve>(x);
  oc.t.resize(static_cast<std::size_t>(m));
  oc.jets.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    const double t = x.period() * j / m;
    oc.t[static_cast<std::size_t>(j)] = t;
    SphereJet jet = osculating_sphere_jet(x, t);
    if (j > 0 && !same_side(oc.jets.back(), jet, x.period() / m)) jet = jet.flipped();
    oc.jets.push_back(std::move(jet));
  }
  oc.closure_pairing = inner(oc.jets.back().sigma, oc.jets.front().sigma);
  oc.orientation_coherent = same_side(oc.jets.back(), oc.jets.front(), x.period() / m);
  if (!oc.orientation_coherent) {
    throw GeometryError(ErrorKind::orientation_incoherent,
                        "osculating_canal: continuation closes with sigma(L) = -sigma(0)");
  }
  Eigen::MatrixXd samples(m, 5);
  for (int j = 0; j < m; ++j) samples.row(j) = oc.jets[static_cast<std::size_t>(j)].sigma.transpose();
  try {
    oc.path.emplace(PeriodicCurve(std::move(samples), x.period()));
  } catch (const GeometryError&) {
    // sigma not resolved by its samples; jets remain available
  }
  oc.spherical_points = detect_spherical_points(oc);
  return oc;
}

DrillReport drill_check(const OsculatingCanal& oc, double tol, double angle_tol, double exclusion) {
  DrillReport out;
  double max_speed = 0.0;
  for (const auto& jet : oc.jets) max_speed = std::max(max_speed, sup_norm(jet.dsigma));
  out.min_kg_sup = std::numeric_limits<double>::infinity();
  for (const auto& jet : oc.jets) {
    if (!(sup_norm(jet.dsigma) > exclusion * max_speed)) continue;
    const double v2 = inner(jet.dsigma, jet.dsigma);
    if (!(v2 > 0.0)) continue;
    const LorentzVector kg =
        jet.sigma + (jet.ddsigma - (inner(jet.ddsigma, jet.dsigma) / v2) * jet.dsigma) / v2;
    const double s = sup_norm(kg);
    ++out.tested;
    out.min_kg_sup = std::min(out.min_kg_sup, s);
    if (s > 0.0) {
      out.max_lightlike_ratio = std::max(out.max_lightlike_ratio, std::abs(inner(kg, kg)) / (s * s));
      out.max_angle = std::max(out.max_angle, line_angle(kg, jet.gamma[0]));
    }
  }
  if (out.tested == 0) {
    out.min_kg_sup = 0.0;
    return out;
  }
  out.lightlike = out.max_lightlike_ratio < tol;
  out.nonzero = out.min_kg_sup > 1e-12;
  out.aligned = out.max_angle < angle_tol;
  return out;
}

std::vector<double> detect_spherical_points(const OsculatingCanal& oc, double tol) {
  const int m = oc.size();
  const PeriodicCurve& x = *oc.curve;
  const double period = x.period();
  std::vector<double> mu(static_cast<std::size_t>(m));
  double max_mu = 0.0;
  double max_sigma = 0.0;
  for (int j = 0; j < m; ++j) {
    mu[static_cast<std::size_t>(j)] = oc.jets[static_cast<std::size_t>(j)].mu();
    max_mu = std::max(max_mu, std::abs(mu[static_cast<std::size_t>(j)]));
    max_sigma = std::max(max_sigma, sup_norm(oc.jets[static_cast<std::size_t>(j)].sigma));
  }
  if (max_mu <= 1e-9 * max_sigma * kTwoPi / period) return oc.t;

  auto mu_at = [&x](double t) { return osculating_sphere_jet(x, t).mu(); };
  std::vector<double> roots;
  const double dt = period / m;
  for (int j = 0; j < m; ++j) {
    const double a = mu[static_cast<std::size_t>(j)];
    const double b = mu[static_cast<std::size_t>((j + 1) % m)];
    const double ta = oc.t[static_cast<std::size_t>(j)];
    if (a == 0.0) {
      roots.push_back(ta);
    } else if (a * b < 0.0) {
      boost::uintmax_t iters = 100;
      const auto bracket = boost::math::tools::toms748_solve(
          mu_at, ta, ta + dt, a, b, boost::math::tools::eps_tolerance<double>(50), iters);
      roots.push_back(wrap_parameter(0.5 * (bracket.first + bracket.second), period));
    } else {
      // Touching zero: local minimum of |mu| without a sign change.
      const double prev = std::abs(mu[static_cast<std::size_t>((j + m - 1) % m)]);
      if (std::abs(a) <= prev && std::abs(a) <= std::abs(b) && std::abs(a) <= 10.0 * tol * max_mu) {
        const auto best = boost::math::tools::brent_find_minima(
            [&](double t) { return std::abs(mu_at(t)); }, ta - dt, ta + dt, 50);
        if (best.second <= tol * max_mu) roots.push_back(wrap_parameter(best.first, period));
      }
    }
  }
  return dedupe(std::move(roots), period, 1e-9 * period);
}

std::vector<SphericalPointCheck> cross_check_spherical_points(const PeriodicCurve& x,
                                                              const std::vector<double>& points,
                                                              double tol) {
  std::vector<SphericalPointCheck> out;
  for (double t : points) {
    const SphereJet jet = osculating_sphere_jet(x, t);
    out.push_back({t, contact_order(jet.gamma, SpherePoint::normalized(jet.sigma), 5, tol)});
  }
  return out;
}

double conformal_torsion(double k, double dk, double ddk, double tau, double dtau,
                         const InvariantOptions& options) {
  const double g = dk * dk + k * k * tau * tau;
  const double last = options.mutate_sign ? k * ddk * tau : -k * ddk * tau;
  const double num = 2.0 * dk * dk * tau + k * k * tau * tau * tau + k * dk * dtau + last;
  return num / std::pow(g, 1.25);
}

ConformalInvariants conformal_invariants(const PeriodicCurve& x, int grid_size,
                                         const InvariantOptions& options) {
  ConformalInvariants out;
  out.frenet = frenet_apparatus(x, grid_size);
  const FrenetData& f = out.frenet;
  if (!detect_vertices(f).vertex_free) {
    throw GeometryError(ErrorKind::vertex, "conformal_invariants: curve has vertices");
  }
  const int m = f.size();
  out.dt_du.resize(m);
  out.T.resize(m);
  out.omega.resize(m);
  for (int j = 0; j < m; ++j) {
    out.dt_du(j) = std::pow(f.g(j), 0.25);
    out.T(j) = conformal_torsion(f.k(j), f.dk(j), f.ddk(j), f.tau(j), f.dtau(j), options);
    out.omega(j) = std::abs(out.T(j)) * out.dt_du(j);
    out.conformal_length += out.dt_du(j) * f.weight(j);
    out.integral_T += out.T(j) * out.dt_du(j) * f.weight(j);
    out.integral_abs_T += out.omega(j) * f.weight(j);
  }
  // tau du peaks sharply near almost-inflections; the periodic trapezoid sum
  // is refined by doubling until it settles.
  auto torsion_sum = [&x](int grid) {
    const Eigen::MatrixXd d1 = x.on_grid(1, grid), d2 = x.on_grid(2, grid), d3 = x.on_grid(3, grid);
    double sum = 0.0;
    for (int j = 0; j < grid; ++j) {
      const Eigen::Vector3d a = d1.row(j).transpose(), b = d2.row(j).transpose();
      const Eigen::Vector3d c = a.cross(b);
      sum += c.dot(d3.row(j).transpose()) / c.squaredNorm() * a.norm();
    }
    return sum * x.period() / grid;
  };
  int grid = std::max(m, 1024);
  double previous = torsion_sum(grid);
  for (; grid < (1 << 20); ) {
    grid *= 2;
    const double current = torsion_sum(grid);
    const bool settled = std::abs(current - previous) <= 1e-11 * std::max(1.0, std::abs(current));
    previous = current;
    if (settled) break;
  }
  out.total_torsion = previous;
  return out;
}

double congruence_residual(double a) { return std::abs(a - kTwoPi * std::round(a / kTwoPi)); }

CorollaryReport corollary_check(const PeriodicCurve& x, double tol, double sign_tol,
                                double congruence_tol, int grid_size,
                                const InvariantOptions& options) {
  CorollaryReport out;
  const ConformalInvariants inv = conformal_invariants(x, grid_size, options);
  out.integral_omega = inv.integral_abs_T;
  out.integral_T = inv.integral_T;
  out.integral_abs_T = inv.integral_abs_T;
  out.total_torsion = inv.total_torsion;
  const double diff = inv.integral_T - inv.total_torsion;
  out.congruence_residual = congruence_residual(diff);
  out.winding = std::lround(diff / kTwoPi);
  out.sign_residual = inv.integral_abs_T - std::abs(inv.integral_T);
  out.spherical_points = osculating_canal(x, grid_size).spherical_points;

  out.bound_holds = out.integral_abs_T >= kTwoPi - tol;
  out.sign_constant = out.sign_residual <= sign_tol;
  out.congruent = out.congruence_residual <= congruence_tol;
  if (!out.spherical_points.empty()) return out;
  out.verdict = out.bound_holds && out.sign_constant && out.congruent ? BoundVerdict::pass
                                                                       : BoundVerdict::fail;
  return out;
}

Eigen::VectorXd omega_via_spheres(const PeriodicCurve& x, int grid_size, double torsion_floor) {
  const FrenetData f = frenet_apparatus(x, grid_size);
  const int m = f.size();
  Eigen::VectorXd out(m);
  auto sphere = [&x](double t) {
    const EuclideanSphere s = osculating_sphere(frenet_at(x, t), 0.0);
    Eigen::Vector4d v;
    v << s.center, s.radius;
    return v;
  };
  for (int j = 0; j < m; ++j) {
    if (!(std::abs(f.tau(j)) >= torsion_floor * f.k(j))) {
      out(j) = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const FrenetPoint p = f.point(j);
    const double scale = std::max({p.k, std::abs(p.tau), std::sqrt(std::abs(p.dk)), std::cbrt(std::abs(p.ddk))});
    const double h = 2e-3 / (scale * p.speed);
    const double t = f.t(j);
    const Eigen::Vector4d d =
        (sphere(t - 2 * h) - 8.0 * sphere(t - h) + 8.0 * sphere(t + h) - sphere(t + 2 * h)) / (12.0 * h);
    const Eigen::Vector4d s0 = sphere(t);
    const double radicand = d.head<3>().squaredNorm() - d(3) * d(3);
    out(j) = radicand > 0.0 ? std::sqrt(radicand) / s0(3) / p.speed : 0.0;
  }
  return out;
}

Eigen::VectorXd omega_via_canal(const OsculatingCanal& oc) {
  Eigen::VectorXd out(oc.size());
  for (int j = 0; j < oc.size(); ++j) {
    const auto& jet = oc.jets[static_cast<std::size_t>(j)];
    out(j) = std::abs(jet.mu()) / oc.curve->evaluate(oc.t[static_cast<std::size_t>(j)], 1).norm();
  }
  return out;
}

PeriodicCurve constant_angle_cyclide_curve(double R, double r, int p, int q, int samples) {
  if (!(R > r && r > 0.0)) {
    throw GeometryError(ErrorKind::precondition, "constant_angle_cyclide_curve: need R > r > 0");
  }
  if (p == 0 || q == 0 || std::gcd(p, q) != 1) {
    throw GeometryError(ErrorKind::precondition,
                        "constant_angle_cyclide_curve: need p, q nonzero and coprime");
  }
  const double kk = std::sqrt((R + r) / (R - r));
  return PeriodicCurve::from_function(
      [=](double s) {
        // Isothermal coordinate w runs linearly; tan(v/2) = kk tan(w) inverted smoothly.
        const double phi = p * s;
        const double w = 0.5 * q * s;
        const double sw = std::sin(w), cw = std::cos(w);
        const double v = 2.0 * w + 2.0 * std::atan((kk - 1.0) * sw * cw / (cw * cw + kk * sw * sw));
        const double rho = R + r * std::cos(v);
        Eigen::VectorXd out(3);
        out << rho * std::cos(phi), rho * std::sin(phi), r * std::sin(v);
        return out;
      },
      samples, kTwoPi);
}

CyclideCurveReport cyclide_curve_report(double R, double r, int p, int q, int samples) {
  CyclideCurveReport out;
  out.R = R;
  out.r = r;
  out.p = p;
  out.q = q;
  const PeriodicCurve x = constant_angle_cyclide_curve(R, r, p, q, samples);
  try {
    out.vertices = detect_vertices(frenet_apparatus(x));
  } catch (const GeometryError&) {
    out.regular = false;
    return out;
  }
  if (out.vertices.vertex_free) out.spherical_points = osculating_canal(x).spherical_points;
  return out;
}

PeriodicCurve mobius_image(const PeriodicCurve& x, const LorentzTransform& map, int samples,
                           double pole_tol) {
  if (samples <= 0) {
    // Double until the image is resolved.
    for (int n = std::max(x.sample_count(), 128);; n *= 2) {
      PeriodicCurve y = mobius_image(x, map, n, pole_tol);
      if (y.spectral_tail() <= 1e-9 || n >= 8192) return y;
    }
  }
  return PeriodicCurve::from_function(
      [&](double t) {
        const LorentzVector g = map(lift_point(x.evaluate(t, 0)));
        const S3Point p = S3Point::from_lightcone(g, 1e-8);
        const auto y = stereographic_to_r3(p, pole_tol);
        if (!y) throw GeometryError(ErrorKind::precondition, "mobius_image: curve passes near infinity");
        return Eigen::VectorXd(*y);
      },
      samples, x.period());
}

std::array<Vec3, 6> mobius_image_derivatives(const PeriodicCurve& x, const LorentzTransform& map,
                                             double t) {
  std::array<LorentzVector, 6> lifted = lift_derivatives(x, t);
  for (LorentzVector& v : lifted) v = map(v);
  const auto g = taylor_from_derivatives<5, 5>(std::span<const LorentzVector>(lifted));
  // Inverse of the lift: y = (g1, g2, g3) / (g5 - g4).
  const Taylor<5> den = g[4] - g[3];
  TaylorVec<5, 3> y;
  for (int i = 0; i < 3; ++i) y[i] = g[i] / den;
  std::array<Vec3, 6> out;
  for (int j = 0; j < 6; ++j) out[static_cast<std::size_t>(j)] = derivative_of(y, j);
  return out;
}

CurvatureTube curvature_tube_mesh(const OsculatingCanal& oc, int nt, int ntheta) {
  if (!oc.path) {
    throw GeometryError(ErrorKind::precondition, "curvature_tube_mesh: osculating canal not resolved");
  }
  const PeriodicCurve& x = *oc.curve;
  CurvatureTube out;
  out.mesh = envelope_mesh(*oc.path, nt, ntheta, [&x](double t) { return lift_point(x.evaluate(t, 0)); });
  for (std::size_t i = 0; i < out.mesh.vertex_grid.size(); ++i) {
    if (out.mesh.vertex_grid[i][1] == 0) out.singular_vertices.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace desitter
