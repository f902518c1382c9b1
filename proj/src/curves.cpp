#include "desitter/curves.hpp"

#include "desitter/error.hpp"
#include "desitter/taylor.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace desitter {
namespace {

template <int K, std::size_t D>
TaylorVec<K, D> truncate_vec(const auto& v) {
  TaylorVec<K, D> out;
  for (std::size_t i = 0; i < D; ++i) out[i] = v[i].template truncate<K>();
  return out;
}

std::array<Vec3, 6> derivatives_at(const PeriodicCurve& curve, double t) {
  if (curve.dimension() != 3) {
    throw GeometryError(ErrorKind::precondition, "space curve must live in R^3");
  }
  std::array<Vec3, 6> d;
  for (int j = 0; j < 6; ++j) d[static_cast<std::size_t>(j)] = curve.evaluate(t, j);
  return d;
}

PeriodicCurve speed_curve(const Eigen::VectorXd& speed, double period) {
  return PeriodicCurve(Eigen::MatrixXd(speed), period);
}

}  // namespace

PeriodicCurve curve_from_samples(const Eigen::MatrixXd& points, double period) {
  return PeriodicCurve(points, period);
}

FrenetPoint frenet_from_derivatives(std::span<const Vec3> derivs) {
  if (derivs.size() < 6) {
    throw GeometryError(ErrorKind::precondition, "frenet_from_derivatives: need derivatives 0..5");
  }
  const auto x = taylor_from_derivatives<5, 3>(derivs);
  const auto a5 = differentiate(x);
  const auto b5 = differentiate(a5);
  const auto c5 = differentiate(b5);
  const auto a = truncate_vec<2, 3>(a5);
  const auto b = truncate_vec<2, 3>(b5);
  const auto c = c5;

  const auto w = cross(a, b);
  const Taylor<2> w2 = dot(w, w);
  const Taylor<2> v = sqrt(dot(a, a));
  const Taylor<2> k = sqrt(w2) / (v * v * v);
  const Taylor<2> tau = dot(w, c) / w2;

  FrenetPoint p;
  p.position = derivs[0];
  p.speed = v.value();
  p.k = k.value();
  p.tau = tau.value();
  const double vt = v.derivative(1);
  p.dk = k.derivative(1) / p.speed;
  p.ddk = (k.derivative(2) - p.dk * vt) / (p.speed * p.speed);
  p.dtau = tau.derivative(1) / p.speed;

  p.T = derivs[1] / p.speed;
  const Vec3 wv(w[0].value(), w[1].value(), w[2].value());
  p.B = wv / wv.norm();
  p.N = p.B.cross(p.T);
  return p;
}

FrenetPoint frenet_at(const PeriodicCurve& curve, double t) {
  const auto d = derivatives_at(curve, t);
  return frenet_from_derivatives(d);
}

FrenetPoint FrenetData::point(int j) const {
  FrenetPoint p;
  p.position = position.row(j).transpose();
  p.T = T.row(j).transpose();
  p.N = N.row(j).transpose();
  p.B = B.row(j).transpose();
  p.speed = speed(j);
  p.k = k(j);
  p.tau = tau(j);
  p.dk = dk(j);
  p.ddk = ddk(j);
  p.dtau = dtau(j);
  return p;
}

FrenetData frenet_apparatus(const PeriodicCurve& curve, int grid_size) {
  if (curve.dimension() != 3) {
    throw GeometryError(ErrorKind::precondition, "frenet_apparatus: curve must live in R^3");
  }
  const int m = grid_size > 0 ? grid_size : curve.sample_count();
  std::array<Eigen::MatrixXd, 6> grids;
  for (int j = 0; j < 6; ++j) grids[static_cast<std::size_t>(j)] = curve.on_grid(j, m);

  FrenetData f;
  f.curve = std::make_shared<const PeriodicCurve>(curve);
  f.t.resize(m);
  f.speed = grids[1].rowwise().norm();
  const double max_speed = f.speed.maxCoeff();
  if (!(f.speed.minCoeff() > 1e-8 * max_speed)) {
    throw GeometryError(ErrorKind::irregular_curve, "frenet_apparatus: curve speed vanishes");
  }

  f.k.resize(m);
  f.tau.resize(m);
  f.dk.resize(m);
  f.ddk.resize(m);
  f.dtau.resize(m);
  f.position = grids[0];
  f.T.resize(m, 3);
  f.N.resize(m, 3);
  f.B.resize(m, 3);
  std::array<Vec3, 6> d;
  for (int i = 0; i < m; ++i) {
    f.t(i) = curve.period() * i / m;
    for (int j = 0; j < 6; ++j) d[static_cast<std::size_t>(j)] = grids[static_cast<std::size_t>(j)].row(i).transpose();
    // Curvature first: the torsion formula divides by |x' x x''|^2.
    const double kk = d[1].cross(d[2]).norm() / std::pow(f.speed(i), 3);
    f.k(i) = kk;
    if (!(kk > 0.0)) continue;
    const FrenetPoint p = frenet_from_derivatives(d);
    f.tau(i) = p.tau;
    f.dk(i) = p.dk;
    f.ddk(i) = p.ddk;
    f.dtau(i) = p.dtau;
    f.T.row(i) = p.T.transpose();
    f.N.row(i) = p.N.transpose();
    f.B.row(i) = p.B.transpose();
  }
  if (!(f.k.minCoeff() >= 1e-6 * f.k.maxCoeff())) {
    throw GeometryError(ErrorKind::inflection,
                        "frenet_apparatus: curvature vanishes (min k = " + std::to_string(f.k.minCoeff()) +
                            ")");
  }

  const PeriodicCurve s = speed_curve(f.speed, curve.period());
  f.u.resize(m);
  for (int i = 0; i < m; ++i) f.u(i) = s.integral(f.t(i))(0);
  f.length = s.integral_over_period()(0);
  f.weight = f.speed * (curve.period() / m);
  return f;
}

double parameter_at_arclength(const FrenetData& f, double u) {
  if (!f.curve) throw GeometryError(ErrorKind::precondition, "FrenetData without curve");
  double target = std::fmod(u, f.length);
  if (target < 0.0) target += f.length;
  const PeriodicCurve s = speed_curve(f.speed, f.curve->period());
  const auto* it = std::upper_bound(f.u.data(), f.u.data() + f.u.size(), target);
  const auto j = static_cast<int>(it - f.u.data()) - 1;
  const double dt = f.curve->period() / f.size();
  double t = f.t(j) + (target - f.u(j)) / f.speed(j);
  for (int iter = 0; iter < 60; ++iter) {
    const double step = (s.integral(t)(0) - target) / s.evaluate(t)(0);
    t -= step;
    if (std::abs(step) <= 1e-15 * f.curve->period()) break;
  }
  return std::clamp(t, f.t(j) - dt, f.t(j) + 2 * dt);
}

VertexReport detect_vertices(const FrenetData& f, double tol) {
  const int m = f.size();
  VertexReport r;
  // Dimensionless g / k^4: a vertex criterion that is local and scale free.
  Eigen::VectorXd ratio(m);
  for (int j = 0; j < m; ++j) ratio(j) = f.g(j) / std::pow(f.k(j), 4);
  Eigen::Index jmin = 0;
  r.margin = ratio.minCoeff(&jmin);
  r.min_g = f.g(static_cast<int>(jmin));
  r.vertex_free = r.margin > tol;
  if (r.vertex_free) return r;

  std::vector<bool> below(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) below[static_cast<std::size_t>(j)] = ratio(j) <= tol;
  if (std::all_of(below.begin(), below.end(), [](bool b) { return b; })) {
    r.parameters.assign(f.t.data(), f.t.data() + m);
    return r;
  }

  auto idx = [m](int j) { return static_cast<Eigen::Index>(((j % m) + m) % m); };
  // Runs of at least three sub-threshold points are plateaus: report them whole.
  std::vector<bool> plateau(static_cast<std::size_t>(m), false);
  for (int j = 0; j < m; ++j) {
    if (below[static_cast<std::size_t>(idx(j - 1))] && below[static_cast<std::size_t>(j)] &&
        below[static_cast<std::size_t>(idx(j + 1))]) {
      plateau[static_cast<std::size_t>(idx(j - 1))] = plateau[static_cast<std::size_t>(j)] =
          plateau[static_cast<std::size_t>(idx(j + 1))] = true;
    }
  }
  const double period = f.curve ? f.curve->period() : f.t(m - 1) * m / (m - 1);
  const double dt = period / m;
  for (int j = 0; j < m; ++j) {
    if (plateau[static_cast<std::size_t>(j)]) {
      r.parameters.push_back(f.t(j));
      continue;
    }
    if (!(ratio(j) <= ratio(idx(j - 1)) && ratio(j) < ratio(idx(j + 1)))) continue;
    double t_best = f.t(j);
    double best = ratio(j);
    if (f.curve) {
      const auto obj = [&](double t) {
        const FrenetPoint p = frenet_at(*f.curve, t);
        return p.g() / std::pow(p.k, 4);
      };
      const auto res = boost::math::tools::brent_find_minima(obj, f.t(j) - dt, f.t(j) + dt, 40);
      if (res.second < best) {
        t_best = res.first;
        best = res.second;
      }
    }
    if (best <= tol) {
      t_best = std::fmod(t_best, period);
      if (t_best < 0.0) t_best += period;
      r.parameters.push_back(t_best);
    }
  }
  std::sort(r.parameters.begin(), r.parameters.end());
  return r;
}

EuclideanSphere osculating_sphere(const FrenetPoint& p, double vertex_tol) {
  if (!(p.k > 0.0)) throw GeometryError(ErrorKind::inflection, "osculating_sphere: zero curvature");
  const double k4 = std::pow(p.k, 4);
  if (!(p.g() > vertex_tol * k4)) {
    throw GeometryError(ErrorKind::vertex, "osculating_sphere: point is a vertex");
  }
  if (!(std::abs(p.tau) > vertex_tol * p.k)) {
    throw GeometryError(ErrorKind::zero_torsion,
                        "osculating_sphere: torsion vanishes, use the light-cone route");
  }
  EuclideanSphere s;
  const double offset = p.dk / (p.k * p.k * p.tau);
  s.center = p.position + p.N / p.k - offset * p.B;
  s.radius = std::sqrt(1.0 / (p.k * p.k) + offset * offset);
  s.orientation = 1;
  return s;
}

EuclideanSphere osculating_sphere(const PeriodicCurve& x, double t, double vertex_tol) {
  return osculating_sphere(frenet_at(x, t), vertex_tol);
}

EuclideanSphere osculating_sphere(const FrenetData& f, const PeriodicCurve& x, double u,
                                  double vertex_tol) {
  return osculating_sphere(x, parameter_at_arclength(f, u), vertex_tol);
}

Circle3 osculating_circle(const FrenetPoint& p) {
  if (!(p.k > 0.0)) throw GeometryError(ErrorKind::inflection, "osculating_circle: zero curvature");
  return Circle3{p.position + p.N / p.k, p.B, 1.0 / p.k};
}

Line3 tangent_line(const FrenetPoint& p) { return Line3{p.position, p.T}; }

double distance_to(const ContactTarget& target, const Vec3& x) {
  struct Visitor {
    const Vec3& x;
    double operator()(const EuclideanSphere& s) const { return std::abs((x - s.center).norm() - s.radius); }
    double operator()(const Circle3& c) const {
      const Vec3 n = c.normal.normalized();
      const Vec3 v = x - c.center;
      const double z = v.dot(n);
      const double planar = (v - z * n).norm();
      return std::hypot(planar - c.radius, z);
    }
    double operator()(const Line3& l) const {
      return (x - l.point).cross(l.direction.normalized()).norm();
    }
  };
  return std::visit(Visitor{x}, target);
}

ContactEstimate bouquet_contact_oracle(const std::function<Vec3(double)>& x, double t, double step,
                                       const ContactTarget& target) {
  const Vec3 x0 = x(t);
  double size = x0.norm();
  if (const auto* s = std::get_if<EuclideanSphere>(&target)) size += s->center.norm() + s->radius;
  if (const auto* c = std::get_if<Circle3>(&target)) size += c->center.norm() + c->radius;
  const double floor = 1e-12 * std::max(1.0, size);

  std::vector<double> slopes;
  for (int side : {1, -1}) {
    std::vector<double> d;
    for (int j = 0; j <= 16; ++j) {
      const double h = side * step * std::ldexp(1.0, -j);
      const double dist = distance_to(target, x(t + h));
      if (dist <= floor) break;
      d.push_back(dist);
    }
    std::vector<double> local;
    for (std::size_t j = 0; j + 1 < d.size(); ++j) local.push_back(std::log2(d[j] / d[j + 1]));
    const std::size_t keep = std::min<std::size_t>(3, local.size());
    slopes.insert(slopes.end(), local.end() - static_cast<std::ptrdiff_t>(keep), local.end());
  }
  ContactEstimate est;
  if (slopes.empty()) {
    // Distance below roundoff at every step: contact beyond what can be measured.
    est.order = std::numeric_limits<int>::max();
    est.slope = std::numeric_limits<double>::infinity();
    return est;
  }
  double sum = 0.0;
  for (double s : slopes) sum += s;
  est.slope = sum / static_cast<double>(slopes.size());
  const double rounded = std::round(est.slope);
  for (double s : slopes) est.residual = std::max(est.residual, std::abs(s - rounded));
  est.order = static_cast<int>(rounded) - 1;
  return est;
}

ContactEstimate bouquet_contact_oracle(const PeriodicCurve& x, double t, const ContactTarget& target) {
  const FrenetPoint p = frenet_at(x, t);
  const double inv_len = std::max({p.k, std::abs(p.tau), std::sqrt(std::abs(p.dk)), std::cbrt(std::abs(p.ddk))});
  const double step = 0.25 / (inv_len * p.speed);
  return bouquet_contact_oracle([&x](double s) { return Vec3(x.evaluate(s)); }, t, step, target);
}

PeriodicCurve lift_to_lightcone(const PeriodicCurve& curve, int grid_size) {
  if (curve.dimension() != 3) {
    throw GeometryError(ErrorKind::precondition, "lift_to_lightcone: curve must live in R^3");
  }
  const int m = grid_size > 0 ? grid_size : curve.sample_count();
  const Eigen::MatrixXd pts = curve.on_grid(0, m);
  Eigen::MatrixXd out(m, 5);
  for (int i = 0; i < m; ++i) out.row(i) = lift_point(pts.row(i).transpose()).transpose();
  return PeriodicCurve(std::move(out), curve.period());
}

std::array<LorentzVector, 6> lift_derivatives(const PeriodicCurve& curve, double t) {
  const auto d = derivatives_at(curve, t);
  return lift_derivatives(d);
}

std::array<LorentzVector, 6> lift_derivatives(std::span<const Vec3> derivs) {
  if (derivs.size() < 6) {
    throw GeometryError(ErrorKind::precondition, "lift_derivatives: need derivatives 0..5");
  }
  const auto x = taylor_from_derivatives<5, 3>(derivs);
  const Taylor<5> n2 = dot(x, x);
  const Taylor<5> den = n2 + 1.0;
  TaylorVec<5, 5> g;
  for (int i = 0; i < 3; ++i) g[i] = 2.0 * x[i] / den;
  g[3] = (n2 + -1.0) / den;
  g[4] = Taylor<5>::constant(1.0);
  std::array<LorentzVector, 6> out;
  for (int j = 0; j < 6; ++j) out[static_cast<std::size_t>(j)] = derivative_of(g, j);
  return out;
}

PeriodicCurve arclength_reparametrize(const PeriodicCurve& curve, int samples) {
  return arclength_reparametrize(
      curve, [](const Eigen::VectorXd& d) { return d.norm(); }, samples);
}

PeriodicCurve arclength_reparametrize(const PeriodicCurve& curve,
                                      const std::function<double(const Eigen::VectorXd&)>& norm,
                                      int samples) {
  const int fine = 4 * curve.sample_count();
  const Eigen::MatrixXd derivative = curve.on_grid(1, fine);
  Eigen::VectorXd speed(fine);
  for (int i = 0; i < fine; ++i) speed(i) = norm(derivative.row(i).transpose());
  if (!(speed.minCoeff() > 1e-8 * speed.maxCoeff())) {
    throw GeometryError(ErrorKind::irregular_curve, "arclength_reparametrize: curve speed vanishes");
  }
  const PeriodicCurve s = speed_curve(speed, curve.period());
  const double length = s.integral_over_period()(0);

  // Cumulative table for starting guesses.
  Eigen::VectorXd table(fine + 1);
  for (int i = 0; i <= fine; ++i) table(i) = s.integral(curve.period() * i / fine)(0);

  const int n = samples > 0 ? samples : 2 * curve.sample_count();
  Eigen::MatrixXd out(n, curve.dimension());
  for (int j = 0; j < n; ++j) {
    const double target = length * j / n;
    const auto* it = std::upper_bound(table.data(), table.data() + fine + 1, target);
    const int i = std::clamp(static_cast<int>(it - table.data()) - 1, 0, fine - 1);
    const double ti = curve.period() * i / fine;
    double t = ti + (target - table(i)) / speed(i % fine);
    for (int iter = 0; iter < 60; ++iter) {
      const double step = (s.integral(t)(0) - target) / s.evaluate(t)(0);
      t -= step;
      if (std::abs(step) <= 1e-15 * curve.period()) break;
    }
    out.row(j) = curve.evaluate(t).transpose();
  }
  return PeriodicCurve(std::move(out), length);
}

}  // namespace desitter
