#include "desitter/mesh.hpp"

#include "desitter/error.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <utility>

namespace desitter {
namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

// Frame rotated by angle beta inside the (f1, f2) plane.
CircleFrame rotated(const CircleFrame& f, double beta) {
  CircleFrame out = f;
  out.f1 = std::cos(beta) * f.f1 + std::sin(beta) * f.f2;
  out.f2 = -std::sin(beta) * f.f1 + std::cos(beta) * f.f2;
  return out;
}

// Angle of the projection of v onto the (f1, f2) plane of f.
double angle_in(const CircleFrame& f, const LorentzVector& v) {
  return std::atan2(inner(v, f.f2), inner(v, f.f1));
}

TriMesh build_mesh(const CanalPath& path, const std::vector<CircleFrame>& frames, int ntheta,
                   const MeshOptions& options) {
  const int nt = static_cast<int>(frames.size());
  TriMesh mesh;
  mesh.rows = nt;
  mesh.cols = ntheta;
  std::vector<int> index(static_cast<std::size_t>(nt * ntheta), -1);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < ntheta; ++j) {
      const LorentzVector g = frames[static_cast<std::size_t>(i)].point(kTwoPi * j / ntheta);
      const auto x = stereographic_to_r3(S3Point::from_lightcone(g, 1e-8), options.pole_tol);
      if (!x) {
        ++mesh.culled_vertices;
        continue;
      }
      index[static_cast<std::size_t>(i * ntheta + j)] = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(*x);
      mesh.vertex_grid.push_back({i, j});
    }
  }
  auto at = [&](int i, int j) { return index[static_cast<std::size_t>((i % nt) * ntheta + j % ntheta)]; };

  // Euclidean centers of the spheres, for the orientation vote.
  std::vector<std::optional<Vec3>> centers(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i) {
    try {
      const double t = path.period() * i / nt;
      centers[static_cast<std::size_t>(i)] =
          euclidean_from_sphere(SpherePoint::normalized(path.position(t))).center;
    } catch (const GeometryError&) {
    }
  }

  int area_dropped = 0;
  long vote = 0;
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < ntheta; ++j) {
      const int a = at(i, j), b = at(i + 1, j), c = at(i + 1, j + 1), d = at(i, j + 1);
      for (const std::array<int, 3>& tri : {std::array<int, 3>{a, b, c}, std::array<int, 3>{a, c, d}}) {
        if (tri[0] < 0 || tri[1] < 0 || tri[2] < 0) {
          ++mesh.dropped_triangles;
          continue;
        }
        const Vec3& p = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec3& q = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec3& r = mesh.vertices[static_cast<std::size_t>(tri[2])];
        if (!(triangle_area(p, q, r) > options.area_tol)) {
          ++mesh.dropped_triangles;
          ++area_dropped;
          continue;
        }
        mesh.triangles.push_back(tri);
        if (const auto& center = centers[static_cast<std::size_t>(i)]) {
          const double s = (q - p).cross(r - p).dot((p + q + r) / 3.0 - *center);
          vote += s > 0.0 ? 1 : (s < 0.0 ? -1 : 0);
        }
      }
    }
  }
  if (vote < 0) {
    for (auto& tri : mesh.triangles) std::swap(tri[1], tri[2]);
  }
  mesh.degenerate = area_dropped > nt * ntheta;  // more than half of the 2 nt ntheta
  if (mesh.degenerate) {
    for (int j = 0; j < ntheta; ++j) {
      const int k = at(0, j);
      if (k >= 0) mesh.fallback_polyline.push_back(mesh.vertices[static_cast<std::size_t>(k)]);
    }
  }
  return mesh;
}

void check_grid(const CanalPath& path, int nt, int ntheta) {
  if (nt < 3 || ntheta < 3) {
    throw GeometryError(ErrorKind::precondition, "envelope_mesh: need nt, ntheta >= 3");
  }
  if (!path.spacelike()) {
    throw GeometryError(ErrorKind::non_spacelike, "envelope_mesh: tangent not space-like");
  }
}
}  // namespace

TriMesh envelope_mesh(const CanalPath& path, int nt, int ntheta, const MeshOptions& options) {
  check_grid(path, nt, ntheta);
  std::vector<CircleFrame> frames;
  frames.reserve(static_cast<std::size_t>(nt));
  frames.push_back(circle_frame(characteristic_circle(path, 0.0)));
  for (int i = 1; i < nt; ++i) {
    const CircleFrame canonical = circle_frame(characteristic_circle(path, path.period() * i / nt));
    frames.push_back(rotated(canonical, angle_in(canonical, frames.back().f1)));
  }
  // Holonomy of the transport around the loop, removed in equal steps.
  const double holonomy = angle_in(frames.front(), frames.back().f1);
  for (int i = 1; i < nt; ++i) {
    frames[static_cast<std::size_t>(i)] = rotated(frames[static_cast<std::size_t>(i)], -holonomy * i / nt);
  }
  return build_mesh(path, frames, ntheta, options);
}

TriMesh envelope_mesh(const CanalPath& path, int nt, int ntheta,
                      const std::function<LorentzVector(double)>& anchor, const MeshOptions& options) {
  check_grid(path, nt, ntheta);
  std::vector<CircleFrame> frames;
  frames.reserve(static_cast<std::size_t>(nt));
  for (int i = 0; i < nt; ++i) {
    const double t = path.period() * i / nt;
    frames.push_back(circle_frame(characteristic_circle(path, t), anchor(t)));
  }
  return build_mesh(path, frames, ntheta, options);
}

double triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double s = (b - a).squaredNorm() + (c - b).squaredNorm() + (a - c).squaredNorm();
  return s > 0.0 ? 4.0 * std::sqrt(3.0) * triangle_area(a, b, c) / s : 0.0;
}

MeshAudit audit_mesh(const TriMesh& mesh) {
  MeshAudit out;
  std::map<std::pair<int, int>, int> edges;
  std::set<int> used;
  out.min_quality = 1.0;
  out.min_area = mesh.triangles.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mesh.triangles.size(); ++k) {
    const auto& tri = mesh.triangles[k];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[static_cast<std::size_t>(e)];
      const int b = tri[static_cast<std::size_t>((e + 1) % 3)];
      ++edges[{std::min(a, b), std::max(a, b)}];
      used.insert(a);
    }
    const Vec3& p = mesh.vertices[static_cast<std::size_t>(tri[0])];
    const Vec3& q = mesh.vertices[static_cast<std::size_t>(tri[1])];
    const Vec3& r = mesh.vertices[static_cast<std::size_t>(tri[2])];
    const double quality = triangle_quality(p, q, r);
    if (quality < out.min_quality || out.min_quality_triangle < 0) {
      out.min_quality = quality;
      out.min_quality_triangle = static_cast<int>(k);
    }
    out.min_area = std::min(out.min_area, triangle_area(p, q, r));
  }
  out.vertices = static_cast<int>(used.size());
  out.edges = static_cast<int>(edges.size());
  out.faces = static_cast<int>(mesh.triangles.size());
  out.euler_characteristic = out.vertices - out.edges + out.faces;
  for (const auto& [edge, count] : edges) {
    if (count == 1) ++out.boundary_edges;
    if (count > 2) ++out.nonmanifold_edges;
  }
  out.watertight = out.faces > 0 && out.boundary_edges == 0 && out.nonmanifold_edges == 0;
  return out;
}

void write_obj(const TriMesh& mesh, std::ostream& out) {
  const auto old_precision = out.precision(12);
  if (mesh.degenerate) {
    out << "# degenerate envelope: single characteristic circle\n";
    for (const Vec3& v : mesh.fallback_polyline) out << "v " << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
    if (!mesh.fallback_polyline.empty()) {
      out << 'l';
      for (std::size_t i = 0; i < mesh.fallback_polyline.size(); ++i) out << ' ' << i + 1;
      out << " 1\n";
    }
  } else {
    for (const Vec3& v : mesh.vertices) out << "v " << v(0) << ' ' << v(1) << ' ' << v(2) << '\n';
    for (const auto& tri : mesh.triangles) {
      out << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
    }
  }
  out.precision(old_precision);
}

}  // namespace desitter
