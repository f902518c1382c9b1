#pragma once

#include "desitter/canal.hpp"
#include "desitter/sphere_model.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

namespace desitter {

/// Triangle mesh of R^3 built on an nt x ntheta parameter grid.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  int rows = 0;
  int cols = 0;
  std::vector<std::array<int, 2>> vertex_grid;  // (row, column) of each vertex
  int culled_vertices = 0;    // points at (or numerically near) infinity
  int dropped_triangles = 0;  // incident to a culled vertex or of area <= 1e-12
  bool degenerate = false;    // most grid triangles collapsed
  std::vector<Vec3> fallback_polyline;  // first characteristic circle, for degenerate meshes
};

struct MeshOptions {
  double pole_tol = 1e-9;
  double area_tol = 1e-12;
};

/// Characteristic circles at nt parameters, each sampled at ntheta angles and
/// stereographically projected. Rows are parallel-transported in the circle
/// plane and the closing holonomy is spread evenly so the grid wraps in both
/// directions. Triangles face the side of the outer normal of the spheres by
/// majority vote. Throws GeometryError(non_spacelike) for non-canal paths.
TriMesh envelope_mesh(const CanalPath& path, int nt, int ntheta, const MeshOptions& options = {});

/// Same, with the theta = 0 point of row i at span(anchor(t_i)); anchor(t) must
/// be a future null vector on the characteristic circle at t.
TriMesh envelope_mesh(const CanalPath& path, int nt, int ntheta,
                      const std::function<LorentzVector(double)>& anchor,
                      const MeshOptions& options = {});

/// 4 sqrt(3) area / (sum of squared edge lengths): 1 for equilateral, 0 for a sliver.
double triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c);

struct MeshAudit {
  int vertices = 0;  // referenced by some triangle
  int edges = 0;
  int faces = 0;
  int euler_characteristic = 0;
  int boundary_edges = 0;
  int nonmanifold_edges = 0;
  bool watertight = false;
  double min_quality = 0.0;
  int min_quality_triangle = -1;
  double min_area = 0.0;
};

MeshAudit audit_mesh(const TriMesh& mesh);

/// ASCII OBJ: v and f records (1-based), or v and one closed l record with the
/// fallback polyline when the mesh is degenerate.
void write_obj(const TriMesh& mesh, std::ostream& out);

}  // namespace desitter
