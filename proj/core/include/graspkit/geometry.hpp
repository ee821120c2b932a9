#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "graspkit/types.hpp"

namespace graspkit {

// A point bound to a mesh face. `normal` is the barycentric blend of the
// per-vertex normals, normalized, in the mesh's outward convention.
struct SurfacePoint {
  int face = -1;
  Vec3 bary = Vec3::Zero();
  Vec3 position = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};

// Closest point on one triangle with its barycentric coordinates.
struct TriangleClosest {
  Vec3 point;
  Vec3 bary;
};
TriangleClosest closest_point_on_triangle(const Vec3& a, const Vec3& b,
                                          const Vec3& c, const Vec3& query);

// Watertight, consistently oriented triangle mesh with an AABB hierarchy
// over faces. Immutable after construction; all queries are const and safe
// to run concurrently. Construction throws StructuralError on invalid
// topology and reports boundary edges when the surface is open.
class TriMesh {
 public:
  TriMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> faces);

  TriMesh(const TriMesh&) = delete;
  TriMesh& operator=(const TriMesh&) = delete;

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& faces() const { return faces_; }
  // Angle-weighted unit vertex normals (outward).
  const std::vector<Vec3>& vertex_normals() const { return vertex_normals_; }
  const Vec3& face_normal(int face) const { return face_normals_[face]; }
  double face_area(int face) const { return face_areas_[face]; }
  double total_area() const { return total_area_; }
  const Box3& bounds() const { return bounds_; }

  // Globally nearest surface point; ties across faces resolve to the lowest
  // face index. BVH-accelerated, exact (no pruning of equal-distance nodes).
  SurfacePoint closest_surface_point(const Vec3& query) const;

  double unsigned_distance(const Vec3& query) const;

  // Negative inside, positive outside. Sign from the angle-weighted
  // pseudonormal at the closest feature (face / edge / vertex).
  double signed_distance(const Vec3& query) const;

  // Rebuild a SurfacePoint from face + barycentric coordinates.
  SurfacePoint surface_point(int face, const Vec3& bary) const;

  // d(interpolated unit normal)/d(position) for in-face motion; the matrix
  // annihilates the face-normal direction. For points on a face edge or
  // vertex the one-sided value of `point.face` is returned and *on_edge is
  // set when provided.
  Mat3 interpolated_normal_jacobian(const SurfacePoint& point,
                                    bool* on_edge = nullptr) const;

  // 4096 blue-noise surface samples (area-uniform best-candidate, fixed
  // seed). Built lazily, cached, deterministic for a given mesh.
  const std::vector<SurfacePoint>& collision_samples() const;

  // Conservative voxel cull for penetration queries: true means the point is
  // certainly outside the surface (signed distance strictly positive).
  bool certainly_outside(const Vec3& query) const;

  static constexpr int kCollisionSampleCount = 4096;

 private:
  struct BvhNode {
    Box3 box;
    int left = -1;   // child index, -1 for leaf
    int right = -1;
    int begin = 0;   // face-order range for leaves
    int end = 0;
  };

  void build_normals();
  void build_bvh();
  int build_bvh_node(int begin, int end);
  void validate_topology() const;
  void build_samples() const;
  void build_voxel_cull() const;

  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<Vec3> face_normals_;
  std::vector<double> face_areas_;
  std::vector<Vec3> vertex_normals_;
  // Unnormalized sum of the two incident face normals, keyed by sorted
  // vertex pair; used for the pseudonormal sign test.
  std::unordered_map<std::uint64_t, Vec3> edge_pseudonormals_;
  double total_area_ = 0.0;
  Box3 bounds_;

  std::vector<BvhNode> nodes_;
  std::vector<int> face_order_;

  mutable std::once_flag samples_once_;
  mutable std::vector<SurfacePoint> samples_;

  // Voxel occupancy: 0 = certainly outside, 1 = undecided (near surface or
  // inside). Grid covers bounds_ expanded by one cell.
  mutable std::once_flag voxel_once_;
  mutable std::vector<std::uint8_t> voxel_;
  mutable Vec3 voxel_origin_;
  mutable double voxel_cell_ = 0.0;
  mutable int voxel_dim_ = 0;
};

using MeshPtr = std::shared_ptr<const TriMesh>;

}  // namespace graspkit
