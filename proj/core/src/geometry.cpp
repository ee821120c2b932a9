#include "graspkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace graspkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

double box_distance_sq(const Box3& box, const Vec3& p) {
  const Vec3 d = (box.min() - p).cwiseMax(0.0).cwiseMax(p - box.max());
  return d.squaredNorm();
}

}  // namespace

// Ericson, Real-Time Collision Detection, 5.1.5.
TriangleClosest closest_point_on_triangle(const Vec3& a, const Vec3& b,
                                          const Vec3& c, const Vec3& p) {
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, Vec3(1, 0, 0)};

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, Vec3(0, 1, 0)};

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return {a + v * ab, Vec3(1.0 - v, v, 0.0)};
  }

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, Vec3(0, 0, 1)};

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return {a + w * ac, Vec3(1.0 - w, 0.0, w)};
  }

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {b + w * (c - b), Vec3(0.0, 1.0 - w, w)};
  }

  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom;
  const double w = vc * denom;
  return {a + ab * v + ac * w, Vec3(1.0 - v - w, v, w)};
}

TriMesh::TriMesh(std::vector<Vec3> vertices,
                 std::vector<std::array<int, 3>> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
  if (faces_.empty() || vertices_.empty()) {
    throw StructuralError("TriMesh: empty mesh");
  }
  validate_topology();
  build_normals();
  bounds_.setEmpty();
  for (const Vec3& v : vertices_) bounds_.extend(v);
  build_bvh();
}

void TriMesh::validate_topology() const {
  const int nv = static_cast<int>(vertices_.size());
  std::unordered_map<std::uint64_t, int> edge_use;  // +1 forward, -1 reverse
  std::unordered_map<std::uint64_t, int> edge_count;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& tri = faces_[f];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] < 0 || tri[k] >= nv) {
        std::ostringstream os;
        os << "TriMesh: face " << f << " references invalid vertex " << tri[k];
        throw StructuralError(os.str());
      }
      const int u = tri[k];
      const int v = tri[(k + 1) % 3];
      if (u == v) {
        std::ostringstream os;
        os << "TriMesh: face " << f << " is degenerate (repeated vertex)";
        throw StructuralError(os.str());
      }
      edge_use[edge_key(u, v)] += (u < v) ? 1 : -1;
      edge_count[edge_key(u, v)] += 1;
    }
  }
  std::vector<std::uint64_t> bad;
  for (const auto& [key, count] : edge_count) {
    const int orient = edge_use.at(key);
    if (count != 2 || orient != 0) bad.push_back(key);
  }
  if (!bad.empty()) {
    std::sort(bad.begin(), bad.end());
    std::ostringstream os;
    os << "TriMesh: surface is not watertight/consistently oriented; " << bad.size()
       << " boundary or non-manifold edges:";
    const std::size_t shown = std::min<std::size_t>(bad.size(), 16);
    for (std::size_t i = 0; i < shown; ++i) {
      os << " (" << static_cast<int>(bad[i] >> 32) << ","
         << static_cast<int>(bad[i] & 0xffffffffu) << ")";
    }
    if (bad.size() > shown) os << " ...";
    throw StructuralError(os.str());
  }
}

void TriMesh::build_normals() {
  face_normals_.resize(faces_.size());
  face_areas_.resize(faces_.size());
  vertex_normals_.assign(vertices_.size(), Vec3::Zero());
  total_area_ = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const auto& tri = faces_[f];
    const Vec3& a = vertices_[tri[0]];
    const Vec3& b = vertices_[tri[1]];
    const Vec3& c = vertices_[tri[2]];
    const Vec3 cross = (b - a).cross(c - a);
    const double len = cross.norm();
    if (len < 1e-16) {
      std::ostringstream os;
      os << "TriMesh: face " << f << " has zero area";
      throw StructuralError(os.str());
    }
    face_normals_[f] = cross / len;
    face_areas_[f] = 0.5 * len;
    total_area_ += face_areas_[f];

    // Angle-weighted accumulation (exact pseudonormal sign test at vertices).
    for (int k = 0; k < 3; ++k) {
      const Vec3& v0 = vertices_[tri[k]];
      const Vec3 e1 = (vertices_[tri[(k + 1) % 3]] - v0).normalized();
      const Vec3 e2 = (vertices_[tri[(k + 2) % 3]] - v0).normalized();
      const double angle = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
      vertex_normals_[tri[k]] += angle * face_normals_[f];
    }
    for (int k = 0; k < 3; ++k) {
      edge_pseudonormals_[edge_key(tri[k], tri[(k + 1) % 3])] += face_normals_[f];
    }
  }
  for (Vec3& n : vertex_normals_) {
    const double len = n.norm();
    if (len < 1e-14) throw StructuralError("TriMesh: degenerate vertex normal");
    n /= len;
  }
}

void TriMesh::build_bvh() {
  face_order_.resize(faces_.size());
  std::iota(face_order_.begin(), face_order_.end(), 0);
  nodes_.clear();
  nodes_.reserve(2 * faces_.size());
  build_bvh_node(0, static_cast<int>(faces_.size()));
}

int TriMesh::build_bvh_node(int begin, int end) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Box3 box;
  box.setEmpty();
  for (int i = begin; i < end; ++i) {
    for (int v : faces_[face_order_[i]]) box.extend(vertices_[v]);
  }
  nodes_[index].box = box;
  constexpr int kLeafSize = 4;
  if (end - begin <= kLeafSize) {
    nodes_[index].begin = begin;
    nodes_[index].end = end;
    // Keep leaf faces in ascending index order: cheap and makes equal-distance
    // scans independent of the split history.
    std::sort(face_order_.begin() + begin, face_order_.begin() + end);
    return index;
  }
  int axis = 0;
  box.sizes().maxCoeff(&axis);
  const int mid = (begin + end) / 2;
  auto centroid = [&](int face) {
    const auto& tri = faces_[face];
    return (vertices_[tri[0]][axis] + vertices_[tri[1]][axis] +
            vertices_[tri[2]][axis]) / 3.0;
  };
  std::nth_element(face_order_.begin() + begin, face_order_.begin() + mid,
                   face_order_.begin() + end, [&](int fa, int fb) {
                     const double ca = centroid(fa);
                     const double cb = centroid(fb);
                     return ca < cb || (ca == cb && fa < fb);
                   });
  const int left = build_bvh_node(begin, mid);
  const int right = build_bvh_node(mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

SurfacePoint TriMesh::closest_surface_point(const Vec3& query) const {
  double best_d2 = kInf;
  int best_face = -1;
  Vec3 best_point = Vec3::Zero();
  Vec3 best_bary = Vec3::Zero();

  // Explicit stack; children visited near-first. Nodes at exactly the best
  // distance are still descended so equal-distance ties resolve to the
  // lowest face index, matching a brute-force scan.
  int stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const int ni = stack[--top];
    const BvhNode& node = nodes_[ni];
    if (box_distance_sq(node.box, query) > best_d2) continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int f = face_order_[i];
        const auto& tri = faces_[f];
        const TriangleClosest cand = closest_point_on_triangle(
            vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]], query);
        const double d2 = (cand.point - query).squaredNorm();
        if (d2 < best_d2 || (d2 == best_d2 && f < best_face)) {
          best_d2 = d2;
          best_face = f;
          best_point = cand.point;
          best_bary = cand.bary;
        }
      }
      continue;
    }
    const double dl = box_distance_sq(nodes_[node.left].box, query);
    const double dr = box_distance_sq(nodes_[node.right].box, query);
    if (dl <= dr) {
      stack[top++] = node.right;
      stack[top++] = node.left;
    } else {
      stack[top++] = node.left;
      stack[top++] = node.right;
    }
  }
  return surface_point(best_face, best_bary);
}

SurfacePoint TriMesh::surface_point(int face, const Vec3& bary) const {
  const auto& tri = faces_[face];
  SurfacePoint sp;
  sp.face = face;
  sp.bary = bary;
  sp.position = bary[0] * vertices_[tri[0]] + bary[1] * vertices_[tri[1]] +
                bary[2] * vertices_[tri[2]];
  sp.normal = (bary[0] * vertex_normals_[tri[0]] +
               bary[1] * vertex_normals_[tri[1]] +
               bary[2] * vertex_normals_[tri[2]]).normalized();
  return sp;
}

double TriMesh::unsigned_distance(const Vec3& query) const {
  return (closest_surface_point(query).position - query).norm();
}

double TriMesh::signed_distance(const Vec3& query) const {
  const SurfacePoint sp = closest_surface_point(query);
  const auto& tri = faces_[sp.face];

  constexpr double kBaryTol = 1e-12;
  int zero_count = 0;
  int zeros[3];
  for (int k = 0; k < 3; ++k) {
    if (sp.bary[k] <= kBaryTol) zeros[zero_count++] = k;
  }
  Vec3 pseudo;
  if (zero_count == 0) {
    pseudo = face_normals_[sp.face];
  } else if (zero_count == 1) {
    const int u = tri[(zeros[0] + 1) % 3];
    const int v = tri[(zeros[0] + 2) % 3];
    pseudo = edge_pseudonormals_.at(edge_key(u, v));
  } else {
    // Two zero coordinates: closest feature is the remaining vertex.
    const int k = 3 - zeros[0] - zeros[1];
    pseudo = vertex_normals_[tri[k]];
  }
  const Vec3 diff = query - sp.position;
  const double dist = diff.norm();
  return pseudo.dot(diff) >= 0.0 ? dist : -dist;
}

Mat3 TriMesh::interpolated_normal_jacobian(const SurfacePoint& point,
                                           bool* on_edge) const {
  constexpr double kInteriorTol = 1e-9;
  const bool edge = point.bary.minCoeff() <= kInteriorTol;
  if (on_edge) *on_edge = edge;

  const auto& tri = faces_[point.face];
  const Vec3& v0 = vertices_[tri[0]];
  const Vec3& v1 = vertices_[tri[1]];
  const Vec3& v2 = vertices_[tri[2]];
  const Vec3& fn = face_normals_[point.face];
  const double a2 = 2.0 * face_areas_[point.face];

  // In-plane barycentric gradients: grad b_k = (fn x opposite_edge) / 2A.
  const Vec3 g0 = fn.cross(v2 - v1) / a2;
  const Vec3 g1 = fn.cross(v0 - v2) / a2;
  const Vec3 g2 = fn.cross(v1 - v0) / a2;

  const Vec3& n0 = vertex_normals_[tri[0]];
  const Vec3& n1 = vertex_normals_[tri[1]];
  const Vec3& n2 = vertex_normals_[tri[2]];
  const Vec3 m = point.bary[0] * n0 + point.bary[1] * n1 + point.bary[2] * n2;
  const double mlen = m.norm();
  const Vec3 mhat = m / mlen;

  const Mat3 dm = n0 * g0.transpose() + n1 * g1.transpose() + n2 * g2.transpose();
  return (Mat3::Identity() - mhat * mhat.transpose()) * dm / mlen;
}

const std::vector<SurfacePoint>& TriMesh::collision_samples() const {
  std::call_once(samples_once_, [this] { build_samples(); });
  return samples_;
}

void TriMesh::build_samples() const {
  // Best-candidate (Mitchell) blue noise over the surface, area-uniform
  // proposals, fixed seed. A uniform hash grid answers nearest-sample
  // queries; determinism comes from the fixed draw order.
  const int n = kCollisionSampleCount;
  samples_.reserve(n);

  std::vector<double> cum(faces_.size());
  double acc = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    acc += face_areas_[f];
    cum[f] = acc;
  }

  Rng rng(0x5EEDBA5E0C0FFEEull);
  auto draw_point = [&]() {
    const double target = uniform01(rng) * total_area_;
    const auto it = std::lower_bound(cum.begin(), cum.end(), target);
    const int f = static_cast<int>(std::min<std::size_t>(
        std::distance(cum.begin(), it), faces_.size() - 1));
    double u = uniform01(rng);
    double v = uniform01(rng);
    if (u + v > 1.0) {
      u = 1.0 - u;
      v = 1.0 - v;
    }
    return surface_point(f, Vec3(1.0 - u - v, u, v));
  };

  const double cell = std::sqrt(total_area_ / n) * 0.8 + 1e-12;
  const Vec3 origin = bounds_.min() - Vec3::Constant(cell);
  auto cell_key = [&](const Vec3& p) {
    const int ix = static_cast<int>(std::floor((p.x() - origin.x()) / cell));
    const int iy = static_cast<int>(std::floor((p.y() - origin.y()) / cell));
    const int iz = static_cast<int>(std::floor((p.z() - origin.z()) / cell));
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(ix)) << 42) ^
           (static_cast<std::uint64_t>(static_cast<std::uint32_t>(iy)) << 21) ^
           static_cast<std::uint32_t>(iz);
  };
  std::unordered_map<std::uint64_t, std::vector<int>> grid;

  auto nearest_d2 = [&](const Vec3& p) {
    // Expanding ring search over grid cells until a ring adds no closer hit.
    double best = kInf;
    const int cx = static_cast<int>(std::floor((p.x() - origin.x()) / cell));
    const int cy = static_cast<int>(std::floor((p.y() - origin.y()) / cell));
    const int cz = static_cast<int>(std::floor((p.z() - origin.z()) / cell));
    for (int r = 0; r < 64; ++r) {
      if (best < kInf) {
        const double ring_min = (r - 1) * cell;
        if (ring_min > 0.0 && ring_min * ring_min > best) break;
      }
      bool any = false;
      for (int dx = -r; dx <= r; ++dx) {
        for (int dy = -r; dy <= r; ++dy) {
          for (int dz = -r; dz <= r; ++dz) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != r) continue;
            const std::uint64_t key =
                (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx + dx)) << 42) ^
                (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy + dy)) << 21) ^
                static_cast<std::uint32_t>(cz + dz);
            const auto it = grid.find(key);
            if (it == grid.end()) continue;
            any = true;
            for (int idx : it->second) {
              best = std::min(best, (samples_[idx].position - p).squaredNorm());
            }
          }
        }
      }
      if (r > 0 && !any && best < kInf) break;
    }
    return best;
  };

  constexpr int kCandidates = 8;
  for (int i = 0; i < n; ++i) {
    SurfacePoint best_sp = draw_point();
    if (i > 0) {
      double best_d2 = nearest_d2(best_sp.position);
      for (int c = 1; c < kCandidates; ++c) {
        const SurfacePoint sp = draw_point();
        const double d2 = nearest_d2(sp.position);
        if (d2 > best_d2) {
          best_d2 = d2;
          best_sp = sp;
        }
      }
    }
    grid[cell_key(best_sp.position)].push_back(static_cast<int>(samples_.size()));
    samples_.push_back(best_sp);
  }
}

bool TriMesh::certainly_outside(const Vec3& query) const {
  std::call_once(voxel_once_, [this] { build_voxel_cull(); });
  const Vec3 rel = (query - voxel_origin_) / voxel_cell_;
  const int ix = static_cast<int>(std::floor(rel.x()));
  const int iy = static_cast<int>(std::floor(rel.y()));
  const int iz = static_cast<int>(std::floor(rel.z()));
  if (ix < 0 || iy < 0 || iz < 0 || ix >= voxel_dim_ || iy >= voxel_dim_ ||
      iz >= voxel_dim_) {
    return true;  // outside the expanded bounding box
  }
  return voxel_[(static_cast<std::size_t>(ix) * voxel_dim_ + iy) * voxel_dim_ +
                iz] == 0;
}

void TriMesh::build_voxel_cull() const {
  constexpr int kDim = 48;
  voxel_dim_ = kDim;
  const Vec3 extent = bounds_.sizes();
  voxel_cell_ = extent.maxCoeff() / (kDim - 2);
  if (voxel_cell_ <= 0.0) voxel_cell_ = 1e-6;
  voxel_origin_ = bounds_.center() - Vec3::Constant(0.5 * kDim * voxel_cell_);
  voxel_.assign(static_cast<std::size_t>(kDim) * kDim * kDim, 1);
  const double safe = 0.5 * std::sqrt(3.0) * voxel_cell_ + 1e-9;
  std::size_t idx = 0;
  for (int ix = 0; ix < kDim; ++ix) {
    for (int iy = 0; iy < kDim; ++iy) {
      for (int iz = 0; iz < kDim; ++iz, ++idx) {
        const Vec3 center = voxel_origin_ +
            voxel_cell_ * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
        if (signed_distance(center) > safe) voxel_[idx] = 0;
      }
    }
  }
}

}  // namespace graspkit
