#include "graspkit/primitives.hpp"

#include <cmath>
#include <map>
#include <unordered_map>

namespace graspkit {

namespace {

double signed_volume(const std::vector<Vec3>& v,
                     const std::vector<std::array<int, 3>>& f) {
  double vol = 0.0;
  for (const auto& tri : f) {
    vol += v[tri[0]].dot(v[tri[1]].cross(v[tri[2]]));
  }
  return vol / 6.0;
}

// Faces are generated with a coherent winding; if the net volume comes out
// negative the whole surface is inward and gets flipped once.
MeshPtr finalize(std::vector<Vec3> vertices,
                 std::vector<std::array<int, 3>> faces) {
  if (signed_volume(vertices, faces) < 0.0) {
    for (auto& tri : faces) std::swap(tri[1], tri[2]);
  }
  return std::make_shared<TriMesh>(std::move(vertices), std::move(faces));
}

}  // namespace

MeshPtr make_icosphere(double radius, int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> verts = {
      {-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0},
      {0, -1, t}, {0, 1, t},  {0, -1, -t}, {0, 1, -t},
      {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int idx = static_cast<int>(verts.size());
      verts.push_back((verts[a] + verts[b]).normalized());
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& tri : faces) {
      const int ab = mid(tri[0], tri[1]);
      const int bc = mid(tri[1], tri[2]);
      const int ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }
  for (Vec3& v : verts) v *= radius;
  return finalize(std::move(verts), std::move(faces));
}

MeshPtr make_box(const Vec3& half, int segments_per_edge) {
  const int n = std::max(1, segments_per_edge);
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;
  std::map<std::array<int, 3>, int> lattice;  // weld shared edges/corners

  auto vertex = [&](int ix, int iy, int iz) {
    const std::array<int, 3> key = {ix, iy, iz};
    const auto it = lattice.find(key);
    if (it != lattice.end()) return it->second;
    const int idx = static_cast<int>(verts.size());
    verts.emplace_back(-half.x() + 2.0 * half.x() * ix / n,
                       -half.y() + 2.0 * half.y() * iy / n,
                       -half.z() + 2.0 * half.z() * iz / n);
    lattice.emplace(key, idx);
    return idx;
  };

  auto emit = [&](int a, int b, int c, const Vec3& outward) {
    const Vec3 nrm = (verts[b] - verts[a]).cross(verts[c] - verts[a]);
    if (nrm.dot(outward) >= 0.0) {
      faces.push_back({a, b, c});
    } else {
      faces.push_back({a, c, b});
    }
  };

  // axis = fixed coordinate, side = 0 (min) or n (max).
  for (int axis = 0; axis < 3; ++axis) {
    for (int side = 0; side <= 1; ++side) {
      Vec3 outward = Vec3::Zero();
      outward[axis] = side ? 1.0 : -1.0;
      const int fixed = side ? n : 0;
      for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
          std::array<int, 3> i00{}, i10{}, i01{}, i11{};
          i00[axis] = fixed;
          const int ua = (axis + 1) % 3;
          const int va = (axis + 2) % 3;
          i00[ua] = u;
          i00[va] = v;
          i10 = i00; i10[ua] = u + 1;
          i01 = i00; i01[va] = v + 1;
          i11 = i10; i11[va] = v + 1;
          const int a = vertex(i00[0], i00[1], i00[2]);
          const int b = vertex(i10[0], i10[1], i10[2]);
          const int c = vertex(i11[0], i11[1], i11[2]);
          const int d = vertex(i01[0], i01[1], i01[2]);
          emit(a, b, c, outward);
          emit(a, c, d, outward);
        }
      }
    }
  }
  return finalize(std::move(verts), std::move(faces));
}

namespace {

// Surface of revolution around z for a profile (radius, z) running from one
// pole (r == 0) to the other. Interior points must have r > 0.
MeshPtr revolve(const std::vector<std::pair<double, double>>& profile,
                int radial_segments) {
  const int nseg = radial_segments;
  const int m = static_cast<int>(profile.size());
  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> faces;

  const int bottom_pole = static_cast<int>(verts.size());
  verts.emplace_back(0.0, 0.0, profile.front().second);
  std::vector<int> ring_start(m, -1);
  for (int j = 1; j + 1 < m; ++j) {
    ring_start[j] = static_cast<int>(verts.size());
    for (int i = 0; i < nseg; ++i) {
      const double phi = 2.0 * M_PI * i / nseg;
      verts.emplace_back(profile[j].first * std::cos(phi),
                         profile[j].first * std::sin(phi), profile[j].second);
    }
  }
  const int top_pole = static_cast<int>(verts.size());
  verts.emplace_back(0.0, 0.0, profile.back().second);

  auto ring = [&](int j, int i) { return ring_start[j] + (i % nseg); };

  for (int i = 0; i < nseg; ++i) {
    faces.push_back({bottom_pole, ring(1, i + 1), ring(1, i)});
  }
  for (int j = 1; j + 2 < m; ++j) {
    for (int i = 0; i < nseg; ++i) {
      faces.push_back({ring(j, i), ring(j, i + 1), ring(j + 1, i + 1)});
      faces.push_back({ring(j, i), ring(j + 1, i + 1), ring(j + 1, i)});
    }
  }
  for (int i = 0; i < nseg; ++i) {
    faces.push_back({top_pole, ring(m - 2, i), ring(m - 2, i + 1)});
  }
  return finalize(std::move(verts), std::move(faces));
}

}  // namespace

MeshPtr make_cylinder(double radius, double height, int radial_segments,
                      int height_segments) {
  std::vector<std::pair<double, double>> profile;
  profile.emplace_back(0.0, -height / 2.0);
  profile.emplace_back(radius, -height / 2.0);
  for (int k = 1; k < height_segments; ++k) {
    profile.emplace_back(radius, -height / 2.0 + height * k / height_segments);
  }
  profile.emplace_back(radius, height / 2.0);
  profile.emplace_back(0.0, height / 2.0);
  return revolve(profile, radial_segments);
}

MeshPtr make_capsule(double radius, double cylinder_height, int radial_segments,
                     int cap_rings, int height_segments) {
  const double hh = cylinder_height / 2.0;
  std::vector<std::pair<double, double>> profile;
  for (int k = 0; k <= cap_rings; ++k) {
    const double psi = M_PI / 2.0 * (1.0 - static_cast<double>(k) / cap_rings);
    profile.emplace_back(radius * std::cos(psi), -hh - radius * std::sin(psi));
  }
  for (int k = 1; k < height_segments; ++k) {
    profile.emplace_back(radius, -hh + cylinder_height * k / height_segments);
  }
  for (int k = 0; k <= cap_rings; ++k) {
    const double psi = M_PI / 2.0 * static_cast<double>(k) / cap_rings;
    profile.emplace_back(radius * std::cos(psi), hh + radius * std::sin(psi));
  }
  return revolve(profile, radial_segments);
}

MeshPtr make_torus(double major_radius, double minor_radius, int major_segments,
                   int minor_segments) {
  std::vector<Vec3> verts;
  verts.reserve(static_cast<std::size_t>(major_segments) * minor_segments);
  for (int i = 0; i < major_segments; ++i) {
    const double phi = 2.0 * M_PI * i / major_segments;
    for (int j = 0; j < minor_segments; ++j) {
      const double theta = 2.0 * M_PI * j / minor_segments;
      const double r = major_radius + minor_radius * std::cos(theta);
      verts.emplace_back(r * std::cos(phi), r * std::sin(phi),
                         minor_radius * std::sin(theta));
    }
  }
  auto at = [&](int i, int j) {
    return (i % major_segments) * minor_segments + (j % minor_segments);
  };
  std::vector<std::array<int, 3>> faces;
  faces.reserve(2 * static_cast<std::size_t>(major_segments) * minor_segments);
  for (int i = 0; i < major_segments; ++i) {
    for (int j = 0; j < minor_segments; ++j) {
      faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
      faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    }
  }
  return finalize(std::move(verts), std::move(faces));
}

}  // namespace graspkit
