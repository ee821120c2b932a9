#include "graspkit/penetration.hpp"

namespace graspkit {

std::optional<PenetrationHit> deepest_penetration(const TriMesh& probe,
                                                  const Isom& probe_pose,
                                                  const TriMesh& target,
                                                  const Isom& target_pose) {
  const Isom to_target = target_pose.inverse() * probe_pose;
  const Isom target_to_world = target_pose;

  // Broadphase: probe bounds (transformed into target frame) vs target box.
  Box3 probe_box;
  probe_box.setEmpty();
  for (int cx = 0; cx <= 1; ++cx) {
    for (int cy = 0; cy <= 1; ++cy) {
      for (int cz = 0; cz <= 1; ++cz) {
        const Vec3 corner(cx ? probe.bounds().max().x() : probe.bounds().min().x(),
                          cy ? probe.bounds().max().y() : probe.bounds().min().y(),
                          cz ? probe.bounds().max().z() : probe.bounds().min().z());
        probe_box.extend(to_target * corner);
      }
    }
  }
  if (!probe_box.intersects(target.bounds())) return std::nullopt;

  double best = 0.0;
  Vec3 best_point = Vec3::Zero();
  Vec3 best_push = Vec3::Zero();
  for (const SurfacePoint& s : probe.collision_samples()) {
    const Vec3 q = to_target * s.position;
    if (target.certainly_outside(q)) continue;
    const double sd = target.signed_distance(q);
    if (sd < -best) {
      best = -sd;
      best_point = q;
      best_push = target.closest_surface_point(q).normal;
    }
  }
  if (best <= 0.0) return std::nullopt;
  PenetrationHit hit;
  hit.depth = best;
  hit.point_world = target_to_world * best_point;
  hit.push_world = (target_to_world.linear() * best_push).normalized();
  return hit;
}

double max_penetration_depth_mm(const TriMesh& a, const Isom& pose_a,
                                const TriMesh& b, const Isom& pose_b) {
  double depth = 0.0;
  if (const auto hit = deepest_penetration(a, pose_a, b, pose_b)) {
    depth = std::max(depth, hit->depth);
  }
  if (const auto hit = deepest_penetration(b, pose_b, a, pose_a)) {
    depth = std::max(depth, hit->depth);
  }
  return depth * 1000.0;
}

}  // namespace graspkit
