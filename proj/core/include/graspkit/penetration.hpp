#pragma once

#include <optional>

#include "graspkit/geometry.hpp"

namespace graspkit {

// Deepest penetrating sample of `probe` into the volume of `target`.
struct PenetrationHit {
  double depth = 0.0;        // meters, > 0
  Vec3 point_world;          // penetrating sample, world frame
  Vec3 push_world;           // unit direction that moves the sample out of
                             // target (outward surface normal at its witness)
};

// Scans probe's cached blue-noise surface samples against target's signed
// distance field, with conservative voxel culling. Returns the deepest
// penetrating sample, or nullopt when disjoint.
std::optional<PenetrationHit> deepest_penetration(const TriMesh& probe,
                                                  const Isom& probe_pose,
                                                  const TriMesh& target,
                                                  const Isom& target_pose);

// Symmetric maximum penetration depth between two posed bodies, in
// millimeters (this is the reporting-layer unit; geometry stays in meters).
// 0 when disjoint.
double max_penetration_depth_mm(const TriMesh& a, const Isom& pose_a,
                                const TriMesh& b, const Isom& pose_b);

}  // namespace graspkit
