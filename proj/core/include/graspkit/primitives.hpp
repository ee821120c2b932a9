#pragma once

#include "graspkit/geometry.hpp"

namespace graspkit {

// Watertight primitive meshes, consistently outward-oriented. Sizes in
// meters. Used for the reference objects, hand link collision shapes, and
// test fixtures.

MeshPtr make_icosphere(double radius, int subdivisions);
MeshPtr make_box(const Vec3& half_extents, int segments_per_edge = 1);
MeshPtr make_cylinder(double radius, double height, int radial_segments = 32,
                      int height_segments = 4);
MeshPtr make_capsule(double radius, double cylinder_height,
                     int radial_segments = 24, int cap_rings = 6,
                     int height_segments = 3);
MeshPtr make_torus(double major_radius, double minor_radius,
                   int major_segments = 48, int minor_segments = 20);

}  // namespace graspkit
