#pragma once

#include <cstdint>

#include "zspose/geometry.hpp"

namespace zspose {

/// Axis-aligned box centered at the origin (12 triangles).
TriangleMesh make_box(double size_x, double size_y, double size_z);

/// Icosphere with `subdivisions` refinement steps.
TriangleMesh make_icosphere(double radius, int subdivisions);

/// Asymmetric blob: an icosphere whose radius is modulated by a few smooth
/// bumps at seeded random directions. Distinct local curvature everywhere
/// makes these good registration targets.
TriangleMesh make_bump_blob(double base_radius, int subdivisions, int bumps,
                            std::uint64_t seed);

/// Closed cylinder along z (centered), `segments` around the axis.
TriangleMesh make_cylinder(double radius, double height, int segments);

}  // namespace zspose
