#pragma once

#include <string>
#include <vector>

#include "zspose/geometry.hpp"

namespace zspose {

/// Camera orientations for template rendering plus the shared view distance.
struct ViewSet {
  std::vector<Rotation> rotations;
  double distance = 0.0;  // camera-to-object-center, mm
};

/// Deterministic low-dispersion rotation set.
///
/// n == 6 returns the axis-aligned orientations (front, back, left, right,
/// up, down). Larger n uses a Hopf-style product grid: a spherical Fibonacci
/// point set for the viewing axis crossed with evenly spaced in-plane angles,
/// with n factored into the two counts. Throws on n == 0.
std::vector<Rotation> sample_so3(std::size_t n);

/// Look-at camera poses: each maps object_center to (0, 0, distance) in the
/// camera frame, viewing along the rotated axis.
std::vector<Pose> template_poses(const ViewSet& views, const Vec3& object_center);

/// Geodesic distance arccos(|<q1, q2>|) between unit quaternions, in
/// [0, pi/2].
double rotation_geodesic(const Rotation& a, const Rotation& b);

/// JSON (de)serialization as a list of row-major 3x3 matrices.
void save_views_json(const std::string& path, const std::vector<Rotation>& rotations);
std::vector<Rotation> load_views_json(const std::string& path);

}  // namespace zspose
