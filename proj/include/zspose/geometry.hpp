#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <vector>

namespace zspose {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Proper rotation (orthonormal, det +1).
struct Rotation {
  Mat3 m = Mat3::Identity();

  Rotation() = default;
  explicit Rotation(const Mat3& r) : m(r) {}

  static Rotation identity() { return {}; }

  Rotation inverse() const { return Rotation(m.transpose()); }
  Vec3 operator*(const Vec3& p) const { return m * p; }
  Rotation operator*(const Rotation& o) const { return Rotation(m * o.m); }

  /// Orthonormality and det(+1) within tol.
  bool is_valid(double tol = 1e-9) const;

  /// Rotation angle of m^T * o.m, in [0, pi].
  double angle_to(const Rotation& o) const;

  /// Unit quaternion (w, x, y, z), w >= 0.
  Eigen::Vector4d quaternion() const;
};

/// Rigid transform: p -> R*p + t. Translations in mm.
struct Pose {
  Rotation rotation;
  Vec3 translation = Vec3::Zero();

  Pose() = default;
  Pose(const Rotation& r, const Vec3& t) : rotation(r), translation(t) {}
  Pose(const Mat3& r, const Vec3& t) : rotation(r), translation(t) {}

  static Pose identity() { return {}; }

  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }
  Pose operator*(const Pose& o) const {
    return {rotation * o.rotation, rotation * o.translation + translation};
  }
  Pose inverse() const {
    Rotation rinv = rotation.inverse();
    return {rinv, -(rinv * translation)};
  }
};

/// Points in mm, optionally with unit normals (same count when present).
struct PointCloud {
  std::vector<Vec3> points;
  std::vector<Vec3> normals;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_normals() const { return !normals.empty() && normals.size() == points.size(); }
};

/// Row-major binary mask; nonzero = set.
struct BitMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BitMask() = default;
  BitMask(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

  bool at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v = true) {
    data[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count() const;
};

/// Global symmetry transforms of a model; always contains the identity.
struct SymmetrySet {
  std::vector<Pose> transforms{Pose::identity()};

  static SymmetrySet identity_only() { return {}; }

  /// Appends t and keeps the identity in front.
  void add(const Pose& t) { transforms.push_back(t); }
};

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  SymmetrySet symmetries;

  /// Throws std::invalid_argument on out-of-range indices or degenerate faces.
  void validate() const;

  double surface_area() const;
};

struct CameraIntrinsics {
  double fx = 0, fy = 0;  // focal lengths, px
  double cx = 0, cy = 0;  // principal point, px
  int width = 0, height = 0;

  /// Pinhole projection of a camera-space point (z > 0) to pixel coordinates.
  Eigen::Vector2d project(const Vec3& p) const {
    return {fx * p.x() / p.z() + cx, fy * p.y() / p.z() + cy};
  }
};

/// Depth raster in mm; 0 marks an invalid pixel.
struct DepthImage {
  CameraIntrinsics intrinsics;
  std::vector<double> data;  // row-major, width*height

  DepthImage() = default;
  explicit DepthImage(const CameraIntrinsics& intr)
      : intrinsics(intr),
        data(static_cast<std::size_t>(intr.width) * intr.height, 0.0) {}

  int width() const { return intrinsics.width; }
  int height() const { return intrinsics.height; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width() + x]; }
  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width() + x]; }
};

/// Back-projects masked valid pixels to camera-space points, row-major pixel order.
/// Throws if mask dimensions differ from the depth image.
PointCloud project_depth(const DepthImage& depth, const BitMask& mask);

/// Uniform area-weighted surface sampling; deterministic for a fixed seed.
/// Throws on n == 0 or a zero-area mesh.
PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed);

/// Max distance from the cloud centroid to any point. Throws on an empty cloud.
double circumradius(const PointCloud& cloud);

Vec3 centroid(const PointCloud& cloud);

/// Applies the rigid transform to points; normals are rotated only.
PointCloud apply_pose(const Pose& pose, const PointCloud& cloud);

/// Max pairwise vertex distance. Throws with fewer than 2 vertices.
double mesh_diameter(const TriangleMesh& mesh);

}  // namespace zspose
