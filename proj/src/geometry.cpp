#include "zspose/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "zspose/random.hpp"

namespace zspose {

bool Rotation::is_valid(double tol) const {
  const Mat3 err = m.transpose() * m - Mat3::Identity();
  if (err.cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

double Rotation::angle_to(const Rotation& o) const {
  const double c = ((m.transpose() * o.m).trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

Eigen::Vector4d Rotation::quaternion() const {
  Eigen::Quaterniond q(m);
  q.normalize();
  if (q.w() < 0) q.coeffs() *= -1.0;
  return {q.w(), q.x(), q.y(), q.z()};
}

std::size_t BitMask::count() const {
  return static_cast<std::size_t>(
      std::count_if(data.begin(), data.end(), [](std::uint8_t v) { return v != 0; }));
}

void TriangleMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& t : triangles) {
    for (int idx : t) {
      if (idx < 0 || idx >= n) throw std::invalid_argument("triangle index out of range");
    }
    const Vec3 e1 = vertices[t[1]] - vertices[t[0]];
    const Vec3 e2 = vertices[t[2]] - vertices[t[0]];
    if (e1.cross(e2).norm() <= 0.0) throw std::invalid_argument("degenerate triangle (zero area)");
  }
}

double TriangleMesh::surface_area() const {
  double area = 0.0;
  for (const auto& t : triangles) {
    const Vec3 e1 = vertices[t[1]] - vertices[t[0]];
    const Vec3 e2 = vertices[t[2]] - vertices[t[0]];
    area += 0.5 * e1.cross(e2).norm();
  }
  return area;
}

PointCloud project_depth(const DepthImage& depth, const BitMask& mask) {
  if (mask.width != depth.width() || mask.height != depth.height())
    throw std::invalid_argument("mask dimensions do not match depth image");
  const CameraIntrinsics& in = depth.intrinsics;
  PointCloud cloud;
  for (int v = 0; v < depth.height(); ++v) {
    for (int u = 0; u < depth.width(); ++u) {
      if (!mask.at(u, v)) continue;
      const double d = depth.at(u, v);
      if (d <= 0.0) continue;
      cloud.points.emplace_back((u - in.cx) * d / in.fx, (v - in.cy) * d / in.fy, d);
    }
  }
  return cloud;
}

PointCloud sample_surface(const TriangleMesh& mesh, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample count must be >= 1");
  mesh.validate();

  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    total += 0.5 * e1.cross(e2).norm();
    cumulative[i] = total;
  }
  if (!(total > 0.0)) throw std::invalid_argument("mesh has zero surface area");

  Rng rng(seed);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pick = uniform01(rng) * total;
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), pick);
    const std::size_t face = std::min<std::size_t>(
        static_cast<std::size_t>(it - cumulative.begin()), mesh.triangles.size() - 1);
    const auto& t = mesh.triangles[face];
    // square-root parameterization gives uniform barycentric coordinates
    const double r1 = std::sqrt(uniform01(rng));
    const double r2 = uniform01(rng);
    const Vec3 p = (1.0 - r1) * mesh.vertices[t[0]] +
                   r1 * (1.0 - r2) * mesh.vertices[t[1]] +
                   r1 * r2 * mesh.vertices[t[2]];
    cloud.points.push_back(p);
  }
  return cloud;
}

Vec3 centroid(const PointCloud& cloud) {
  if (cloud.empty()) throw std::invalid_argument("empty point cloud");
  Vec3 sum = Vec3::Zero();
  for (const Vec3& p : cloud.points) sum += p;
  return sum / static_cast<double>(cloud.size());
}

double circumradius(const PointCloud& cloud) {
  const Vec3 c = centroid(cloud);
  double max_sq = 0.0;
  for (const Vec3& p : cloud.points) max_sq = std::max(max_sq, (p - c).squaredNorm());
  return std::sqrt(max_sq);
}

PointCloud apply_pose(const Pose& pose, const PointCloud& cloud) {
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const Vec3& p : cloud.points) out.points.push_back(pose * p);
  out.normals.reserve(cloud.normals.size());
  for (const Vec3& nrm : cloud.normals) out.normals.push_back(pose.rotation * nrm);
  return out;
}

double mesh_diameter(const TriangleMesh& mesh) {
  if (mesh.vertices.size() < 2) throw std::invalid_argument("mesh diameter needs >= 2 vertices");
  double max_sq = 0.0;
  for (std::size_t i = 0; i + 1 < mesh.vertices.size(); ++i)
    for (std::size_t j = i + 1; j < mesh.vertices.size(); ++j)
      max_sq = std::max(max_sq, (mesh.vertices[i] - mesh.vertices[j]).squaredNorm());
  return std::sqrt(max_sq);
}

}  // namespace zspose
