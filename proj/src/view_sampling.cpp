#include "zspose/view_sampling.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace zspose {

namespace {

Mat3 rotation_about_x(double a) {
  Mat3 m;
  m << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return m;
}

Mat3 rotation_about_y(double a) {
  Mat3 m;
  m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return m;
}

Mat3 rotation_about_z(double a) {
  Mat3 m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

/// Minimal rotation carrying +z onto the (unit) axis v.
Mat3 frame_from_axis(const Vec3& v) {
  const Vec3 z(0, 0, 1);
  const double c = z.dot(v);
  if (c > 1.0 - 1e-12) return Mat3::Identity();
  if (c < -1.0 + 1e-12) return rotation_about_x(M_PI);
  const Vec3 axis = z.cross(v).normalized();
  return Eigen::AngleAxisd(std::acos(std::clamp(c, -1.0, 1.0)), axis).toRotationMatrix();
}

/// Fibonacci spiral on the unit sphere, poles avoided by the half-step shift.
std::vector<Vec3> fibonacci_sphere(std::size_t n) {
  std::vector<Vec3> pts;
  pts.reserve(n);
  const double golden = M_PI * (std::sqrt(5.0) + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / static_cast<double>(n);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double theta = golden * static_cast<double>(i);
    pts.emplace_back(r * std::cos(theta), r * std::sin(theta), z);
  }
  return pts;
}

/// Splits n into (in-plane, axis) counts balancing the two angular
/// resolutions: ideal in-plane count is sqrt(pi * n_axis).
std::pair<std::size_t, std::size_t> factor_counts(std::size_t n) {
  std::size_t best_circle = 1, best_axis = n;
  double best_cost = 1e300;
  for (std::size_t circle = 1; circle <= n; ++circle) {
    if (n % circle != 0) continue;
    const std::size_t axis = n / circle;
    const double ideal = std::sqrt(M_PI * static_cast<double>(axis));
    const double cost = std::abs(std::log(static_cast<double>(circle) / ideal));
    if (cost < best_cost) {
      best_cost = cost;
      best_circle = circle;
      best_axis = axis;
    }
  }
  return {best_circle, best_axis};
}

}  // namespace

std::vector<Rotation> sample_so3(std::size_t n) {
  if (n == 0) throw std::invalid_argument("view count must be >= 1");

  if (n == 6) {
    // front, back, left, right, up, down
    return {Rotation(Mat3::Identity()),        Rotation(rotation_about_y(M_PI)),
            Rotation(rotation_about_y(M_PI_2)), Rotation(rotation_about_y(-M_PI_2)),
            Rotation(rotation_about_x(M_PI_2)), Rotation(rotation_about_x(-M_PI_2))};
  }

  const auto [n_circle, n_axis] = factor_counts(n);
  const auto axes = fibonacci_sphere(n_axis);
  const double golden_frac = (std::sqrt(5.0) - 1.0) / 2.0;

  std::vector<Rotation> rotations;
  rotations.reserve(n);
  for (std::size_t j = 0; j < n_axis; ++j) {
    const Mat3 frame = frame_from_axis(axes[j]);
    // stagger the fiber angles between neighboring axes
    const double offset = std::fmod(golden_frac * static_cast<double>(j), 1.0);
    for (std::size_t i = 0; i < n_circle; ++i) {
      const double angle =
          2.0 * M_PI * (static_cast<double>(i) + offset) / static_cast<double>(n_circle);
      rotations.emplace_back(frame * rotation_about_z(angle));
    }
  }
  return rotations;
}

std::vector<Pose> template_poses(const ViewSet& views, const Vec3& object_center) {
  if (!(views.distance > 0.0)) throw std::invalid_argument("view distance must be positive");
  std::vector<Pose> poses;
  poses.reserve(views.rotations.size());
  for (const Rotation& r : views.rotations) {
    // p_cam = R * (p - center) + (0, 0, d): the center lands on the optical
    // axis at depth d.
    const Vec3 t = Vec3(0, 0, views.distance) - r * object_center;
    poses.emplace_back(r, t);
  }
  return poses;
}

double rotation_geodesic(const Rotation& a, const Rotation& b) {
  const Eigen::Vector4d qa = a.quaternion();
  const Eigen::Vector4d qb = b.quaternion();
  return std::acos(std::clamp(std::abs(qa.dot(qb)), 0.0, 1.0));
}

void save_views_json(const std::string& path, const std::vector<Rotation>& rotations) {
  nlohmann::json out = nlohmann::json::array();
  for (const Rotation& r : rotations) {
    nlohmann::json row = nlohmann::json::array();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) row.push_back(r.m(i, j));
    out.push_back(row);
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << out.dump(2) << "\n";
}

std::vector<Rotation> load_views_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  nlohmann::json in;
  f >> in;
  std::vector<Rotation> rotations;
  for (const auto& row : in) {
    if (row.size() != 9) throw std::runtime_error("malformed view entry in " + path);
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = row[i * 3 + j].get<double>();
    rotations.emplace_back(m);
  }
  return rotations;
}

}  // namespace zspose
