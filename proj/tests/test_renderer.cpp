#include <doctest.h>

#include <cmath>

#include "zspose/procedural.hpp"
#include "zspose/random.hpp"
#include "zspose/renderer.hpp"

using namespace zspose;

namespace {

TriangleMesh square_at(double z, double half, double offset_x = 0.0) {
  TriangleMesh mesh;
  mesh.vertices = {{offset_x - half, -half, z},
                   {offset_x + half, -half, z},
                   {offset_x + half, half, z},
                   {offset_x - half, half, z}};
  mesh.triangles = {{0, 1, 2}, {0, 2, 3}};
  return mesh;
}

const CameraIntrinsics kCam{500.0, 500.0, 320.0, 240.0, 640, 480};

}  // namespace

TEST_CASE("a fronto-parallel square renders at constant depth") {
  const TriangleMesh square = square_at(1000.0, 100.0);
  const RenderedDepth out = render_depth(square, Pose::identity(), kCam);

  REQUIRE(out.object_mask.count() > 0);
  for (int y = 0; y < kCam.height; ++y)
    for (int x = 0; x < kCam.width; ++x) {
      if (!out.object_mask.at(x, y)) {
        CHECK(out.depth.at(x, y) == 0.0);
        continue;
      }
      CHECK(std::abs(out.depth.at(x, y) - 1000.0) < 1e-6);
    }

  // mask is exactly depth > 0, and its extent matches the projected square
  const double expected_half_px = 500.0 * 100.0 / 1000.0;
  const std::size_t expected_area =
      static_cast<std::size_t>((2 * expected_half_px + 1) * (2 * expected_half_px + 1));
  CHECK(std::abs(static_cast<double>(out.object_mask.count()) -
                 static_cast<double>(expected_area)) /
            expected_area <
        0.05);
}

TEST_CASE("the z-buffer keeps the nearer of two overlapping squares") {
  TriangleMesh both = square_at(500.0, 50.0);
  const TriangleMesh behind = square_at(800.0, 50.0, 30.0);
  const int base = static_cast<int>(both.vertices.size());
  for (const Vec3& v : behind.vertices) both.vertices.push_back(v);
  for (const auto& t : behind.triangles)
    both.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});

  const RenderedDepth out = render_depth(both, Pose::identity(), kCam);
  // a pixel covered by both squares reads the nearer depth
  const Eigen::Vector2d overlap_px = kCam.project(Vec3(25.0, 0.0, 500.0));
  CHECK(out.depth.at(static_cast<int>(overlap_px.x()), static_cast<int>(overlap_px.y())) ==
        doctest::Approx(500.0).epsilon(1e-9));
  // a pixel covered only by the far square reads the far depth
  const Eigen::Vector2d behind_px = kCam.project(Vec3(70.0, 0.0, 800.0));
  CHECK(out.depth.at(static_cast<int>(behind_px.x()), static_cast<int>(behind_px.y())) ==
        doctest::Approx(800.0).epsilon(1e-9));
}

TEST_CASE("sphere depths match the analytic ray-sphere intersection within 1%") {
  const double radius = 80.0;
  const Vec3 center(0, 0, 700.0);
  const TriangleMesh sphere = make_icosphere(radius, 4);
  const RenderedDepth out = render_depth(sphere, Pose(Mat3::Identity(), center), kCam);

  REQUIRE(out.object_mask.count() > 1000);
  for (int y = 0; y < kCam.height; y += 3)
    for (int x = 0; x < kCam.width; x += 3) {
      if (!out.object_mask.at(x, y)) continue;
      const Vec3 dir((x - kCam.cx) / kCam.fx, (y - kCam.cy) / kCam.fy, 1.0);
      // smallest positive t with |t*dir - center| = radius; depth = t (z = t * dir.z)
      const double a = dir.squaredNorm();
      const double b = -2.0 * dir.dot(center);
      const double c = center.squaredNorm() - radius * radius;
      const double disc = b * b - 4 * a * c;
      if (disc < 0) continue;  // silhouette pixel, tessellation overhang
      const double t = (-b - std::sqrt(disc)) / (2 * a);
      CHECK(std::abs(out.depth.at(x, y) - t) < 0.01 * radius);
    }
}

TEST_CASE("rendered depths stay within the posed vertex depth range") {
  Rng rng(80);
  const TriangleMesh blob = make_bump_blob(50.0, 3, 7, 81);
  const Pose pose(random_rotation(rng), Vec3(20, -10, 600));

  double z_min = std::numeric_limits<double>::infinity(), z_max = 0.0;
  for (const Vec3& v : blob.vertices) {
    const double z = (pose * v).z();
    z_min = std::min(z_min, z);
    z_max = std::max(z_max, z);
  }

  const RenderedDepth out = render_depth(blob, pose, kCam);
  for (int y = 0; y < kCam.height; ++y)
    for (int x = 0; x < kCam.width; ++x) {
      if (!out.object_mask.at(x, y)) continue;
      CHECK(out.depth.at(x, y) >= z_min - 1e-9);
      CHECK(out.depth.at(x, y) <= z_max + 1e-9);
    }
}

TEST_CASE("translating along the optical axis shifts every covered depth by delta") {
  const TriangleMesh blob = make_bump_blob(40.0, 2, 5, 82);
  const Pose near(Mat3::Identity(), Vec3(0, 0, 600));
  const double delta = 50.0;
  const Pose far(Mat3::Identity(), Vec3(0, 0, 600 + delta));

  const RenderedDepth a = render_depth(blob, near, kCam);
  const RenderedDepth b = render_depth(blob, far, kCam);

  // compare where both cover (silhouette shrinks slightly with distance)
  int compared = 0;
  for (int y = 0; y < kCam.height; ++y)
    for (int x = 0; x < kCam.width; ++x) {
      if (!a.object_mask.at(x, y) || !b.object_mask.at(x, y)) continue;
      // the far render views the surface under a slightly different ray, so
      // allow the geometric tolerance of one pixel footprint
      CHECK(std::abs(b.depth.at(x, y) - a.depth.at(x, y) - delta) < 1.0);
      ++compared;
    }
  CHECK(compared > 500);
}

TEST_CASE("posed vertices project inside the dilated mask; behind-camera is empty") {
  Rng rng(83);
  const TriangleMesh blob = make_bump_blob(45.0, 2, 6, 84);
  const Pose pose(random_rotation(rng), Vec3(-30, 15, 650));
  const RenderedDepth out = render_depth(blob, pose, kCam);

  for (const Vec3& v : blob.vertices) {
    const Vec3 p = pose * v;
    const Eigen::Vector2d px = kCam.project(p);
    const int x = static_cast<int>(std::round(px.x()));
    const int y = static_cast<int>(std::round(px.y()));
    bool covered = false;
    for (int dy = -1; dy <= 1 && !covered; ++dy)
      for (int dx = -1; dx <= 1 && !covered; ++dx) {
        const int xx = x + dx, yy = y + dy;
        if (xx < 0 || yy < 0 || xx >= kCam.width || yy >= kCam.height) continue;
        covered = out.object_mask.at(xx, yy);
      }
    CHECK(covered);
  }

  const RenderedDepth empty = render_depth(blob, Pose(Mat3::Identity(), Vec3(0, 0, -500)), kCam);
  CHECK(empty.object_mask.count() == 0);
}

TEST_CASE("flat translation along the optical axis is exact") {
  // fully in frustum, fronto-parallel: +delta on z adds exactly delta
  const TriangleMesh square = square_at(1000.0, 80.0);
  const RenderedDepth a = render_depth(square, Pose::identity(), kCam);
  const RenderedDepth b = render_depth(square, Pose(Mat3::Identity(), Vec3(0, 0, 250.0)), kCam);
  for (int y = 0; y < kCam.height; ++y)
    for (int x = 0; x < kCam.width; ++x) {
      if (!b.object_mask.at(x, y)) continue;
      REQUIRE(a.object_mask.at(x, y));
      CHECK(std::abs(b.depth.at(x, y) - a.depth.at(x, y) - 250.0) < 1e-6);
    }
}
