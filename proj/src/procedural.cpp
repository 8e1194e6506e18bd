#include "zspose/procedural.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "zspose/random.hpp"

namespace zspose {

TriangleMesh make_box(double size_x, double size_y, double size_z) {
  const double hx = size_x / 2, hy = size_y / 2, hz = size_z / 2;
  TriangleMesh mesh;
  mesh.vertices = {{-hx, -hy, -hz}, {hx, -hy, -hz}, {hx, hy, -hz}, {-hx, hy, -hz},
                   {-hx, -hy, hz},  {hx, -hy, hz},  {hx, hy, hz},  {-hx, hy, hz}};
  mesh.triangles = {{0, 2, 1}, {0, 3, 2},   // z = -hz
                    {4, 5, 6}, {4, 6, 7},   // z = +hz
                    {0, 1, 5}, {0, 5, 4},   // y = -hy
                    {3, 6, 2}, {3, 7, 6},   // y = +hy
                    {0, 7, 3}, {0, 4, 7},   // x = -hx
                    {1, 2, 6}, {1, 6, 5}};  // x = +hx
  return mesh;
}

namespace {

TriangleMesh icosahedron() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  mesh.vertices = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                   {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                   {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
  for (Vec3& v : mesh.vertices) v.normalize();
  mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                    {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                    {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                    {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  return mesh;
}

TriangleMesh subdivide_on_sphere(const TriangleMesh& mesh) {
  TriangleMesh out;
  out.vertices = mesh.vertices;
  std::map<std::pair<int, int>, int> midpoints;
  const auto midpoint = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    const auto it = midpoints.find(key);
    if (it != midpoints.end()) return it->second;
    const int idx = static_cast<int>(out.vertices.size());
    out.vertices.push_back(((out.vertices[a] + out.vertices[b]) / 2.0).normalized());
    midpoints[key] = idx;
    return idx;
  };
  for (const auto& t : mesh.triangles) {
    const int ab = midpoint(t[0], t[1]);
    const int bc = midpoint(t[1], t[2]);
    const int ca = midpoint(t[2], t[0]);
    out.triangles.push_back({t[0], ab, ca});
    out.triangles.push_back({t[1], bc, ab});
    out.triangles.push_back({t[2], ca, bc});
    out.triangles.push_back({ab, bc, ca});
  }
  return out;
}

}  // namespace

TriangleMesh make_icosphere(double radius, int subdivisions) {
  TriangleMesh mesh = icosahedron();
  for (int s = 0; s < subdivisions; ++s) mesh = subdivide_on_sphere(mesh);
  for (Vec3& v : mesh.vertices) v *= radius;
  return mesh;
}

TriangleMesh make_bump_blob(double base_radius, int subdivisions, int bumps,
                            std::uint64_t seed) {
  TriangleMesh mesh = make_icosphere(1.0, subdivisions);
  Rng rng(seed);
  std::vector<Vec3> centers(bumps);
  std::vector<double> amplitude(bumps), width(bumps);
  for (int b = 0; b < bumps; ++b) {
    centers[b] = random_unit_vector(rng);
    amplitude[b] = uniform_range(rng, 0.15, 0.45);
    width[b] = uniform_range(rng, 0.35, 0.8);  // radians
  }
  for (Vec3& v : mesh.vertices) {
    const Vec3 dir = v.normalized();
    double r = 1.0;
    for (int b = 0; b < bumps; ++b) {
      const double angle = std::acos(std::clamp(dir.dot(centers[b]), -1.0, 1.0));
      r += amplitude[b] * std::exp(-(angle * angle) / (2.0 * width[b] * width[b]));
    }
    v = dir * (base_radius * r);
  }
  return mesh;
}

TriangleMesh make_cylinder(double radius, double height, int segments) {
  TriangleMesh mesh;
  const double hz = height / 2.0;
  for (int i = 0; i < segments; ++i) {
    const double a = 2.0 * M_PI * i / segments;
    mesh.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), -hz);
    mesh.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), hz);
  }
  const int bottom_center = static_cast<int>(mesh.vertices.size());
  mesh.vertices.emplace_back(0, 0, -hz);
  const int top_center = bottom_center + 1;
  mesh.vertices.emplace_back(0, 0, hz);
  for (int i = 0; i < segments; ++i) {
    const int j = (i + 1) % segments;
    const int b0 = 2 * i, t0 = 2 * i + 1, b1 = 2 * j, t1 = 2 * j + 1;
    mesh.triangles.push_back({b0, b1, t1});
    mesh.triangles.push_back({b0, t1, t0});
    mesh.triangles.push_back({bottom_center, b1, b0});
    mesh.triangles.push_back({top_center, t0, t1});
  }
  return mesh;
}

}  // namespace zspose
