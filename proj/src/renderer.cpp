#include "zspose/renderer.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "zspose/parallel.hpp"

namespace zspose {

RenderedDepth render_depth(const TriangleMesh& mesh, const Pose& pose,
                           const CameraIntrinsics& cam) {
  constexpr double kNearPlane = 1e-6;

  std::vector<Vec3> cam_pts(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) cam_pts[i] = pose * mesh.vertices[i];

  struct ScreenTri {
    Eigen::Vector2d p[3];
    double inv_z[3];
    int min_y, max_y;
  };
  std::vector<ScreenTri> tris;
  tris.reserve(mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const Vec3& a = cam_pts[t[0]];
    const Vec3& b = cam_pts[t[1]];
    const Vec3& c = cam_pts[t[2]];
    if (a.z() <= kNearPlane || b.z() <= kNearPlane || c.z() <= kNearPlane) continue;
    ScreenTri st;
    st.p[0] = cam.project(a);
    st.p[1] = cam.project(b);
    st.p[2] = cam.project(c);
    st.inv_z[0] = 1.0 / a.z();
    st.inv_z[1] = 1.0 / b.z();
    st.inv_z[2] = 1.0 / c.z();
    double min_y = st.p[0].y(), max_y = st.p[0].y();
    for (int k = 1; k < 3; ++k) {
      min_y = std::min(min_y, st.p[k].y());
      max_y = std::max(max_y, st.p[k].y());
    }
    st.min_y = std::max(0, static_cast<int>(std::ceil(min_y)));
    st.max_y = std::min(cam.height - 1, static_cast<int>(std::floor(max_y)));
    if (st.min_y > st.max_y) continue;
    tris.push_back(st);
  }

  RenderedDepth out{DepthImage(cam), BitMask(cam.width, cam.height)};

  // Row bands render independently; every triangle is visited by each band
  // but writes only its own rows, so the result matches the serial order.
  const int bands = std::max(1, std::min(thread_cap(), cam.height));
  const int rows_per_band = (cam.height + bands - 1) / bands;
  parallel_for(static_cast<std::size_t>(bands), [&](std::size_t band) {
    const int y_begin = static_cast<int>(band) * rows_per_band;
    const int y_end = std::min(cam.height, y_begin + rows_per_band);
    for (const ScreenTri& st : tris) {
      if (st.max_y < y_begin || st.min_y >= y_end) continue;
      double min_x = st.p[0].x(), max_x = st.p[0].x();
      for (int k = 1; k < 3; ++k) {
        min_x = std::min(min_x, st.p[k].x());
        max_x = std::max(max_x, st.p[k].x());
      }
      const int x0 = std::max(0, static_cast<int>(std::ceil(min_x)));
      const int x1 = std::min(cam.width - 1, static_cast<int>(std::floor(max_x)));
      if (x0 > x1) continue;

      const Eigen::Vector2d e01 = st.p[1] - st.p[0];
      const Eigen::Vector2d e02 = st.p[2] - st.p[0];
      const double det = e01.x() * e02.y() - e01.y() * e02.x();
      if (det == 0.0) continue;  // zero screen area

      const int row_lo = std::max(st.min_y, y_begin);
      const int row_hi = std::min(st.max_y, y_end - 1);
      for (int y = row_lo; y <= row_hi; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double qx = x - st.p[0].x();
          const double qy = y - st.p[0].y();
          const double l1 = (qx * e02.y() - qy * e02.x()) / det;
          const double l2 = (e01.x() * qy - e01.y() * qx) / det;
          const double l0 = 1.0 - l1 - l2;
          if (l0 < 0.0 || l1 < 0.0 || l2 < 0.0) continue;
          // 1/z interpolates linearly in screen space
          const double inv_z = l0 * st.inv_z[0] + l1 * st.inv_z[1] + l2 * st.inv_z[2];
          const double z = 1.0 / inv_z;
          double& slot = out.depth.at(x, y);
          if (slot == 0.0 || z < slot) slot = z;
        }
      }
    }
  });

  for (int y = 0; y < cam.height; ++y)
    for (int x = 0; x < cam.width; ++x)
      if (out.depth.at(x, y) > 0.0) out.object_mask.set(x, y);
  return out;
}

}  // namespace zspose
