#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zspose/geometry.hpp"
#include "zspose/hierarchy.hpp"
#include "zspose/instance_labeling.hpp"
#include "zspose/matching.hpp"
#include "zspose/mean_shift.hpp"
#include "zspose/metrics.hpp"
#include "zspose/pipeline.hpp"
#include "zspose/procedural.hpp"
#include "zspose/registration.hpp"
#include "zspose/renderer.hpp"
#include "zspose/view_sampling.hpp"

namespace py = pybind11;
using namespace zspose;

namespace {

PointCloud cloud_from_array(const Eigen::MatrixXd& pts) {
  if (pts.cols() != 3) throw std::invalid_argument("points must have shape (n, 3)");
  PointCloud cloud;
  cloud.points.reserve(pts.rows());
  for (Eigen::Index i = 0; i < pts.rows(); ++i) cloud.points.push_back(pts.row(i).transpose());
  return cloud;
}

Eigen::MatrixXd cloud_to_array(const PointCloud& cloud) {
  Eigen::MatrixXd m(cloud.size(), 3);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    m.row(static_cast<Eigen::Index>(i)) = cloud.points[i].transpose();
  return m;
}

TriangleMesh mesh_from_arrays(const Eigen::MatrixXd& vertices,
                              const Eigen::MatrixXi& triangles) {
  if (vertices.cols() != 3 || triangles.cols() != 3)
    throw std::invalid_argument("vertices and triangles must have shape (n, 3)");
  TriangleMesh mesh;
  for (Eigen::Index i = 0; i < vertices.rows(); ++i)
    mesh.vertices.push_back(vertices.row(i).transpose());
  for (Eigen::Index i = 0; i < triangles.rows(); ++i)
    mesh.triangles.push_back({triangles(i, 0), triangles(i, 1), triangles(i, 2)});
  mesh.validate();
  return mesh;
}

}  // namespace

PYBIND11_MODULE(_zspose, m) {
  m.doc() = "Zero-shot 6D pose estimation toolkit (C++ core)";

  py::class_<Pose>(m, "Pose")
      .def(py::init<>())
      .def(py::init([](const Mat3& r, const Vec3& t) { return Pose(r, t); }), py::arg("rotation"),
           py::arg("translation"))
      .def_property_readonly("rotation", [](const Pose& p) { return p.rotation.m; })
      .def_property_readonly("translation", [](const Pose& p) { return p.translation; })
      .def("inverse", &Pose::inverse)
      .def("__matmul__", [](const Pose& a, const Pose& b) { return a * b; })
      .def("apply", [](const Pose& p, const Eigen::MatrixXd& pts) {
        return cloud_to_array(apply_pose(p, cloud_from_array(pts)));
      });

  py::class_<RegistrationResult>(m, "RegistrationResult")
      .def_property_readonly("pose", [](const RegistrationResult& r) { return r.pose; })
      .def_readonly("inlier_count", &RegistrationResult::inlier_count)
      .def_readonly("rmse", &RegistrationResult::rmse)
      .def_readonly("score", &RegistrationResult::score);

  m.def(
      "kabsch",
      [](const Eigen::MatrixXd& model, const Eigen::MatrixXd& scene,
         const std::vector<double>& weights) {
        const PointCloud m_cloud = cloud_from_array(model);
        const PointCloud s_cloud = cloud_from_array(scene);
        const Pose pose = weights.empty() ? kabsch(m_cloud, s_cloud)
                                          : kabsch(m_cloud, s_cloud, weights);
        return pose;
      },
      py::arg("model_points"), py::arg("scene_points"),
      py::arg("weights") = std::vector<double>{},
      "Weighted least-squares rigid alignment via SVD");

  m.def(
      "mean_shift_foreground",
      [](const Eigen::MatrixXd& pts, double bandwidth) {
        const PointCloud cloud = cloud_from_array(pts);
        const ClusterResult result = mean_shift(cloud, bandwidth);
        return cloud_to_array(select_foreground(cloud, result));
      },
      py::arg("points"), py::arg("bandwidth"),
      "Keep the most populous mean-shift cluster (flat kernel)");

  m.def(
      "mean_shift_labels",
      [](const Eigen::MatrixXd& pts, double bandwidth) {
        const ClusterResult result = mean_shift(cloud_from_array(pts), bandwidth);
        return py::make_tuple(result.labels, result.counts);
      },
      py::arg("points"), py::arg("bandwidth"));

  m.def(
      "circumradius",
      [](const Eigen::MatrixXd& pts) { return circumradius(cloud_from_array(pts)); },
      py::arg("points"));

  m.def(
      "sample_so3",
      [](std::size_t n) {
        std::vector<Mat3> out;
        for (const Rotation& r : sample_so3(n)) out.push_back(r.m);
        return out;
      },
      py::arg("n"), "Deterministic low-dispersion rotation set");

  m.def(
      "sample_surface",
      [](const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& triangles, std::size_t n,
         std::uint64_t seed) {
        return cloud_to_array(sample_surface(mesh_from_arrays(vertices, triangles), n, seed));
      },
      py::arg("vertices"), py::arg("triangles"), py::arg("n"), py::arg("seed") = 0);

  m.def(
      "mesh_diameter",
      [](const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& triangles) {
        return mesh_diameter(mesh_from_arrays(vertices, triangles));
      },
      py::arg("vertices"), py::arg("triangles"));

  m.def(
      "render_depth",
      [](const Eigen::MatrixXd& vertices, const Eigen::MatrixXi& triangles, const Pose& pose,
         double fx, double fy, double cx, double cy, int width, int height) {
        const CameraIntrinsics cam{fx, fy, cx, cy, width, height};
        const RenderedDepth out = render_depth(mesh_from_arrays(vertices, triangles), pose, cam);
        py::array_t<double> img({height, width});
        auto buf = img.mutable_unchecked<2>();
        for (int y = 0; y < height; ++y)
          for (int x = 0; x < width; ++x) buf(y, x) = out.depth.at(x, y);
        return img;
      },
      py::arg("vertices"), py::arg("triangles"), py::arg("pose"), py::arg("fx"), py::arg("fy"),
      py::arg("cx"), py::arg("cy"), py::arg("width"), py::arg("height"),
      "CPU z-buffer depth render (mm, 0 = background)");

  m.def(
      "mssd",
      [](const Pose& pred, const Pose& gt, const Eigen::MatrixXd& vertices,
         const Eigen::MatrixXi& triangles) {
        return mssd(pred, gt, mesh_from_arrays(vertices, triangles));
      },
      py::arg("pred"), py::arg("gt"), py::arg("vertices"), py::arg("triangles"));

  m.def(
      "mspd",
      [](const Pose& pred, const Pose& gt, const Eigen::MatrixXd& vertices,
         const Eigen::MatrixXi& triangles, double fx, double fy, double cx, double cy, int width,
         int height) {
        return mspd(pred, gt, mesh_from_arrays(vertices, triangles),
                    CameraIntrinsics{fx, fy, cx, cy, width, height});
      },
      py::arg("pred"), py::arg("gt"), py::arg("vertices"), py::arg("triangles"), py::arg("fx"),
      py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"), py::arg("height"));

  m.def(
      "register_clouds",
      [](const Eigen::MatrixXd& model_pts, const Eigen::MatrixXd& scene_pts, double fine_voxel,
         double coarse_voxel, double inlier_radius) {
        HierarchicalCloud model = build_hierarchy(cloud_from_array(model_pts), fine_voxel,
                                                  coarse_voxel);
        HierarchicalCloud scene = build_hierarchy(cloud_from_array(scene_pts), fine_voxel,
                                                  coarse_voxel);
        describe(model, 2 * fine_voxel, 2 * coarse_voxel,
                 NormalOrientation::away_from_centroid);
        describe(scene, 2 * fine_voxel, 2 * coarse_voxel, NormalOrientation::toward_origin);
        const auto pairs = coarse_match(model, scene, 64);
        const auto corr = fine_match(model, scene, pairs);
        RegisterParams params;
        params.inlier_radius = inlier_radius;
        return register_clouds(model, scene, corr, params);
      },
      py::arg("model_points"), py::arg("scene_points"), py::arg("fine_voxel"),
      py::arg("coarse_voxel"), py::arg("inlier_radius") = 0.0,
      "Hierarchical descriptor matching + local-to-global registration");

  m.def(
      "similarity_assign",
      [](const Eigen::MatrixXd& scene_rows, const std::vector<int>& mask_ids,
         const Eigen::MatrixXd& template_rows, const std::vector<int>& object_ids, int views,
         double threshold) {
        const auto scene = make_embeddings(scene_rows, mask_ids);
        const auto templates = make_template_embeddings(template_rows, object_ids, views);
        const auto assignments = assign(similarity(scene, templates), threshold);
        py::list out;
        for (const auto& a : assignments)
          out.append(py::make_tuple(a.mask_id, a.object_id, a.score));
        return out;
      },
      py::arg("scene_rows"), py::arg("mask_ids"), py::arg("template_rows"),
      py::arg("object_ids"), py::arg("views"), py::arg("threshold") = 0.5,
      "Cosine similarity tensor + thresholded argmax labeling");

  m.def("make_bump_blob",
        [](double radius, int subdivisions, int bumps, std::uint64_t seed) {
          const TriangleMesh mesh = make_bump_blob(radius, subdivisions, bumps, seed);
          Eigen::MatrixXd v(mesh.vertices.size(), 3);
          Eigen::MatrixXi t(mesh.triangles.size(), 3);
          for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
            v.row(static_cast<Eigen::Index>(i)) = mesh.vertices[i].transpose();
          for (std::size_t i = 0; i < mesh.triangles.size(); ++i)
            for (int k = 0; k < 3; ++k) t(static_cast<Eigen::Index>(i), k) = mesh.triangles[i][k];
          return py::make_tuple(v, t);
        },
        py::arg("radius"), py::arg("subdivisions") = 3, py::arg("bumps") = 8,
        py::arg("seed") = 7);

  m.attr("__version__") = "0.1.0";
}
