#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "zspose/hierarchy.hpp"
#include "zspose/io/zspf.hpp"
#include "zspose/procedural.hpp"
#include "zspose/random.hpp"

using namespace zspose;

namespace {

PointCloud blob_surface(std::uint64_t seed, int n = 1200) {
  const TriangleMesh mesh = make_bump_blob(30.0, 2, 6, seed);
  return sample_surface(mesh, n, seed + 1);
}

HierarchicalCloud transformed_copy(const HierarchicalCloud& h, const Pose& p) {
  HierarchicalCloud out;
  out.fine_points = apply_pose(p, h.fine_points);
  out.coarse_points = apply_pose(p, h.coarse_points);
  out.fine_points.normals.clear();
  out.coarse_points.normals.clear();
  out.assignment = h.assignment;
  return out;
}

}  // namespace

TEST_CASE("build_hierarchy handles a single point") {
  PointCloud one;
  one.points = {{1, 2, 3}};
  const HierarchicalCloud h = build_hierarchy(one, 0.5, 1.0);
  REQUIRE(h.fine_points.size() == 1);
  REQUIRE(h.coarse_points.size() == 1);
  CHECK(h.assignment == std::vector<int>{0});
  CHECK((h.fine_points.points[0] - Vec3(1, 2, 3)).norm() < 1e-15);
}

TEST_CASE("build_hierarchy keeps lattice points separate at half spacing") {
  PointCloud lattice;
  const double s = 2.0;
  for (int x = 0; x < 10; ++x)
    for (int y = 0; y < 10; ++y)
      for (int z = 0; z < 10; ++z) lattice.points.emplace_back(x * s, y * s, z * s);
  const HierarchicalCloud h = build_hierarchy(lattice, s / 2.0, 4 * s);
  CHECK(h.fine_points.size() == 1000);
  CHECK(h.coarse_points.size() < 1000);
}

TEST_CASE("build_hierarchy assignment matches the brute-force nearest coarse point") {
  const PointCloud cloud = blob_surface(42);
  const HierarchicalCloud h = build_hierarchy(cloud, 2.0, 8.0);
  REQUIRE(h.assignment.size() == h.fine_points.size());
  for (std::size_t i = 0; i < h.fine_points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_j = -1;
    for (std::size_t j = 0; j < h.coarse_points.size(); ++j) {
      const double d = (h.fine_points.points[i] - h.coarse_points.points[j]).norm();
      if (d < best) {
        best = d;
        best_j = static_cast<int>(j);
      }
    }
    const double assigned =
        (h.fine_points.points[i] - h.coarse_points.points[h.assignment[i]]).norm();
    CHECK(assigned == doctest::Approx(best).epsilon(1e-12));
    (void)best_j;
  }
}

TEST_CASE("build_hierarchy validates inputs") {
  CHECK_THROWS_AS(build_hierarchy(PointCloud{}, 1.0, 2.0), std::invalid_argument);
  PointCloud one;
  one.points = {{0, 0, 0}};
  CHECK_THROWS_AS(build_hierarchy(one, 2.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_hierarchy(one, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("hierarchy geometry is equivariant for sparse clouds") {
  // spacing >> coarse voxel keeps every voxel a singleton, so binning cannot
  // merge differently after the transform
  PointCloud sparse;
  Rng rng(9);
  for (int i = 0; i < 60; ++i) sparse.points.push_back(random_in_ball(rng, 100.0));
  const double fine_voxel = 0.05, coarse_voxel = 0.1;

  const HierarchicalCloud h = build_hierarchy(sparse, fine_voxel, coarse_voxel);
  REQUIRE(h.fine_points.size() == sparse.size());

  const Pose p(random_rotation(rng), Vec3(3, -8, 12));
  const HierarchicalCloud ht = build_hierarchy(apply_pose(p, sparse), fine_voxel, coarse_voxel);
  REQUIRE(ht.fine_points.size() == h.fine_points.size());

  // compare as sets: every transformed original appears exactly once
  for (const Vec3& q : h.fine_points.points) {
    const Vec3 expected = p * q;
    int hits = 0;
    for (const Vec3& r : ht.fine_points.points)
      if ((r - expected).norm() < 1e-9) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("describe fills unit-norm features at both levels") {
  const PointCloud cloud = blob_surface(7);
  HierarchicalCloud h = build_hierarchy(cloud, 2.0, 8.0);
  describe(h, 4.0, 16.0, NormalOrientation::away_from_centroid);

  REQUIRE(h.fine_features.rows() == static_cast<Eigen::Index>(h.fine_points.size()));
  REQUIRE(h.coarse_features.rows() == static_cast<Eigen::Index>(h.coarse_points.size()));
  CHECK(h.fine_features.cols() == kFineFeatureBins);
  CHECK(h.coarse_features.cols() == kCoarseFeatureBins);
  for (Eigen::Index i = 0; i < h.fine_features.rows(); ++i)
    CHECK(h.fine_features.row(i).norm() == doctest::Approx(1.0).epsilon(1e-6));
  for (Eigen::Index i = 0; i < h.coarse_features.rows(); ++i)
    CHECK(h.coarse_features.row(i).norm() == doctest::Approx(1.0).epsilon(1e-6));

  // determinism
  HierarchicalCloud h2 = build_hierarchy(cloud, 2.0, 8.0);
  describe(h2, 4.0, 16.0, NormalOrientation::away_from_centroid);
  CHECK(h.fine_features == h2.fine_features);
  CHECK(h.coarse_features == h2.coarse_features);
}

TEST_CASE("descriptors are invariant under rigid motion within 1e-4") {
  const PointCloud cloud = blob_surface(21);
  HierarchicalCloud h = build_hierarchy(cloud, 2.0, 8.0);

  Rng rng(22);
  const Pose p(random_rotation(rng), Vec3(40, -17, 60));
  HierarchicalCloud ht = transformed_copy(h, p);

  describe(h, 4.0, 16.0, NormalOrientation::away_from_centroid);
  describe(ht, 4.0, 16.0, NormalOrientation::away_from_centroid);

  REQUIRE(h.fine_features.rows() == ht.fine_features.rows());
  double worst_fine = 0.0, worst_coarse = 0.0;
  for (Eigen::Index i = 0; i < h.fine_features.rows(); ++i)
    worst_fine = std::max(worst_fine,
                          (h.fine_features.row(i) - ht.fine_features.row(i)).norm());
  for (Eigen::Index i = 0; i < h.coarse_features.rows(); ++i)
    worst_coarse = std::max(worst_coarse,
                            (h.coarse_features.row(i) - ht.coarse_features.row(i)).norm());
  CHECK(worst_fine < 1e-4);
  CHECK(worst_coarse < 1e-4);
}

TEST_CASE("plane and sphere patches are distinguishable") {
  PointCloud plane;
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 20; ++y) plane.points.emplace_back(x * 1.0, y * 1.0, 0.0);

  PointCloud sphere_patch;
  const double radius = 12.0;
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 20; ++y) {
      const double dx = (x - 9.5), dy = (y - 9.5);
      const double d_sq = dx * dx + dy * dy;
      if (d_sq >= radius * radius) continue;
      sphere_patch.points.emplace_back(dx + 9.5, dy + 9.5,
                                       radius - std::sqrt(radius * radius - d_sq));
    }

  HierarchicalCloud hp = build_hierarchy(plane, 0.9, 5.0);
  HierarchicalCloud hs = build_hierarchy(sphere_patch, 0.9, 5.0);
  describe(hp, 3.0, 8.0, NormalOrientation::away_from_centroid);
  describe(hs, 3.0, 8.0, NormalOrientation::away_from_centroid);

  const Eigen::RowVectorXd mean_plane = hp.fine_features.colwise().mean();
  const Eigen::RowVectorXd mean_sphere = hs.fine_features.colwise().mean();
  const double cosine =
      mean_plane.dot(mean_sphere) / (mean_plane.norm() * mean_sphere.norm());
  CHECK(cosine < 0.95);
}

TEST_CASE("describe rejects clouds too small for normal estimation") {
  PointCloud tiny;
  for (int i = 0; i < 10; ++i) tiny.points.emplace_back(i * 1.0, 0.5 * i, 0.0);
  HierarchicalCloud h = build_hierarchy(tiny, 0.1, 0.5);
  CHECK_THROWS_AS(describe(h, 1.0, 2.0, NormalOrientation::away_from_centroid),
                  std::invalid_argument);
}

TEST_CASE("ingest_features replaces and re-normalizes descriptor matrices") {
  const PointCloud cloud = blob_surface(13, 400);
  HierarchicalCloud h = build_hierarchy(cloud, 3.0, 10.0);

  Rng rng(5);
  Eigen::MatrixXd fine(h.fine_points.size(), 8);
  Eigen::MatrixXd coarse(h.coarse_points.size(), 4);
  for (Eigen::Index i = 0; i < fine.rows(); ++i)
    for (Eigen::Index j = 0; j < fine.cols(); ++j) fine(i, j) = gaussian(rng) * 3.0;
  for (Eigen::Index i = 0; i < coarse.rows(); ++i)
    for (Eigen::Index j = 0; j < coarse.cols(); ++j) coarse(i, j) = gaussian(rng) * 3.0;

  ingest_features(h, fine, coarse);
  for (Eigen::Index i = 0; i < h.fine_features.rows(); ++i)
    CHECK(h.fine_features.row(i).norm() == doctest::Approx(1.0).epsilon(1e-9));

  // round-trip through the binary feature format
  save_feature_file("/tmp/zspose_fine.zspf", fine);
  save_feature_file("/tmp/zspose_coarse.zspf", coarse);
  HierarchicalCloud h2 = build_hierarchy(cloud, 3.0, 10.0);
  ingest_features(h2, std::string("/tmp/zspose_fine.zspf"),
                  std::string("/tmp/zspose_coarse.zspf"));
  CHECK((h.fine_features - h2.fine_features).cwiseAbs().maxCoeff() < 1e-6);

  // wrong row count and zero rows are rejected
  Eigen::MatrixXd wrong(fine.rows() + 1, fine.cols());
  wrong.setOnes();
  CHECK_THROWS_AS(ingest_features(h, wrong, coarse), std::invalid_argument);
  Eigen::MatrixXd zero_row = fine;
  zero_row.row(0).setZero();
  CHECK_THROWS_AS(ingest_features(h, zero_row, coarse), std::invalid_argument);
}
