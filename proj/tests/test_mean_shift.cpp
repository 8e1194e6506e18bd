#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "zspose/mean_shift.hpp"
#include "zspose/random.hpp"

using namespace zspose;

namespace {

/// Oracle: connected components of the "distance <= radius" graph.
std::vector<int> connected_components(const PointCloud& cloud, double radius) {
  const int n = static_cast<int>(cloud.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if ((cloud.points[i] - cloud.points[j]).norm() <= radius) parent[find(i)] = find(j);
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) labels[i] = find(i);
  return labels;
}

PointCloud blob(Rng& rng, const Vec3& center, double radius, int count) {
  PointCloud cloud;
  for (int i = 0; i < count; ++i) cloud.points.push_back(center + random_in_ball(rng, radius));
  return cloud;
}

void append(PointCloud& dst, const PointCloud& src) {
  dst.points.insert(dst.points.end(), src.points.begin(), src.points.end());
}

}  // namespace

TEST_CASE("mean_shift keeps a tight blob in one cluster") {
  Rng rng(1);
  const double bandwidth = 2.0;
  const PointCloud cloud = blob(rng, {5, 5, 5}, 0.1 * bandwidth, 100);
  const ClusterResult result = mean_shift(cloud, bandwidth);
  REQUIRE(result.modes.size() == 1);
  CHECK(result.counts[0] == 100);
  for (int label : result.labels) CHECK(label == 0);
}

TEST_CASE("mean_shift separates two far blobs and matches the component oracle") {
  Rng rng(2);
  const double bandwidth = 1.0;
  PointCloud cloud = blob(rng, Vec3::Zero(), 0.2, 100);
  append(cloud, blob(rng, {10 * bandwidth, 0, 0}, 0.2, 5));

  const ClusterResult result = mean_shift(cloud, bandwidth);
  REQUIRE(result.modes.size() == 2);
  std::vector<int> counts = result.counts;
  std::sort(counts.begin(), counts.end());
  CHECK(counts[0] == 5);
  CHECK(counts[1] == 100);

  // oracle: pairwise-distance connected components at radius = bandwidth
  const std::vector<int> oracle = connected_components(cloud, bandwidth);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t j = 0; j < cloud.size(); ++j) {
      const bool same_ms = result.labels[i] == result.labels[j];
      const bool same_cc = oracle[i] == oracle[j];
      CHECK(same_ms == same_cc);
    }
}

TEST_CASE("mean_shift validates its inputs and always yields a mode") {
  PointCloud cloud;
  cloud.points = {{0, 0, 0}};
  CHECK_THROWS_AS(mean_shift(cloud, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mean_shift(cloud, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(mean_shift(PointCloud{}, 1.0), std::invalid_argument);

  const ClusterResult result = mean_shift(cloud, 1.0);
  CHECK(result.modes.size() == 1);

  // invariants: counts sum to n, modes pairwise >= bandwidth/2 apart
  Rng rng(3);
  PointCloud many = blob(rng, Vec3::Zero(), 3.0, 400);
  append(many, blob(rng, {40, 0, 0}, 3.0, 100));
  const double bw = 5.0;
  const ClusterResult r = mean_shift(many, bw);
  int total = 0;
  for (int c : r.counts) total += c;
  CHECK(total == 500);
  for (std::size_t a = 0; a < r.modes.size(); ++a)
    for (std::size_t b = a + 1; b < r.modes.size(); ++b)
      CHECK((r.modes[a] - r.modes[b]).norm() >= bw / 2.0);
  for (int label : r.labels) {
    CHECK(label >= 0);
    CHECK(label < static_cast<int>(r.modes.size()));
  }
}

TEST_CASE("select_foreground keeps the most populous cluster") {
  Rng rng(4);
  const double bandwidth = 1.0;
  PointCloud cloud = blob(rng, Vec3::Zero(), 0.2, 100);
  append(cloud, blob(rng, {10, 0, 0}, 0.2, 5));

  const ClusterResult result = mean_shift(cloud, bandwidth);
  const PointCloud fg = select_foreground(cloud, result);
  CHECK(fg.size() == 100);

  // single cluster: unchanged
  const PointCloud tight = blob(rng, {1, 2, 3}, 0.1, 50);
  const ClusterResult one = mean_shift(tight, 5.0);
  const PointCloud kept = select_foreground(tight, one);
  REQUIRE(kept.size() == tight.size());
  for (std::size_t i = 0; i < kept.size(); ++i) CHECK(kept.points[i] == tight.points[i]);
}

TEST_CASE("select_foreground breaks 50/50 ties toward the centroid") {
  Rng rng(5);
  const double bandwidth = 1.0;
  // equal counts; the far blob is spread out, so its members sit farther from
  // the overall centroid than the tight blob's members
  PointCloud cloud = blob(rng, {2, 0, 0}, 0.05, 50);
  append(cloud, blob(rng, {-2, 0, 0}, 0.45, 50));

  const ClusterResult result = mean_shift(cloud, bandwidth);
  REQUIRE(result.modes.size() == 2);
  REQUIRE(result.counts[0] == 50);
  REQUIRE(result.counts[1] == 50);

  const std::vector<int> indices = foreground_indices(cloud, result);
  REQUIRE(indices.size() == 50);
  for (int idx : indices) CHECK(idx < 50);  // the tight blob came first
}

TEST_CASE("select_foreground output is a subset and filtering is idempotent") {
  Rng rng(6);
  const double bandwidth = 2.0;
  PointCloud cloud = blob(rng, Vec3::Zero(), bandwidth, 300);
  append(cloud, blob(rng, {20 * bandwidth, 0, 0}, 0.5, 20));

  const PointCloud fg = select_foreground(cloud, mean_shift(cloud, bandwidth));
  std::set<std::array<double, 3>> input_set;
  for (const Vec3& p : cloud.points) input_set.insert({p.x(), p.y(), p.z()});
  for (const Vec3& p : fg.points) CHECK(input_set.count({p.x(), p.y(), p.z()}) == 1);

  const PointCloud fg2 = select_foreground(fg, mean_shift(fg, bandwidth));
  REQUIRE(fg2.size() == fg.size());
  for (std::size_t i = 0; i < fg.size(); ++i) CHECK(fg2.points[i] == fg.points[i]);
}

TEST_CASE("planted far outliers are all removed with no inlier loss") {
  Rng rng(7);
  const double r = 50.0;
  PointCloud cloud;
  const int n_inliers = 450;
  append(cloud, blob(rng, Vec3::Zero(), r, n_inliers));
  for (int i = 0; i < 45; ++i) {  // 10% outliers beyond 5r
    const Vec3 dir = random_unit_vector(rng);
    cloud.points.push_back(dir * uniform_range(rng, 5.5 * r, 9.0 * r));
  }

  const std::vector<int> kept = foreground_indices(cloud, mean_shift(cloud, r));
  REQUIRE(kept.size() == static_cast<std::size_t>(n_inliers));
  for (std::size_t i = 0; i < kept.size(); ++i) CHECK(kept[i] == static_cast<int>(i));
}

TEST_CASE("rigidly moving the cloud selects the same point indices") {
  Rng rng(8);
  const double bandwidth = 3.0;
  PointCloud cloud = blob(rng, Vec3::Zero(), 2.0, 120);
  append(cloud, blob(rng, {30, -10, 5}, 2.0, 60));

  const std::vector<int> before = foreground_indices(cloud, mean_shift(cloud, bandwidth));
  const Pose q(random_rotation(rng), Vec3(7, 13, -2));
  const PointCloud moved = apply_pose(q, cloud);
  const std::vector<int> after = foreground_indices(moved, mean_shift(moved, bandwidth));
  CHECK(before == after);
}
