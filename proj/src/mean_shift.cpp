#include "zspose/mean_shift.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

#include "zspose/parallel.hpp"
#include "zspose/spatial_grid.hpp"

namespace zspose {

namespace {

struct Seed {
  Vec3 start = Vec3::Zero();   // centroid of the bin
  std::vector<int> members;    // input points that share this bin
};

}  // namespace

ClusterResult mean_shift(const PointCloud& cloud, double bandwidth) {
  if (!(bandwidth > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (cloud.empty()) throw std::invalid_argument("empty point cloud");

  const double cell = bandwidth / 2.0;
  const int n = static_cast<int>(cloud.size());

  // Bin points; one trajectory per occupied cell.
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, Seed> bins;
  for (int i = 0; i < n; ++i) {
    const Vec3& p = cloud.points[i];
    const auto key = std::make_tuple(static_cast<std::int64_t>(std::floor(p.x() / cell)),
                                     static_cast<std::int64_t>(std::floor(p.y() / cell)),
                                     static_cast<std::int64_t>(std::floor(p.z() / cell)));
    Seed& s = bins[key];
    s.start += p;
    s.members.push_back(i);
  }
  std::vector<Seed> seeds;
  seeds.reserve(bins.size());
  for (auto& [key, seed] : bins) {
    seed.start /= static_cast<double>(seed.members.size());
    seeds.push_back(std::move(seed));
  }

  const SpatialGrid grid(cloud.points, cell);
  const double stop_shift_sq = (bandwidth * 1e-4) * (bandwidth * 1e-4);
  constexpr int kMaxIterations = 300;

  std::vector<Vec3> converged(seeds.size());
  parallel_for(seeds.size(), [&](std::size_t s) {
    Vec3 pos = seeds[s].start;
    std::vector<int> in_ball;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      grid.query_radius(pos, bandwidth, in_ball);
      if (in_ball.empty()) break;  // cannot happen for seeds from data bins
      Vec3 mean = Vec3::Zero();
      for (int idx : in_ball) mean += cloud.points[idx];
      mean /= static_cast<double>(in_ball.size());
      const double shift_sq = (mean - pos).squaredNorm();
      pos = mean;
      if (shift_sq < stop_shift_sq) break;
    }
    converged[s] = pos;
  });

  // Merge trajectories whose modes landed within bandwidth/2, visiting them
  // in coordinate order so the grouping does not depend on seed order.
  std::vector<int> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Vec3& pa = converged[a];
    const Vec3& pb = converged[b];
    return std::tie(pa.x(), pa.y(), pa.z()) < std::tie(pb.x(), pb.y(), pb.z());
  });

  const double merge_sq = (bandwidth / 2.0) * (bandwidth / 2.0);
  ClusterResult result;
  result.labels.assign(n, -1);
  std::vector<int> seed_cluster(seeds.size(), -1);
  for (int s : order) {
    int assigned = -1;
    for (std::size_t m = 0; m < result.modes.size(); ++m) {
      if ((converged[s] - result.modes[m]).squaredNorm() < merge_sq) {
        assigned = static_cast<int>(m);
        break;
      }
    }
    if (assigned < 0) {
      assigned = static_cast<int>(result.modes.size());
      result.modes.push_back(converged[s]);
      result.counts.push_back(0);
    }
    seed_cluster[s] = assigned;
  }
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (int member : seeds[s].members) result.labels[member] = seed_cluster[s];
    result.counts[seed_cluster[s]] += static_cast<int>(seeds[s].members.size());
  }
  return result;
}

std::vector<int> foreground_indices(const PointCloud& cloud, const ClusterResult& result) {
  if (result.labels.size() != cloud.size())
    throw std::invalid_argument("cluster result does not match cloud");

  const int k = static_cast<int>(result.counts.size());
  const Vec3 c = centroid(cloud);

  std::vector<double> mean_dist(k, 0.0);
  for (std::size_t i = 0; i < cloud.size(); ++i)
    mean_dist[result.labels[i]] += (cloud.points[i] - c).norm();
  for (int m = 0; m < k; ++m)
    if (result.counts[m] > 0) mean_dist[m] /= result.counts[m];

  int best = 0;
  for (int m = 1; m < k; ++m) {
    if (result.counts[m] > result.counts[best] ||
        (result.counts[m] == result.counts[best] && mean_dist[m] < mean_dist[best]))
      best = m;
  }

  std::vector<int> indices;
  indices.reserve(result.counts[best]);
  for (int i = 0; i < static_cast<int>(cloud.size()); ++i)
    if (result.labels[i] == best) indices.push_back(i);
  return indices;
}

PointCloud select_foreground(const PointCloud& cloud, const ClusterResult& result) {
  PointCloud out;
  for (int i : foreground_indices(cloud, result)) {
    out.points.push_back(cloud.points[i]);
    if (cloud.has_normals()) out.normals.push_back(cloud.normals[i]);
  }
  return out;
}

}  // namespace zspose
