#pragma once

#include <vector>

#include "zspose/geometry.hpp"

namespace zspose {

/// Flat-kernel mean-shift clustering outcome. Labels index into modes;
/// counts sum to the point count; modes are pairwise >= bandwidth/2 apart.
struct ClusterResult {
  std::vector<int> labels;
  std::vector<Vec3> modes;
  std::vector<int> counts;
};

/// Mean-shift with a flat (uniform ball) kernel of radius = bandwidth.
///
/// Seeds are binned on a grid of cell = bandwidth/2 so duplicated starts are
/// walked once; iteration stops when the shift drops below bandwidth * 1e-4
/// or after 300 rounds. Converged modes closer than bandwidth/2 are merged in
/// a canonical order (sorted by mode coordinates), which keeps the result
/// independent of thread count.
ClusterResult mean_shift(const PointCloud& cloud, double bandwidth);

/// Subset of cloud in the most populous cluster. Ties go to the cluster whose
/// members lie closest (on average) to the cloud centroid, then to the lower
/// cluster id.
PointCloud select_foreground(const PointCloud& cloud, const ClusterResult& result);

/// Indices (ascending) of the points select_foreground keeps.
std::vector<int> foreground_indices(const PointCloud& cloud, const ClusterResult& result);

}  // namespace zspose
