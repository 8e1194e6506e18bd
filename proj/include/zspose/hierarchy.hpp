#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

#include "zspose/geometry.hpp"

namespace zspose {

inline constexpr int kFineFeatureBins = 33;    // 3 angles x 11 bins
inline constexpr int kCoarseFeatureBins = 66;  // 3 angles x 22 bins

/// Two-level point hierarchy: fine points carry point-match features, coarse
/// points summarize surface regions. Feature rows are L2-normalized.
struct HierarchicalCloud {
  PointCloud fine_points;
  PointCloud coarse_points;
  std::vector<int> assignment;      // fine index -> coarse index (nearest)
  Eigen::MatrixXd fine_features;    // #fine x d_f
  Eigen::MatrixXd coarse_features;  // #coarse x d_c

  bool has_features() const { return fine_features.rows() > 0 && coarse_features.rows() > 0; }
};

/// Normal orientation rule: scene clouds face the sensor at the origin,
/// model clouds face outward from their centroid.
enum class NormalOrientation { toward_origin, away_from_centroid };

/// Voxel-grid centroids at the two resolutions; every fine point is assigned
/// to its nearest coarse point. Requires 0 < fine_voxel < coarse_voxel and a
/// non-empty cloud.
HierarchicalCloud build_hierarchy(const PointCloud& cloud, double fine_voxel,
                                  double coarse_voxel);

/// PCA normals from the k nearest neighbors (the point itself included),
/// oriented by the given rule. Throws when the cloud has fewer than k points.
void estimate_normals(PointCloud& cloud, int k, NormalOrientation orientation);

/// Fills both feature levels with rotation-invariant angular histograms
/// (pairwise normal/direction triplets over the neighborhood radius,
/// soft-binned and L2-normalized). Throws when the fine cloud is too small
/// for normal estimation (< 16 points).
void describe(HierarchicalCloud& h, double radius_fine, double radius_coarse,
              NormalOrientation orientation);

/// Replaces both feature matrices, re-normalizing rows. Row counts must match
/// the hierarchy; rows of zero norm are rejected.
void ingest_features(HierarchicalCloud& h, const Eigen::MatrixXd& fine,
                     const Eigen::MatrixXd& coarse);

/// File-based variant reading the binary feature format, one file per level.
void ingest_features(HierarchicalCloud& h, const std::string& fine_file,
                     const std::string& coarse_file);

}  // namespace zspose
