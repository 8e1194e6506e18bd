#pragma once

#include <vector>

#include "zspose/hierarchy.hpp"
#include "zspose/matching.hpp"

namespace zspose {

struct RegistrationResult {
  Pose pose;
  std::size_t inlier_count = 0;
  double rmse = 0.0;   // over the final inlier set, mm
  double score = 0.0;  // mean confidence of the inliers
};

/// Weighted least-squares rigid transform (SVD-based) minimizing
/// sum_i w_i * |R*model_i + t - scene_i|^2, det(R) = +1.
///
/// Requires >= 3 pairs, equal lengths, non-negative weights that are not all
/// zero; throws on collinear (rank-deficient) configurations. Reflections are
/// corrected by flipping the axis of the smallest singular value.
Pose kabsch(const PointCloud& model_pts, const PointCloud& scene_pts,
            const std::vector<double>& weights);

/// Unweighted convenience overload.
Pose kabsch(const PointCloud& model_pts, const PointCloud& scene_pts);

struct RegisterParams {
  double inlier_radius = 0.0;  // 0 = circumradius(model fine cloud) / 10
  int max_refit_rounds = 5;
};

/// Local-to-global pose fit: each source region with >= 3 correspondences
/// yields a Kabsch hypothesis, hypotheses are scored by inlier count over all
/// correspondences (ties by lower rmse), and the winner is refit on its
/// inliers until the set is stable, the rmse stops improving, or the round
/// limit is reached. Throws "insufficient correspondences" when no region can
/// produce a hypothesis.
RegistrationResult register_clouds(const HierarchicalCloud& model,
                                   const HierarchicalCloud& scene,
                                   const CorrespondenceSet& corr,
                                   const RegisterParams& params = {});

}  // namespace zspose
