#include "zspose/registration.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace zspose {

Pose kabsch(const PointCloud& model_pts, const PointCloud& scene_pts,
            const std::vector<double>& weights) {
  const std::size_t n = model_pts.size();
  if (n < 3) throw std::invalid_argument("kabsch needs at least 3 correspondences");
  if (scene_pts.size() != n || weights.size() != n)
    throw std::invalid_argument("kabsch input lengths differ");

  double weight_sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("kabsch weights must be non-negative");
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw std::invalid_argument("kabsch weights are all zero");

  Vec3 model_mean = Vec3::Zero(), scene_mean = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    model_mean += weights[i] * model_pts.points[i];
    scene_mean += weights[i] * scene_pts.points[i];
  }
  model_mean /= weight_sum;
  scene_mean /= weight_sum;

  Mat3 cross = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i)
    cross += weights[i] * (scene_pts.points[i] - scene_mean) *
             (model_pts.points[i] - model_mean).transpose();

  Eigen::JacobiSVD<Mat3> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sigma = svd.singularValues();
  // collinear points leave the rotation about the line undetermined
  if (sigma(1) <= 1e-12 * std::max(sigma(0), 1e-300))
    throw std::invalid_argument("kabsch configuration is rank-deficient (collinear)");

  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  const Mat3 r = svd.matrixU() * d * svd.matrixV().transpose();
  return {Rotation(r), scene_mean - r * model_mean};
}

Pose kabsch(const PointCloud& model_pts, const PointCloud& scene_pts) {
  return kabsch(model_pts, scene_pts, std::vector<double>(model_pts.size(), 1.0));
}

namespace {

struct InlierStats {
  std::vector<int> inliers;  // indices into corr.pairs, ascending
  double rmse = 0.0;
  double mean_confidence = 0.0;
};

InlierStats evaluate_pose(const Pose& pose, const CorrespondenceSet& corr,
                          const HierarchicalCloud& model, const HierarchicalCloud& scene,
                          double inlier_radius) {
  InlierStats stats;
  const double r_sq = inlier_radius * inlier_radius;
  double err_sum = 0.0, conf_sum = 0.0;
  for (int i = 0; i < static_cast<int>(corr.pairs.size()); ++i) {
    const Correspondence& c = corr.pairs[i];
    const Vec3 mapped = pose * model.fine_points.points[c.model_index];
    const double e_sq = (mapped - scene.fine_points.points[c.scene_index]).squaredNorm();
    if (e_sq < r_sq) {
      stats.inliers.push_back(i);
      err_sum += e_sq;
      conf_sum += c.confidence;
    }
  }
  if (!stats.inliers.empty()) {
    stats.rmse = std::sqrt(err_sum / static_cast<double>(stats.inliers.size()));
    stats.mean_confidence = conf_sum / static_cast<double>(stats.inliers.size());
  }
  return stats;
}

Pose fit_subset(const CorrespondenceSet& corr, const std::vector<int>& subset,
                const HierarchicalCloud& model, const HierarchicalCloud& scene) {
  PointCloud m, s;
  std::vector<double> w;
  m.points.reserve(subset.size());
  s.points.reserve(subset.size());
  w.reserve(subset.size());
  for (int i : subset) {
    const Correspondence& c = corr.pairs[i];
    m.points.push_back(model.fine_points.points[c.model_index]);
    s.points.push_back(scene.fine_points.points[c.scene_index]);
    w.push_back(c.confidence);
  }
  return kabsch(m, s, w);
}

}  // namespace

RegistrationResult register_clouds(const HierarchicalCloud& model,
                                   const HierarchicalCloud& scene,
                                   const CorrespondenceSet& corr,
                                   const RegisterParams& params) {
  if (corr.empty()) throw std::invalid_argument("insufficient correspondences");

  double inlier_radius = params.inlier_radius;
  if (!(inlier_radius > 0.0)) inlier_radius = circumradius(model.fine_points) / 10.0;

  // Hypothesis per source region pair, in canonical region order.
  std::map<std::pair<int, int>, std::vector<int>> regions;
  for (int i = 0; i < static_cast<int>(corr.pairs.size()); ++i)
    regions[{corr.pairs[i].model_region, corr.pairs[i].scene_region}].push_back(i);

  bool any_candidate_region = false;
  bool have_best = false;
  Pose best_pose;
  InlierStats best_stats;
  for (const auto& [region, subset] : regions) {
    if (subset.size() < 3) continue;
    any_candidate_region = true;
    Pose hypothesis;
    try {
      hypothesis = fit_subset(corr, subset, model, scene);
    } catch (const std::invalid_argument&) {
      continue;  // collinear region; other hypotheses may still work
    }
    InlierStats stats = evaluate_pose(hypothesis, corr, model, scene, inlier_radius);
    const bool better =
        !have_best || stats.inliers.size() > best_stats.inliers.size() ||
        (stats.inliers.size() == best_stats.inliers.size() && stats.rmse < best_stats.rmse);
    if (better) {
      have_best = true;
      best_pose = hypothesis;
      best_stats = std::move(stats);
    }
  }
  if (!have_best) {
    throw std::invalid_argument(any_candidate_region
                                    ? "insufficient correspondences (degenerate regions)"
                                    : "insufficient correspondences");
  }

  // Refit on inliers; keep the refit only while the inlier rmse improves.
  for (int round = 0; round < params.max_refit_rounds; ++round) {
    if (best_stats.inliers.size() < 3) break;
    Pose refit;
    try {
      refit = fit_subset(corr, best_stats.inliers, model, scene);
    } catch (const std::invalid_argument&) {
      break;
    }
    InlierStats stats = evaluate_pose(refit, corr, model, scene, inlier_radius);
    const bool improved = stats.inliers.size() > best_stats.inliers.size() ||
                          (stats.inliers.size() == best_stats.inliers.size() &&
                           stats.rmse < best_stats.rmse);
    if (!improved) break;
    const bool stable = stats.inliers == best_stats.inliers;
    best_pose = refit;
    best_stats = std::move(stats);
    if (stable) break;
  }

  RegistrationResult result;
  result.pose = best_pose;
  result.inlier_count = best_stats.inliers.size();
  result.rmse = best_stats.rmse;
  result.score = best_stats.mean_confidence;
  return result;
}

}  // namespace zspose
