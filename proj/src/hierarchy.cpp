#include "zspose/hierarchy.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "zspose/io/zspf.hpp"
#include "zspose/parallel.hpp"
#include "zspose/spatial_grid.hpp"

namespace zspose {

namespace {

constexpr int kNormalNeighbors = 16;

/// Voxel centroids in canonical (cell-key) order.
PointCloud voxel_downsample(const PointCloud& cloud, double voxel) {
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::pair<Vec3, int>> cells;
  for (const Vec3& p : cloud.points) {
    const auto key = std::make_tuple(static_cast<std::int64_t>(std::floor(p.x() / voxel)),
                                     static_cast<std::int64_t>(std::floor(p.y() / voxel)),
                                     static_cast<std::int64_t>(std::floor(p.z() / voxel)));
    auto it = cells.find(key);
    if (it == cells.end())
      cells.emplace(key, std::make_pair(p, 1));
    else {
      it->second.first += p;
      it->second.second += 1;
    }
  }
  PointCloud out;
  out.points.reserve(cells.size());
  for (const auto& [key, acc] : cells)
    out.points.push_back(acc.first / static_cast<double>(acc.second));
  return out;
}

/// PFH-style Darboux angle triplet for a source (p, n) and target (q, m).
struct AngleTriplet {
  double alpha, phi, theta;
};

AngleTriplet pair_angles(const Vec3& p, const Vec3& n, const Vec3& q, const Vec3& m) {
  const Vec3 diff = q - p;
  const double d = diff.norm();
  const Vec3 f = diff / d;
  Vec3 v = f.cross(n);
  const double vn = v.norm();
  if (vn > 1e-12) v /= vn;
  const Vec3 w = n.cross(v);
  return {v.dot(m), n.dot(f), std::atan2(w.dot(m), n.dot(m))};
}

/// Linear soft-binning of val in [0,1] into hist[offset .. offset+bins).
void soft_bin(std::vector<double>& hist, int offset, int bins, double val) {
  const double x = val * bins - 0.5;
  const int b0 = static_cast<int>(std::floor(x));
  const double w1 = x - b0;
  const int lo = std::clamp(b0, 0, bins - 1);
  const int hi = std::clamp(b0 + 1, 0, bins - 1);
  hist[offset + lo] += 1.0 - w1;
  hist[offset + hi] += w1;
}

/// Linear soft-binning of val in [0,1] with contribution weight w.
void soft_bin_weighted(std::vector<double>& hist, int offset, int bins, double val, double w) {
  const double x = val * bins - 0.5;
  const int b0 = static_cast<int>(std::floor(x));
  const double w1 = x - b0;
  const int lo = std::clamp(b0, 0, bins - 1);
  const int hi = std::clamp(b0 + 1, 0, bins - 1);
  hist[offset + lo] += w * (1.0 - w1);
  hist[offset + hi] += w * w1;
}

/// Angular histogram of a center point against its neighbors within radius;
/// 3 concatenated blocks of bins_per_angle. Contributions fall off linearly
/// to zero at the radius so boundary membership cannot flip the histogram.
/// Uniform when there are no neighbors.
Eigen::RowVectorXd compute_descriptor(const Vec3& center, const Vec3& center_normal,
                                      const PointCloud& neighbors_cloud,
                                      const std::vector<int>& neighbors, double radius,
                                      int bins_per_angle) {
  const int dim = 3 * bins_per_angle;
  std::vector<double> hist(dim, 0.0);
  double total = 0.0;
  for (int j : neighbors) {
    const Vec3& q = neighbors_cloud.points[j];
    const double d = (q - center).norm();
    if (d < 1e-9) continue;  // skip the point itself
    const double w = std::max(0.0, 1.0 - d / radius);
    if (w <= 0.0) continue;
    const AngleTriplet a =
        pair_angles(center, center_normal, q, neighbors_cloud.normals[j]);
    soft_bin_weighted(hist, 0, bins_per_angle, (a.alpha + 1.0) / 2.0, w);
    soft_bin_weighted(hist, bins_per_angle, bins_per_angle, (a.phi + 1.0) / 2.0, w);
    soft_bin_weighted(hist, 2 * bins_per_angle, bins_per_angle,
                      (a.theta + M_PI) / (2.0 * M_PI), w);
    total += w;
  }
  Eigen::RowVectorXd row(dim);
  if (total <= 0.0) {
    row.setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
    return row;
  }
  for (int b = 0; b < dim; ++b) row(b) = hist[b];
  row /= row.norm();
  return row;
}

void normalize_rows_checked(Eigen::MatrixXd& m, const char* what) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const double norm = m.row(r).norm();
    if (!(norm > 0.0))
      throw std::invalid_argument(std::string(what) + ": feature row " + std::to_string(r) +
                                  " has zero norm");
    m.row(r) /= norm;
  }
}

}  // namespace

HierarchicalCloud build_hierarchy(const PointCloud& cloud, double fine_voxel,
                                  double coarse_voxel) {
  if (cloud.empty()) throw std::invalid_argument("empty point cloud");
  if (!(fine_voxel > 0.0) || !(fine_voxel < coarse_voxel))
    throw std::invalid_argument("voxel sizes must satisfy 0 < fine < coarse");

  HierarchicalCloud h;
  h.fine_points = voxel_downsample(cloud, fine_voxel);
  h.coarse_points = voxel_downsample(cloud, coarse_voxel);

  h.assignment.resize(h.fine_points.size());
  const SpatialGrid coarse_grid(h.coarse_points.points, coarse_voxel);
  parallel_for(h.fine_points.size(), [&](std::size_t i) {
    const auto nearest = coarse_grid.knn(h.fine_points.points[i], 1);
    h.assignment[i] = nearest.front();
  });
  return h;
}

void estimate_normals(PointCloud& cloud, int k, NormalOrientation orientation) {
  if (static_cast<int>(cloud.size()) < k)
    throw std::invalid_argument("cloud too small for normal estimation");

  const double r = circumradius(cloud);
  const double cell = std::max(r / 16.0, 1e-9);
  const SpatialGrid grid(cloud.points, cell);
  const Vec3 anchor =
      orientation == NormalOrientation::toward_origin ? Vec3::Zero() : centroid(cloud);

  cloud.normals.assign(cloud.size(), Vec3::UnitZ());
  parallel_for(cloud.size(), [&](std::size_t i) {
    const auto nb = grid.knn(cloud.points[i], k);
    Vec3 mean = Vec3::Zero();
    for (int j : nb) mean += cloud.points[j];
    mean /= static_cast<double>(nb.size());
    Mat3 cov = Mat3::Zero();
    for (int j : nb) {
      const Vec3 d = cloud.points[j] - mean;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    Vec3 normal = eig.eigenvectors().col(0);  // smallest eigenvalue
    const Vec3 to_anchor = anchor - cloud.points[i];
    const double toward = orientation == NormalOrientation::toward_origin
                              ? normal.dot(to_anchor)
                              : -normal.dot(to_anchor);
    if (toward < 0.0) normal = -normal;
    cloud.normals[i] = normal;
  });
}

void describe(HierarchicalCloud& h, double radius_fine, double radius_coarse,
              NormalOrientation orientation) {
  if (!(radius_fine > 0.0) || !(radius_coarse > 0.0))
    throw std::invalid_argument("descriptor radii must be positive");
  if (static_cast<int>(h.fine_points.size()) < kNormalNeighbors)
    throw std::invalid_argument("cloud too small for normal estimation");

  estimate_normals(h.fine_points, kNormalNeighbors, orientation);

  const double cell = std::max(radius_fine / 2.0, 1e-9);
  const SpatialGrid fine_grid(h.fine_points.points, cell);

  const int n_fine = static_cast<int>(h.fine_points.size());
  h.fine_features.resize(n_fine, kFineFeatureBins);
  parallel_for(n_fine, [&](std::size_t i) {
    std::vector<int> nb;
    fine_grid.query_radius(h.fine_points.points[i], radius_fine, nb);
    h.fine_features.row(i) =
        compute_descriptor(h.fine_points.points[i], h.fine_points.normals[i], h.fine_points,
                           nb, radius_fine, kFineFeatureBins / 3);
  });

  // Coarse normals blend the fine normals in the neighborhood (same falloff
  // as the histograms) so both levels share one smooth surface estimate.
  const int n_coarse = static_cast<int>(h.coarse_points.size());
  h.coarse_points.normals.assign(n_coarse, Vec3::UnitZ());
  h.coarse_features.resize(n_coarse, kCoarseFeatureBins);
  parallel_for(n_coarse, [&](std::size_t i) {
    std::vector<int> nb;
    fine_grid.query_radius(h.coarse_points.points[i], radius_coarse, nb);
    Vec3 blended = Vec3::Zero();
    for (int j : nb) {
      const double d = (h.fine_points.points[j] - h.coarse_points.points[i]).norm();
      blended += std::max(0.0, 1.0 - d / radius_coarse) * h.fine_points.normals[j];
    }
    if (blended.norm() > 1e-12)
      h.coarse_points.normals[i] = blended.normalized();
    else
      h.coarse_points.normals[i] =
          h.fine_points.normals[fine_grid.knn(h.coarse_points.points[i], 1).front()];
    h.coarse_features.row(i) =
        compute_descriptor(h.coarse_points.points[i], h.coarse_points.normals[i],
                           h.fine_points, nb, radius_coarse, kCoarseFeatureBins / 3);
  });
}

void ingest_features(HierarchicalCloud& h, const Eigen::MatrixXd& fine,
                     const Eigen::MatrixXd& coarse) {
  if (fine.rows() != static_cast<Eigen::Index>(h.fine_points.size()))
    throw std::invalid_argument("fine feature row count does not match hierarchy");
  if (coarse.rows() != static_cast<Eigen::Index>(h.coarse_points.size()))
    throw std::invalid_argument("coarse feature row count does not match hierarchy");
  if (fine.cols() < 1 || coarse.cols() < 1)
    throw std::invalid_argument("feature dimension must be >= 1");
  Eigen::MatrixXd f = fine, c = coarse;
  normalize_rows_checked(f, "fine features");
  normalize_rows_checked(c, "coarse features");
  h.fine_features = std::move(f);
  h.coarse_features = std::move(c);
}

void ingest_features(HierarchicalCloud& h, const std::string& fine_file,
                     const std::string& coarse_file) {
  ingest_features(h, load_feature_file(fine_file), load_feature_file(coarse_file));
}

}  // namespace zspose
