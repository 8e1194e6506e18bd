#include "zspose/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace zspose {

SpatialGrid::SpatialGrid(const std::vector<Vec3>& points, double cell_size)
    : points_(points), cell_(cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell size must be positive");
  cells_.reserve(points.size());
  for (int i = 0; i < static_cast<int>(points.size()); ++i)
    cells_[key_of(points[i])].push_back(i);
}

SpatialGrid::CellKey SpatialGrid::key_of(const Vec3& p) const {
  return {static_cast<std::int64_t>(std::floor(p.x() / cell_)),
          static_cast<std::int64_t>(std::floor(p.y() / cell_)),
          static_cast<std::int64_t>(std::floor(p.z() / cell_))};
}

void SpatialGrid::query_radius(const Vec3& q, double radius, std::vector<int>& out) const {
  out.clear();
  const double r_sq = radius * radius;
  const std::int64_t span = static_cast<std::int64_t>(std::floor(radius / cell_)) + 1;
  const CellKey center = key_of(q);
  for (std::int64_t dx = -span; dx <= span; ++dx)
    for (std::int64_t dy = -span; dy <= span; ++dy)
      for (std::int64_t dz = -span; dz <= span; ++dz) {
        const auto it = cells_.find({center.x + dx, center.y + dy, center.z + dz});
        if (it == cells_.end()) continue;
        for (int idx : it->second)
          if ((points_[idx] - q).squaredNorm() <= r_sq) out.push_back(idx);
      }
  std::sort(out.begin(), out.end());
}

std::vector<int> SpatialGrid::query_radius(const Vec3& q, double radius) const {
  std::vector<int> out;
  query_radius(q, radius, out);
  return out;
}

std::vector<int> SpatialGrid::knn(const Vec3& q, int k) const {
  k = std::min<int>(k, static_cast<int>(points_.size()));
  if (k <= 0) return {};

  // Expand shells of cells until the k-th best distance beats the next shell.
  std::vector<std::pair<double, int>> best;  // (squared distance, index)
  const CellKey center = key_of(q);
  const auto scan_cell = [&](std::int64_t x, std::int64_t y, std::int64_t z) {
    const auto it = cells_.find({x, y, z});
    if (it == cells_.end()) return;
    for (int idx : it->second) best.emplace_back((points_[idx] - q).squaredNorm(), idx);
  };

  for (std::int64_t ring = 0;; ++ring) {
    if (ring == 0) {
      scan_cell(center.x, center.y, center.z);
    } else {
      for (std::int64_t dx = -ring; dx <= ring; ++dx)
        for (std::int64_t dy = -ring; dy <= ring; ++dy)
          for (std::int64_t dz = -ring; dz <= ring; ++dz) {
            if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
            scan_cell(center.x + dx, center.y + dy, center.z + dz);
          }
    }
    if (static_cast<int>(best.size()) >= k) {
      std::sort(best.begin(), best.end());
      // Cells at Chebyshev distance > ring start at least ring*cell away.
      const double safe = static_cast<double>(ring) * cell_;
      if (best[k - 1].first <= safe * safe) break;
    }
    // all points collected
    if (best.size() == points_.size()) {
      std::sort(best.begin(), best.end());
      break;
    }
  }

  std::vector<int> out(k);
  for (int i = 0; i < k; ++i) out[i] = best[i].second;
  return out;
}

}  // namespace zspose
