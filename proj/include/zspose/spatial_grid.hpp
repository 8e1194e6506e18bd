#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "zspose/geometry.hpp"

namespace zspose {

/// Uniform hash grid over 3D points for radius and k-NN queries.
/// Query results are exact (distance-filtered) and returned in ascending
/// point-index order, so callers stay deterministic.
class SpatialGrid {
 public:
  SpatialGrid(const std::vector<Vec3>& points, double cell_size);

  /// Indices of points with |p - q| <= radius, ascending.
  void query_radius(const Vec3& q, double radius, std::vector<int>& out) const;
  std::vector<int> query_radius(const Vec3& q, double radius) const;

  /// Indices of the k nearest points to q (fewer if the cloud is smaller),
  /// ordered by distance, ties by index.
  std::vector<int> knn(const Vec3& q, int k) const;

  double cell_size() const { return cell_; }

 private:
  struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
  };
  struct CellHash {
    std::size_t operator()(const CellKey& k) const {
      std::uint64_t h = 1469598103934665603ull;
      for (std::int64_t v : {k.x, k.y, k.z}) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 1099511628211ull;
      }
      return static_cast<std::size_t>(h);
    }
  };

  CellKey key_of(const Vec3& p) const;

  const std::vector<Vec3>& points_;
  double cell_;
  std::unordered_map<CellKey, std::vector<int>, CellHash> cells_;
};

}  // namespace zspose
