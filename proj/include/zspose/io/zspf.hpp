#pragma once

#include <Eigen/Core>

#include <string>

namespace zspose {

/// Binary feature file: magic "ZSPF", u32 version, u32 rows, u32 dim
/// (little-endian), then rows*dim float32 values row-major.
void save_feature_file(const std::string& path, const Eigen::MatrixXd& rows);
Eigen::MatrixXd load_feature_file(const std::string& path);

}  // namespace zspose
