#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "zspose/geometry.hpp"

namespace zspose {

/// 16-bit grayscale PNG raster.
void save_gray16_png(const std::string& path, int width, int height,
                     const std::vector<std::uint16_t>& pixels);
std::vector<std::uint16_t> load_gray16_png(const std::string& path, int& width, int& height);

/// Depth image <-> 16-bit PNG; stored value = round(mm / depth_scale).
void save_depth_png(const std::string& path, const DepthImage& depth, double depth_scale = 1.0);
DepthImage load_depth_png(const std::string& path, const CameraIntrinsics& intrinsics,
                          double depth_scale = 1.0);

/// 8-bit grayscale mask PNG; nonzero = foreground.
void save_mask_png(const std::string& path, const BitMask& mask);
BitMask load_mask_png(const std::string& path);

/// Sidecar metadata for standalone depth files:
/// {depth_scale, fx, fy, cx, cy, width, height}.
void save_depth_metadata(const std::string& path, const CameraIntrinsics& intrinsics,
                         double depth_scale);
std::pair<CameraIntrinsics, double> load_depth_metadata(const std::string& path);

}  // namespace zspose
