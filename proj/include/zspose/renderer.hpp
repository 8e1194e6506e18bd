#pragma once

#include "zspose/geometry.hpp"

namespace zspose {

/// Depth raster of a posed mesh plus the coverage mask (true exactly where
/// depth > 0).
struct RenderedDepth {
  DepthImage depth;
  BitMask object_mask;
};

/// CPU z-buffer rasterizer. Pixel centers sit at integer coordinates, depth
/// is camera-space z with perspective-correct interpolation, back faces are
/// kept, and triangles touching the near plane (z <= 1e-6) are dropped. A
/// mesh entirely behind the camera yields an empty mask.
RenderedDepth render_depth(const TriangleMesh& mesh, const Pose& pose,
                           const CameraIntrinsics& cam);

}  // namespace zspose
