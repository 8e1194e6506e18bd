#pragma once

#include <string>

#include "zspose/geometry.hpp"

namespace zspose {

/// Reads ASCII or binary little-endian PLY (vertex positions + triangular
/// faces; other properties are skipped). Units are taken to be mm.
TriangleMesh load_ply(const std::string& path);

/// Writes PLY; binary little-endian by default.
void save_ply(const std::string& path, const TriangleMesh& mesh, bool binary = true);

/// Symmetry sidecar JSON: {"symmetries": [{"R": [9 row-major], "t": [3]}]}.
/// The identity is implied and added if missing on load.
SymmetrySet load_symmetries_json(const std::string& path);
void save_symmetries_json(const std::string& path, const SymmetrySet& symmetries);

}  // namespace zspose
