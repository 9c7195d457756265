#pragma once

#include "scanplan/geometry.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

namespace scanplan {

using LoadedGeometry = std::variant<PointCloud, TriangleMesh>;

/// Reads PLY (ascii or binary little-endian) or OBJ. Files with faces load as
/// a TriangleMesh (polygons fan-triangulated); otherwise as a PointCloud with
/// any nx/ny/nz and origin_x/y/z vertex properties attached. Unsupported
/// encodings (e.g. big-endian PLY) raise UnsupportedFeature; malformed input
/// raises ParseError with a line or byte offset.
LoadedGeometry load_geometry(const std::filesystem::path& path);

PointCloud load_cloud(const std::filesystem::path& path);
TriangleMesh load_mesh(const std::filesystem::path& path);

/// Writers are whole-file atomic (temp file + rename) and deterministic.
void save_cloud(const PointCloud& cloud, const std::filesystem::path& path, bool binary = true);
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, bool binary = true);

/// Mesh with per-vertex uchar colors (ascii PLY, viewer-friendly).
void save_colored_mesh(const TriangleMesh& mesh,
                       const std::vector<std::array<std::uint8_t, 3>>& vertex_colors,
                       const std::filesystem::path& path);

/// Point set with per-point uchar colors (ascii PLY).
void save_colored_points(const std::vector<Point3>& points,
                         const std::vector<std::array<std::uint8_t, 3>>& colors,
                         const std::filesystem::path& path);

/// Writes text to path atomically (temp file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace scanplan
