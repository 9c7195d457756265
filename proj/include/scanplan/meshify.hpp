#pragma once

#include "scanplan/geometry.hpp"

#include <cstdint>
#include <vector>

namespace scanplan {

/// Scalar field sampled at the nodes of a regular grid. dims counts CELLS per
/// axis; node arrays hold (nx+1)*(ny+1)*(nz+1) values. Sign convention:
/// negative = inside, positive = outside, |value| <= truncation.
struct VoxelGrid {
    Point3 origin;
    double voxel_size = 0.0;
    std::uint32_t nx = 0, ny = 0, nz = 0; // cell counts
    double truncation = 0.0;
    std::vector<float> values;   // node-sampled signed distances
    std::vector<std::uint8_t> known;

    std::size_t node_count() const {
        return std::size_t(nx + 1) * (ny + 1) * (nz + 1);
    }
    std::size_t node_id(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        return (std::size_t(k) * (ny + 1) + j) * (nx + 1) + i;
    }
    Point3 node_position(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
        return origin + Vec3{i * voxel_size, j * voxel_size, k * voxel_size};
    }
};

struct MeshifyParams {
    double voxel_size = 0.10;
    double truncation_scale = 3.0;       // tau = truncation_scale * voxel_size
    int normals_k = 12;
    double min_component_area_scale = 25.0; // threshold = scale * voxel_size^2
    std::size_t max_grid_nodes = 64000000;

    double truncation() const { return truncation_scale * voxel_size; }
    double min_component_area() const {
        return min_component_area_scale * voxel_size * voxel_size;
    }
};

/// PCA plane-fit normals from the k nearest neighbours (the point itself
/// included). Orientation: toward the per-point scan origin when origins are
/// present, otherwise away from the cloud centroid (unreliable for concave
/// scenes; the simulator always records origins).
PointCloud estimate_normals(const PointCloud& cloud, int k);

/// Truncated point-to-tangent-plane signed distance field. Every node within
/// tau of its nearest cloud point gets value clamp(dot(node - p, n_p), -tau,
/// +tau) and known = true; all others +tau, unknown.
VoxelGrid build_signed_field(const PointCloud& cloud, double voxel_size, double truncation,
                             std::size_t max_grid_nodes = 64000000);

/// Standard 256-case marching cubes at the given isovalue. Cells touching an
/// unknown node emit nothing, so never-observed space cannot hallucinate
/// surface. Vertices on shared edges are welded by edge key; triangle winding
/// puts face normals toward increasing field (outside).
TriangleMesh marching_cubes(const VoxelGrid& grid, double iso = 0.0);

/// Drops degenerate triangles (area <= 1e-10 m2), then every connected
/// component with total area below min_component_area. Vertices re-indexed
/// compactly. Throws AllRemoved when nothing survives.
TriangleMesh clean_mesh(const TriangleMesh& mesh, double min_component_area);

/// Full cloud-to-mesh chain: normals (if absent), signed field, marching
/// cubes, cleanup.
TriangleMesh meshify_cloud(const PointCloud& cloud, const MeshifyParams& params);

/// Smallest-eigenvalue eigenvector of a symmetric 3x3 matrix given as
/// (xx, xy, xz, yy, yz, zz). Deterministic cyclic Jacobi sweep.
Vec3 smallest_eigenvector_sym3(const double m[6]);

} // namespace scanplan
