#include "scanplan/meshify.hpp"

#include "mc_tables.hpp"
#include "scanplan/knn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>

namespace scanplan {

Vec3 smallest_eigenvector_sym3(const double m[6]) {
    // Cyclic Jacobi on A = [[xx,xy,xz],[xy,yy,yz],[xz,yz,zz]]. Fixed sweep
    // order keeps results deterministic.
    double a[3][3] = {{m[0], m[1], m[2]}, {m[1], m[3], m[4]}, {m[2], m[4], m[5]}};
    double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

    for (int sweep = 0; sweep < 32; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < 3; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (int i = 0; i < 3; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (int i = 0; i < 3; ++i) {
                    const double vip = v[i][p], viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (a[i][i] < a[best][best]) best = i;
    }
    return Vec3{v[0][best], v[1][best], v[2][best]}.normalized();
}

PointCloud estimate_normals(const PointCloud& cloud, int k) {
    if (k < 3) raise(ErrorCode::InvalidArgument, "normal estimation requires k >= 3");
    if (cloud.points.size() < std::size_t(k)) {
        raise(ErrorCode::TooFewPoints, "normal estimation requires at least k points");
    }
    cloud.validate();

    PointIndex index(cloud.points);

    Vec3 centroid{0, 0, 0};
    for (const Point3& p : cloud.points) centroid += p;
    centroid = centroid / double(cloud.points.size());

    PointCloud out = cloud;
    out.normals.assign(cloud.points.size(), Dir3{0, 0, 1});

    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
        const auto nn = index.knn(cloud.points[i], std::size_t(k));

        Vec3 mean{0, 0, 0};
        for (const auto& [id, dist] : nn) mean += cloud.points[id];
        mean = mean / double(nn.size());

        double cov[6] = {0, 0, 0, 0, 0, 0};
        for (const auto& [id, dist] : nn) {
            const Vec3 d = cloud.points[id] - mean;
            cov[0] += d.x * d.x;
            cov[1] += d.x * d.y;
            cov[2] += d.x * d.z;
            cov[3] += d.y * d.y;
            cov[4] += d.y * d.z;
            cov[5] += d.z * d.z;
        }

        Dir3 n = smallest_eigenvector_sym3(cov);
        const Vec3 toward = cloud.has_origins() ? cloud.origins[i] - cloud.points[i]
                                                : cloud.points[i] - centroid;
        if (dot(n, toward) < 0.0) n = -n;
        out.normals[i] = n;
    }
    return out;
}

VoxelGrid build_signed_field(const PointCloud& cloud, double voxel_size, double truncation,
                             std::size_t max_grid_nodes) {
    if (cloud.points.empty()) raise(ErrorCode::EmptyCloud, "signed field needs points");
    if (!cloud.has_normals()) {
        raise(ErrorCode::InvalidArgument, "signed field needs per-point normals");
    }
    if (voxel_size <= 0.0) raise(ErrorCode::InvalidArgument, "voxel_size must be positive");
    if (truncation < 2.0 * voxel_size) {
        raise(ErrorCode::InvalidArgument, "truncation must be >= 2 * voxel_size");
    }

    Aabb box;
    for (const Point3& p : cloud.points) box.expand(p);
    const double pad = truncation + 2.0 * voxel_size;

    VoxelGrid grid;
    grid.voxel_size = voxel_size;
    grid.truncation = truncation;
    grid.origin = box.min - Vec3{pad, pad, pad};
    const Vec3 span = box.extent() + Vec3{2 * pad, 2 * pad, 2 * pad};
    grid.nx = std::uint32_t(std::ceil(span.x / voxel_size)) + 1;
    grid.ny = std::uint32_t(std::ceil(span.y / voxel_size)) + 1;
    grid.nz = std::uint32_t(std::ceil(span.z / voxel_size)) + 1;

    const std::size_t nodes = grid.node_count();
    if (nodes > max_grid_nodes) {
        raise(ErrorCode::GridTooLarge, "voxel grid would need " + std::to_string(nodes) +
                                           " nodes (cap " + std::to_string(max_grid_nodes) + ")");
    }

    const float tau = float(truncation);
    grid.values.assign(nodes, tau);
    grid.known.assign(nodes, 0);

    // Nearest-point assignment by stamping: every point visits the nodes in
    // its truncation box; points are visited in index order so equal
    // distances resolve to the lowest point index.
    std::vector<float> best_d2(nodes, std::numeric_limits<float>::infinity());
    std::vector<std::int32_t> best_idx(nodes, -1);

    const double tau2 = truncation * truncation;
    const int nodes_x = int(grid.nx) + 1;
    const int nodes_y = int(grid.ny) + 1;
    const int nodes_z = int(grid.nz) + 1;

    for (std::size_t idx = 0; idx < cloud.points.size(); ++idx) {
        const Point3& p = cloud.points[idx];
        const Vec3 local = (p - grid.origin) / voxel_size;
        const int i0 = std::max(0, int(std::floor(local.x - truncation / voxel_size)));
        const int j0 = std::max(0, int(std::floor(local.y - truncation / voxel_size)));
        const int k0 = std::max(0, int(std::floor(local.z - truncation / voxel_size)));
        const int i1 = std::min(nodes_x - 1, int(std::ceil(local.x + truncation / voxel_size)));
        const int j1 = std::min(nodes_y - 1, int(std::ceil(local.y + truncation / voxel_size)));
        const int k1 = std::min(nodes_z - 1, int(std::ceil(local.z + truncation / voxel_size)));

        for (int k = k0; k <= k1; ++k) {
            for (int j = j0; j <= j1; ++j) {
                const std::size_t row = (std::size_t(k) * nodes_y + j) * nodes_x;
                for (int i = i0; i <= i1; ++i) {
                    const Point3 node = grid.node_position(std::uint32_t(i), std::uint32_t(j),
                                                           std::uint32_t(k));
                    const double d2 = (node - p).norm2();
                    if (d2 > tau2) continue;
                    const std::size_t n = row + i;
                    if (float(d2) < best_d2[n]) {
                        best_d2[n] = float(d2);
                        best_idx[n] = std::int32_t(idx);
                    }
                }
            }
        }
    }

    for (std::uint32_t k = 0; k < std::uint32_t(nodes_z); ++k) {
        for (std::uint32_t j = 0; j < std::uint32_t(nodes_y); ++j) {
            for (std::uint32_t i = 0; i < std::uint32_t(nodes_x); ++i) {
                const std::size_t n = grid.node_id(i, j, k);
                if (best_idx[n] < 0) continue;
                const Point3 p = cloud.points[best_idx[n]];
                const Dir3 nrm = cloud.normals[best_idx[n]];
                const double signed_dist = dot(grid.node_position(i, j, k) - p, nrm);
                grid.values[n] = float(std::clamp(signed_dist, -truncation, truncation));
                grid.known[n] = 1;
            }
        }
    }
    return grid;
}

namespace {

// Cell-corner offsets matching the lookup tables (see mc_tables.cpp).
constexpr int kCornerOffset[8][3] = {
    {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
};
constexpr int kEdgeCorner[12][2] = {
    {0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6},
    {6, 7}, {7, 4}, {0, 4}, {1, 5}, {2, 6}, {3, 7},
};

} // namespace

TriangleMesh marching_cubes(const VoxelGrid& grid, double iso) {
    TriangleMesh mesh;
    if (grid.nx == 0 || grid.ny == 0 || grid.nz == 0) return mesh;

    // Edge key (lower node id, upper node id) -> welded vertex id.
    std::unordered_map<std::uint64_t, std::uint32_t> edge_vertex;
    edge_vertex.reserve(1024);

    std::size_t corner_node[8];
    float corner_value[8];
    Point3 corner_pos[8];

    for (std::uint32_t k = 0; k < grid.nz; ++k) {
        for (std::uint32_t j = 0; j < grid.ny; ++j) {
            for (std::uint32_t i = 0; i < grid.nx; ++i) {
                bool all_known = true;
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    const std::uint32_t ci = i + kCornerOffset[c][0];
                    const std::uint32_t cj = j + kCornerOffset[c][1];
                    const std::uint32_t ck = k + kCornerOffset[c][2];
                    corner_node[c] = grid.node_id(ci, cj, ck);
                    if (!grid.known[corner_node[c]]) {
                        all_known = false;
                        break;
                    }
                    corner_value[c] = grid.values[corner_node[c]];
                    corner_pos[c] = grid.node_position(ci, cj, ck);
                    if (corner_value[c] < iso) cube |= (1 << c);
                }
                if (!all_known || cube == 0 || cube == 255) continue;

                std::uint32_t edge_ids[12];
                const int edges = detail::kMcEdgeTable[cube];
                for (int e = 0; e < 12; ++e) {
                    if (!(edges & (1 << e))) continue;
                    const int ca = kEdgeCorner[e][0];
                    const int cb = kEdgeCorner[e][1];
                    const std::uint64_t na = corner_node[ca];
                    const std::uint64_t nb = corner_node[cb];
                    const std::uint64_t key = na < nb ? (na << 32 | nb) : (nb << 32 | na);
                    auto it = edge_vertex.find(key);
                    if (it == edge_vertex.end()) {
                        const double va = corner_value[ca];
                        const double vb = corner_value[cb];
                        const double t = std::clamp((iso - va) / (vb - va), 0.0, 1.0);
                        const Point3 pos = corner_pos[ca] + (corner_pos[cb] - corner_pos[ca]) * t;
                        it = edge_vertex.emplace(key, std::uint32_t(mesh.vertices.size())).first;
                        mesh.vertices.push_back(pos);
                    }
                    edge_ids[e] = it->second;
                }

                const int* row = detail::kMcTriTable[cube];
                for (int e = 0; row[e] >= 0; e += 3) {
                    // Table rows wind toward the low side; reversed here so
                    // normals point toward increasing field (outside).
                    mesh.triangles.push_back(
                        {edge_ids[row[e]], edge_ids[row[e + 2]], edge_ids[row[e + 1]]});
                }
            }
        }
    }

    mesh.update_derived();
    return mesh;
}

TriangleMesh clean_mesh(const TriangleMesh& mesh, double min_component_area) {
    constexpr double kDegenerateArea = 1e-10;

    std::vector<std::uint32_t> parent(mesh.vertices.size());
    for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
    const auto find = [&](std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    const auto unite = [&](std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    std::vector<std::uint32_t> kept;
    std::vector<double> tri_area(mesh.triangles.size());
    for (std::uint32_t t = 0; t < mesh.triangles.size(); ++t) {
        const Point3 a = mesh.vertex(t, 0);
        const Point3 b = mesh.vertex(t, 1);
        const Point3 c = mesh.vertex(t, 2);
        tri_area[t] = 0.5 * cross(b - a, c - a).norm();
        if (tri_area[t] <= kDegenerateArea) continue;
        kept.push_back(t);
        unite(mesh.triangles[t][0], mesh.triangles[t][1]);
        unite(mesh.triangles[t][1], mesh.triangles[t][2]);
    }

    std::unordered_map<std::uint32_t, double> component_area;
    for (const std::uint32_t t : kept) {
        component_area[find(mesh.triangles[t][0])] += tri_area[t];
    }

    TriangleMesh out;
    std::vector<std::uint32_t> remap(mesh.vertices.size(),
                                     std::numeric_limits<std::uint32_t>::max());
    for (const std::uint32_t t : kept) {
        if (component_area[find(mesh.triangles[t][0])] < min_component_area) continue;
        std::array<std::uint32_t, 3> tri;
        for (int c = 0; c < 3; ++c) {
            const std::uint32_t v = mesh.triangles[t][c];
            if (remap[v] == std::numeric_limits<std::uint32_t>::max()) {
                remap[v] = std::uint32_t(out.vertices.size());
                out.vertices.push_back(mesh.vertices[v]);
            }
            tri[c] = remap[v];
        }
        out.triangles.push_back(tri);
    }

    if (out.triangles.empty()) {
        raise(ErrorCode::AllRemoved, "mesh cleanup removed every triangle");
    }
    out.update_derived();
    return out;
}

TriangleMesh meshify_cloud(const PointCloud& cloud, const MeshifyParams& params) {
    const PointCloud with_normals =
        cloud.has_normals() ? cloud : estimate_normals(cloud, params.normals_k);
    const VoxelGrid grid = build_signed_field(with_normals, params.voxel_size,
                                              params.truncation(), params.max_grid_nodes);
    const TriangleMesh raw = marching_cubes(grid, 0.0);
    return clean_mesh(raw, params.min_component_area());
}

} // namespace scanplan
