#pragma once

#include "scanplan/error.hpp"
#include "scanplan/vec3.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace scanplan {

/// Unordered point set, optionally with per-point unit normals and per-point
/// sensor origins (the position the point was scanned from).
struct PointCloud {
    std::vector<Point3> points;
    std::vector<Dir3> normals;   // empty or same length as points
    std::vector<Point3> origins; // empty or same length as points

    std::size_t size() const { return points.size(); }
    bool has_normals() const { return !normals.empty(); }
    bool has_origins() const { return !origins.empty(); }

    void append(const PointCloud& other);
    void validate() const; // length + finiteness invariants
};

/// Indexed triangle mesh with derived per-face data. Faces follow the
/// right-hand rule: the unit normal is cross(b - a, c - a) normalized.
struct TriangleMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;

    // Derived, filled by update_derived().
    std::vector<Dir3> face_normals;
    std::vector<double> face_areas;
    double total_area = 0.0;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t triangle_count() const { return triangles.size(); }

    Point3 vertex(std::uint32_t tri, int corner) const {
        return vertices[triangles[tri][corner]];
    }

    Aabb bounds() const;

    /// Recomputes face normals/areas and total area. Degenerate faces get a
    /// zero normal and zero area; clean_mesh removes them.
    void update_derived();

    void validate() const; // index bounds + finiteness
};

/// Per-mesh topology diagnostics. An edge is boundary when it belongs to
/// exactly one triangle and non-manifold when it belongs to more than two.
struct TopologyReport {
    std::size_t boundary_edges = 0;
    std::size_t non_manifold_edges = 0;
    std::size_t connected_components = 0;
    double total_area = 0.0;
    bool watertight = false;
};

TopologyReport mesh_topology_report(const TriangleMesh& mesh);

} // namespace scanplan
