#include "scanplan/geometry.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>

namespace scanplan {

void PointCloud::append(const PointCloud& other) {
    const bool keep_normals = (points.empty() || has_normals()) && other.has_normals();
    const bool keep_origins = (points.empty() || has_origins()) && other.has_origins();
    points.insert(points.end(), other.points.begin(), other.points.end());
    if (keep_normals) {
        normals.insert(normals.end(), other.normals.begin(), other.normals.end());
    } else {
        normals.clear();
    }
    if (keep_origins) {
        origins.insert(origins.end(), other.origins.begin(), other.origins.end());
    } else {
        origins.clear();
    }
}

void PointCloud::validate() const {
    if (!normals.empty() && normals.size() != points.size()) {
        raise(ErrorCode::InvalidArgument, "point cloud normals length mismatch");
    }
    if (!origins.empty() && origins.size() != points.size()) {
        raise(ErrorCode::InvalidArgument, "point cloud origins length mismatch");
    }
    for (const Point3& p : points) {
        if (!p.finite()) raise(ErrorCode::InvalidArgument, "non-finite point coordinate");
    }
    for (const Dir3& n : normals) {
        if (!n.finite()) raise(ErrorCode::InvalidArgument, "non-finite normal");
    }
    for (const Point3& o : origins) {
        if (!o.finite()) raise(ErrorCode::InvalidArgument, "non-finite origin");
    }
}

Aabb TriangleMesh::bounds() const {
    Aabb box;
    for (const Point3& v : vertices) box.expand(v);
    return box;
}

void TriangleMesh::update_derived() {
    face_normals.resize(triangles.size());
    face_areas.resize(triangles.size());
    total_area = 0.0;
    for (std::size_t t = 0; t < triangles.size(); ++t) {
        const Point3 a = vertices[triangles[t][0]];
        const Point3 b = vertices[triangles[t][1]];
        const Point3 c = vertices[triangles[t][2]];
        const Vec3 n = cross(b - a, c - a);
        const double len = n.norm();
        face_areas[t] = 0.5 * len;
        face_normals[t] = len > 0.0 ? n / len : Vec3{0.0, 0.0, 0.0};
        total_area += face_areas[t];
    }
}

void TriangleMesh::validate() const {
    for (const Point3& v : vertices) {
        if (!v.finite()) raise(ErrorCode::InvalidArgument, "non-finite vertex coordinate");
    }
    for (const auto& tri : triangles) {
        for (int c = 0; c < 3; ++c) {
            if (tri[c] >= vertices.size()) {
                raise(ErrorCode::InvalidArgument, "triangle index out of range");
            }
        }
    }
}

namespace {

struct EdgeKey {
    std::uint32_t a, b;
    bool operator==(const EdgeKey& o) const { return a == o.a && b == o.b; }
};

struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const {
        return std::hash<std::uint64_t>()((std::uint64_t(k.a) << 32) | k.b);
    }
};

struct UnionFind {
    std::vector<std::uint32_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = std::uint32_t(i);
    }
    std::uint32_t find(std::uint32_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    }
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

TopologyReport mesh_topology_report(const TriangleMesh& mesh) {
    TopologyReport report;

    std::unordered_map<EdgeKey, std::uint32_t, EdgeKeyHash> edge_use;
    edge_use.reserve(mesh.triangles.size() * 3);
    UnionFind uf(mesh.vertices.size());

    for (const auto& tri : mesh.triangles) {
        for (int c = 0; c < 3; ++c) {
            const std::uint32_t i = tri[c];
            const std::uint32_t j = tri[(c + 1) % 3];
            edge_use[{std::min(i, j), std::max(i, j)}]++;
        }
        uf.unite(tri[0], tri[1]);
        uf.unite(tri[1], tri[2]);
    }

    for (const auto& [edge, uses] : edge_use) {
        if (uses == 1) report.boundary_edges++;
        if (uses > 2) report.non_manifold_edges++;
    }

    // Components are counted over triangles; isolated vertices do not count.
    std::vector<std::uint32_t> roots;
    for (const auto& tri : mesh.triangles) roots.push_back(uf.find(tri[0]));
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    report.connected_components = roots.size();

    double area = 0.0;
    for (const auto& tri : mesh.triangles) {
        const Point3 a = mesh.vertices[tri[0]];
        const Point3 b = mesh.vertices[tri[1]];
        const Point3 c = mesh.vertices[tri[2]];
        area += 0.5 * cross(b - a, c - a).norm();
    }
    report.total_area = area;
    report.watertight = report.boundary_edges == 0 && report.non_manifold_edges == 0 &&
                        !mesh.triangles.empty();
    return report;
}

} // namespace scanplan
