#include "scanplan/bvh.hpp"

#include <algorithm>
#include <limits>

namespace scanplan {

namespace {

constexpr double kDetEpsilon = 1e-9;
constexpr double kBaryEpsilon = 1e-12;
constexpr std::uint32_t kLeafSize = 4;

// Slab test against an AABB. Returns false when the ray cannot produce a hit
// with t in (t_min, t_max].
bool ray_box(const Point3& origin, const Vec3& inv_dir, const Aabb& box, double t_max) {
    double t0 = 0.0;
    double t1 = t_max;
    for (int axis = 0; axis < 3; ++axis) {
        const double o = origin[axis];
        const double inv = inv_dir[axis];
        if (!std::isfinite(inv)) {
            // Ray parallel to this slab; a 0 * inf product would yield NaN.
            if (o < box.min[axis] || o > box.max[axis]) return false;
            continue;
        }
        double near = (box.min[axis] - o) * inv;
        double far = (box.max[axis] - o) * inv;
        if (inv < 0.0) std::swap(near, far);
        t0 = near > t0 ? near : t0;
        t1 = far < t1 ? far : t1;
        if (t0 > t1) return false;
    }
    return true;
}

} // namespace

std::optional<double> intersect_triangle(const Point3& origin, const Dir3& dir,
                                         const Point3& a, const Point3& b, const Point3& c) {
    const Vec3 e1 = b - a;
    const Vec3 e2 = c - a;
    const Vec3 pvec = cross(dir, e2);
    const double det = dot(e1, pvec);
    if (std::abs(det) < kDetEpsilon) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 tvec = origin - a;
    const double u = dot(tvec, pvec) * inv_det;
    if (u < -kBaryEpsilon || u > 1.0 + kBaryEpsilon) return std::nullopt;
    const Vec3 qvec = cross(tvec, e1);
    const double v = dot(dir, qvec) * inv_det;
    if (v < -kBaryEpsilon || u + v > 1.0 + kBaryEpsilon) return std::nullopt;
    return dot(e2, qvec) * inv_det;
}

SpatialIndex::SpatialIndex(const TriangleMesh& mesh) {
    tri_count_ = mesh.triangle_count();
    if (tri_count_ == 0) raise(ErrorCode::EmptyMesh, "spatial index needs at least one triangle");

    tris_.resize(tri_count_);
    centroids_.resize(tri_count_);
    for (std::uint32_t t = 0; t < tri_count_; ++t) {
        tris_[t] = {mesh.vertex(t, 0), mesh.vertex(t, 1), mesh.vertex(t, 2)};
        centroids_[t] = (tris_[t][0] + tris_[t][1] + tris_[t][2]) / 3.0;
    }

    std::vector<std::uint32_t> ids(tri_count_);
    for (std::uint32_t t = 0; t < tri_count_; ++t) ids[t] = t;
    nodes_.reserve(2 * tri_count_);
    build(ids, 0, std::uint32_t(tri_count_));
    centroids_.clear();
    centroids_.shrink_to_fit();
}

std::uint32_t SpatialIndex::build(std::vector<std::uint32_t>& ids, std::uint32_t begin,
                                  std::uint32_t end) {
    const std::uint32_t node_id = std::uint32_t(nodes_.size());
    nodes_.emplace_back();

    Aabb box;
    Aabb centroid_box;
    for (std::uint32_t i = begin; i < end; ++i) {
        for (const Point3& v : tris_[ids[i]]) box.expand(v);
        centroid_box.expand(centroids_[ids[i]]);
    }
    nodes_[node_id].box = box;

    const std::uint32_t count = end - begin;
    if (count <= kLeafSize) {
        nodes_[node_id].first = std::uint32_t(tri_ids_.size());
        nodes_[node_id].count = count;
        // Leaf triangles kept in ascending id order for deterministic ties.
        std::sort(ids.begin() + begin, ids.begin() + end);
        tri_ids_.insert(tri_ids_.end(), ids.begin() + begin, ids.begin() + end);
        return node_id;
    }

    const Vec3 ext = centroid_box.extent();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;

    const std::uint32_t mid = begin + count / 2;
    std::nth_element(ids.begin() + begin, ids.begin() + mid, ids.begin() + end,
                     [&](std::uint32_t lhs, std::uint32_t rhs) {
                         const double cl = centroids_[lhs][axis];
                         const double cr = centroids_[rhs][axis];
                         if (cl != cr) return cl < cr;
                         return lhs < rhs; // total order keeps the build deterministic
                     });

    const std::uint32_t left = build(ids, begin, mid);
    const std::uint32_t right = build(ids, mid, end);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

std::optional<RayHit> SpatialIndex::ray_cast(const Point3& origin, const Dir3& dir,
                                             double t_max) const {
    const Vec3 inv_dir{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};

    double best_t = std::numeric_limits<double>::infinity();
    std::uint32_t best_id = std::numeric_limits<std::uint32_t>::max();

    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        const double limit = best_t < t_max ? best_t : t_max;
        if (!ray_box(origin, inv_dir, node.box, limit)) continue;
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const std::uint32_t id = tri_ids_[i];
                const auto& tri = tris_[id];
                const auto t = intersect_triangle(origin, dir, tri[0], tri[1], tri[2]);
                if (!t || *t <= kMinHitDistance || *t > t_max) continue;
                if (*t < best_t || (*t == best_t && id < best_id)) {
                    best_t = *t;
                    best_id = id;
                }
            }
        } else {
            stack[top++] = node.right;
            stack[top++] = node.left;
        }
    }

    if (best_id == std::numeric_limits<std::uint32_t>::max()) return std::nullopt;
    return RayHit{best_t, best_id, origin + dir * best_t};
}

std::vector<RayHit> SpatialIndex::ray_cast_all(const Point3& origin, const Dir3& dir,
                                               double t_max) const {
    const Vec3 inv_dir{1.0 / dir.x, 1.0 / dir.y, 1.0 / dir.z};
    std::vector<RayHit> hits;

    std::uint32_t stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_box(origin, inv_dir, node.box, t_max)) continue;
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const std::uint32_t id = tri_ids_[i];
                const auto& tri = tris_[id];
                const auto t = intersect_triangle(origin, dir, tri[0], tri[1], tri[2]);
                if (!t || *t <= kMinHitDistance || *t > t_max) continue;
                hits.push_back(RayHit{*t, id, origin + dir * *t});
            }
        } else {
            stack[top++] = node.right;
            stack[top++] = node.left;
        }
    }

    std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.triangle_id < b.triangle_id;
    });
    return hits;
}

} // namespace scanplan
