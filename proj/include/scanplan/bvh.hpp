#pragma once

#include "scanplan/geometry.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace scanplan {

struct RayHit {
    double t = 0.0;              // meters along the ray
    std::uint32_t triangle_id = 0;
    Point3 point;
};

/// Möller-Trumbore ray/triangle test. Determinant epsilon 1e-9; barycentric
/// bounds carry a small slack so rays through shared edges and vertices hit.
std::optional<double> intersect_triangle(const Point3& origin, const Dir3& dir,
                                         const Point3& a, const Point3& b, const Point3& c);

/// Bounding volume hierarchy over mesh triangles. Median split on the longest
/// axis of the centroid bounds, leaf size <= 4. Immutable after construction;
/// concurrent read-only queries are safe. The index keeps its own copy of the
/// triangle vertices, so it does not dangle if the source mesh goes away.
class SpatialIndex {
public:
    explicit SpatialIndex(const TriangleMesh& mesh);

    /// Nearest intersection with t in (1e-6, t_max], or nullopt. Ties on t
    /// are broken by the lowest triangle id, matching exhaustive search.
    std::optional<RayHit> ray_cast(const Point3& origin, const Dir3& dir, double t_max) const;

    /// All intersections with t in (1e-6, t_max], sorted by (t, triangle_id).
    /// Duplicate-free. Used by generators that walk through a scene.
    std::vector<RayHit> ray_cast_all(const Point3& origin, const Dir3& dir, double t_max) const;

    const Aabb& bounds() const { return nodes_[0].box; }
    std::size_t triangle_count() const { return tri_count_; }

    // Self-intersection guard: a ray started on a surface must not report
    // its own triangle at t ~ 0.
    static constexpr double kMinHitDistance = 1e-6;

private:
    struct Node {
        Aabb box;
        std::uint32_t left = 0;   // internal: child node ids
        std::uint32_t right = 0;
        std::uint32_t first = 0;  // leaf: range into tri_ids_
        std::uint32_t count = 0;  // 0 for internal nodes
        bool is_leaf() const { return count > 0; }
    };

    std::uint32_t build(std::vector<std::uint32_t>& ids, std::uint32_t begin, std::uint32_t end);

    std::vector<Node> nodes_;
    std::vector<std::uint32_t> tri_ids_;      // leaf ranges index this
    std::vector<std::array<Point3, 3>> tris_; // indexed by triangle id
    std::vector<Vec3> centroids_;             // build-time only, cleared after
    std::size_t tri_count_ = 0;
};

} // namespace scanplan
