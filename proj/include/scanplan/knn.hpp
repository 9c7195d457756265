#pragma once

#include "scanplan/geometry.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace scanplan {

/// KD-tree over a point cloud for k-NN and radius queries. Results match
/// exhaustive search exactly, including the tie rule (equal distances order
/// by the lower point index). Immutable after construction.
class PointIndex {
public:
    explicit PointIndex(const std::vector<Point3>& points);

    /// The k nearest points by Euclidean distance, ascending; ties by index.
    /// Returns min(k, size) entries of (point index, distance).
    std::vector<std::pair<std::uint32_t, double>> knn(const Point3& query, std::size_t k) const;

    /// Number of points with |p - query| <= radius.
    std::size_t count_within(const Point3& query, double radius) const;

    std::size_t size() const { return points_.size(); }
    const Point3& point(std::uint32_t id) const { return points_[id]; }

private:
    struct Node {
        double split = 0.0;
        std::uint32_t left = 0;
        std::uint32_t right = 0;
        std::uint32_t first = 0;
        std::uint32_t count = 0; // 0 for internal
        std::uint8_t axis = 0;
        bool is_leaf() const { return count > 0; }
    };

    std::uint32_t build(std::vector<std::uint32_t>& ids, std::uint32_t begin, std::uint32_t end);

    std::vector<Point3> points_;
    std::vector<std::uint32_t> order_; // leaf ranges
    std::vector<Node> nodes_;
};

/// One-shot k nearest neighbours of `query` in `cloud`.
std::vector<std::pair<std::uint32_t, double>> nearest_point(const PointCloud& cloud,
                                                            const Point3& query, std::size_t k);

} // namespace scanplan
