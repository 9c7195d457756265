#include "scanplan/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace scanplan {

namespace {

constexpr std::uint32_t kLeafSize = 16;

// Heap entry ordered so the WORST candidate sits on top: larger distance
// first, then larger index. Popping trims the candidate set to k.
struct Candidate {
    double dist2;
    std::uint32_t id;
    bool operator<(const Candidate& o) const {
        if (dist2 != o.dist2) return dist2 < o.dist2;
        return id < o.id;
    }
};

} // namespace

PointIndex::PointIndex(const std::vector<Point3>& points) : points_(points) {
    if (points_.empty()) raise(ErrorCode::EmptyCloud, "point index needs at least one point");
    std::vector<std::uint32_t> ids(points_.size());
    for (std::uint32_t i = 0; i < points_.size(); ++i) ids[i] = i;
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(ids, 0, std::uint32_t(points_.size()));
}

std::uint32_t PointIndex::build(std::vector<std::uint32_t>& ids, std::uint32_t begin,
                                std::uint32_t end) {
    const std::uint32_t node_id = std::uint32_t(nodes_.size());
    nodes_.emplace_back();

    const std::uint32_t count = end - begin;
    if (count <= kLeafSize) {
        nodes_[node_id].first = std::uint32_t(order_.size());
        nodes_[node_id].count = count;
        std::sort(ids.begin() + begin, ids.begin() + end);
        order_.insert(order_.end(), ids.begin() + begin, ids.begin() + end);
        return node_id;
    }

    Aabb box;
    for (std::uint32_t i = begin; i < end; ++i) box.expand(points_[ids[i]]);
    const Vec3 ext = box.extent();
    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;

    const std::uint32_t mid = begin + count / 2;
    std::nth_element(ids.begin() + begin, ids.begin() + mid, ids.begin() + end,
                     [&](std::uint32_t lhs, std::uint32_t rhs) {
                         const double a = points_[lhs][axis];
                         const double b = points_[rhs][axis];
                         if (a != b) return a < b;
                         return lhs < rhs;
                     });

    nodes_[node_id].axis = std::uint8_t(axis);
    nodes_[node_id].split = points_[ids[mid]][axis];
    const std::uint32_t left = build(ids, begin, mid);
    const std::uint32_t right = build(ids, mid, end);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

std::vector<std::pair<std::uint32_t, double>> PointIndex::knn(const Point3& query,
                                                              std::size_t k) const {
    if (k == 0) raise(ErrorCode::InvalidArgument, "knn requires k >= 1");
    k = std::min(k, points_.size());

    std::priority_queue<Candidate> heap;

    // Iterative depth-first descent, nearer child first.
    struct Frame {
        std::uint32_t node;
    };
    std::vector<std::uint32_t> stack;
    stack.reserve(64);
    stack.push_back(0);

    auto worst = [&]() {
        return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().dist2;
    };

    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const std::uint32_t id = order_[i];
                const double d2 = (points_[id] - query).norm2();
                const Candidate c{d2, id};
                if (heap.size() < k) {
                    heap.push(c);
                } else if (c < heap.top()) {
                    heap.pop();
                    heap.push(c);
                }
            }
            continue;
        }
        const double delta = query[node.axis] - node.split;
        const std::uint32_t near_child = delta < 0.0 ? node.left : node.right;
        const std::uint32_t far_child = delta < 0.0 ? node.right : node.left;
        // Far side can still hold ties at exactly worst(), which matter for
        // the index tie rule, hence <= rather than <.
        if (delta * delta <= worst()) stack.push_back(far_child);
        stack.push_back(near_child);
    }

    std::vector<std::pair<std::uint32_t, double>> result(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
        result[i] = {heap.top().id, std::sqrt(heap.top().dist2)};
        heap.pop();
    }
    return result;
}

std::size_t PointIndex::count_within(const Point3& query, double radius) const {
    const double r2 = radius * radius;
    std::size_t count = 0;
    std::vector<std::uint32_t> stack;
    stack.reserve(64);
    stack.push_back(0);
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                if ((points_[order_[i]] - query).norm2() <= r2) ++count;
            }
            continue;
        }
        const double delta = query[node.axis] - node.split;
        if (delta <= radius) stack.push_back(node.left);
        if (delta >= -radius) stack.push_back(node.right);
    }
    return count;
}

std::vector<std::pair<std::uint32_t, double>> nearest_point(const PointCloud& cloud,
                                                            const Point3& query, std::size_t k) {
    if (cloud.points.empty()) raise(ErrorCode::EmptyCloud, "nearest_point on empty cloud");
    return PointIndex(cloud.points).knn(query, k);
}

} // namespace scanplan
