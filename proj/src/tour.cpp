#include "scanplan/tour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace scanplan {

double tour_length(const std::vector<int>& order, const std::vector<TourPoint>& points) {
    std::unordered_map<int, Point3> by_id;
    for (const auto& [id, p] : points) by_id[id] = p;
    double length = 0.0;
    for (std::size_t i = 1; i < order.size(); ++i) {
        length += distance(by_id.at(order[i - 1]), by_id.at(order[i]));
    }
    return length;
}

Tour nn_tour(const std::vector<TourPoint>& points, int start_id) {
    if (points.empty()) raise(ErrorCode::EmptyInput, "nn_tour needs at least one point");

    std::size_t start = points.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].first == start_id) start = i;
    }
    if (start == points.size()) {
        raise(ErrorCode::UnknownStart, "start id " + std::to_string(start_id) + " not present");
    }

    Tour tour;
    std::vector<char> visited(points.size(), 0);
    std::size_t current = start;
    visited[current] = 1;
    tour.order.push_back(points[current].first);

    for (std::size_t step = 1; step < points.size(); ++step) {
        std::size_t next = points.size();
        double best = std::numeric_limits<double>::infinity();
        int best_id = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (visited[i]) continue;
            const double d = distance(points[current].second, points[i].second);
            if (d < best || (d == best && points[i].first < best_id)) {
                best = d;
                next = i;
                best_id = points[i].first;
            }
        }
        visited[next] = 1;
        tour.length += best;
        tour.order.push_back(points[next].first);
        current = next;
    }
    return tour;
}

Tour two_opt(const Tour& tour, const std::vector<TourPoint>& points) {
    std::unordered_map<int, Point3> by_id;
    for (const auto& [id, p] : points) by_id[id] = p;

    Tour out = tour;
    const std::size_t n = out.order.size();
    if (n < 3) return out;

    std::vector<Point3> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[i] = by_id.at(out.order[i]);

    const auto leg = [&](std::size_t a, std::size_t b) { return distance(pos[a], pos[b]); };

    for (;;) {
        double best_delta = 0.0;
        std::size_t best_i = 0, best_j = 0;
        // Reversing order[i..j] on an open path changes at most the legs
        // entering i and leaving j.
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (i == 0 && j == n - 1) continue; // whole-path reversal, no change
                double delta = 0.0;
                if (i > 0) delta += leg(i - 1, j) - leg(i - 1, i);
                if (j + 1 < n) delta += leg(i, j + 1) - leg(j, j + 1);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_i = i;
                    best_j = j;
                }
            }
        }
        if (best_delta >= -1e-9) break;
        std::reverse(out.order.begin() + best_i, out.order.begin() + best_j + 1);
        std::reverse(pos.begin() + best_i, pos.begin() + best_j + 1);
        out.length += best_delta;
    }

    // Re-sum to keep the stored length consistent with the order within 1e-6.
    out.length = 0.0;
    for (std::size_t i = 1; i < n; ++i) out.length += leg(i - 1, i);
    return out;
}

std::vector<Tour> plan_tours(const std::vector<ClassSelection>& selections) {
    std::vector<Tour> tours;
    for (const ClassSelection& sel : selections) {
        if (sel.viewpoints.empty()) continue;

        Point3 depot;
        if (sel.depot) {
            depot = *sel.depot;
        } else {
            Aabb box;
            for (const auto& [id, p] : sel.viewpoints) box.expand(p);
            depot = sel.agent_class == AgentClass::Ground
                        ? box.min
                        : Point3{box.min.x, box.min.y, box.max.z};
        }

        int start_id = sel.viewpoints.front().first;
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [id, p] : sel.viewpoints) {
            const double d = distance(depot, p);
            if (d < best || (d == best && id < start_id)) {
                best = d;
                start_id = id;
            }
        }

        Tour tour = two_opt(nn_tour(sel.viewpoints, start_id), sel.viewpoints);
        tour.agent_class = sel.agent_class;
        tours.push_back(std::move(tour));
    }
    return tours;
}

} // namespace scanplan
