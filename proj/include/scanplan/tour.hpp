#pragma once

#include "scanplan/sensor.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace scanplan {

/// Open visiting path over selected viewpoints of one agent class; no return
/// leg. length is the sum of Euclidean legs along the order.
struct Tour {
    AgentClass agent_class = AgentClass::Ground;
    std::vector<int> order; // viewpoint ids, a permutation of the input set
    double length = 0.0;    // m
};

using TourPoint = std::pair<int, Point3>; // (viewpoint id, position)

double tour_length(const std::vector<int>& order, const std::vector<TourPoint>& points);

/// Greedy nearest-neighbour chain from start_id; distance ties take the
/// lowest id.
Tour nn_tour(const std::vector<TourPoint>& points, int start_id);

/// Best-improvement 2-opt: repeatedly applies the segment reversal with the
/// largest length saving (scan order i ascending then j fixes ties) until no
/// move saves more than 1e-9.
Tour two_opt(const Tour& tour, const std::vector<TourPoint>& points);

struct ClassSelection {
    AgentClass agent_class = AgentClass::Ground;
    std::vector<TourPoint> viewpoints;
    std::optional<Point3> depot; // default: scene box min corner (ground) or
                                 // the same corner at the box top (aerial)
};

/// Per-class tours: start at the viewpoint nearest the depot (ties by id),
/// then nearest-neighbour construction plus 2-opt. Classes are independent;
/// a class with no selection yields no tour.
std::vector<Tour> plan_tours(const std::vector<ClassSelection>& selections);

} // namespace scanplan
