#pragma once

#include "scanplan/sensor.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace scanplan {

struct PlannedViewpoint {
    int id = 0;
    Point3 position;
    AgentClass agent_class = AgentClass::Ground;
    double marginal_gain = 0.0;
    std::optional<double> heading;
};

struct PlanTour {
    AgentClass agent_class = AgentClass::Ground;
    std::vector<int> order;
    double length = 0.0;
};

/// The persistent, repeatable planning artifact: the selected viewpoints per
/// agent class, their visiting tours, and the coverage bookkeeping. This is
/// what the navigation layer consumes.
struct ScanPlan {
    std::string tool_version;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<PlannedViewpoint> ground;
    std::vector<PlannedViewpoint> aerial;
    std::vector<PlanTour> tours;
    double planned_fraction = 0.0;
    std::vector<std::uint32_t> residual_uncovered;

    bool empty() const { return ground.empty() && aerial.empty(); }
    std::size_t viewpoint_count() const { return ground.size() + aerial.size(); }
};

} // namespace scanplan
