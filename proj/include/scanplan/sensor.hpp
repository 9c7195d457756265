#pragma once

#include "scanplan/error.hpp"
#include "scanplan/vec3.hpp"

#include <optional>
#include <string>

namespace scanplan {

enum class AgentClass { Ground, Aerial };

inline const char* to_string(AgentClass c) {
    return c == AgentClass::Ground ? "GROUND" : "AERIAL";
}

inline AgentClass agent_class_from_string(const std::string& s) {
    if (s == "GROUND") return AgentClass::Ground;
    if (s == "AERIAL") return AgentClass::Aerial;
    raise(ErrorCode::SchemaError, "unknown agent class '" + s + "'");
}

/// Scanner constraint envelope. Angles in degrees; elevation is measured
/// from horizontal, incidence from the surface normal.
struct SensorModel {
    double min_range = 0.6;       // m
    double max_range = 60.0;      // m
    double max_incidence = 75.0;  // deg; grazing hits beyond this are uncounted
    double min_elevation = -60.0; // deg
    double max_elevation = 90.0;  // deg
    double horizontal_fov = 360.0; // deg; 360 = panoramic
    double angular_resolution = 1.0; // deg, simulation only
    double range_noise_sigma = 0.0;  // m, simulation only

    void validate() const {
        if (!(0.0 <= min_range && min_range < max_range)) {
            raise(ErrorCode::InvalidArgument, "sensor range bounds invalid");
        }
        if (!(0.0 < max_incidence && max_incidence <= 90.0)) {
            raise(ErrorCode::InvalidArgument, "sensor max_incidence out of (0, 90]");
        }
        if (!(-90.0 <= min_elevation && min_elevation < max_elevation && max_elevation <= 90.0)) {
            raise(ErrorCode::InvalidArgument, "sensor elevation band invalid");
        }
        if (!(0.0 < horizontal_fov && horizontal_fov <= 360.0)) {
            raise(ErrorCode::InvalidArgument, "sensor horizontal fov out of (0, 360]");
        }
        if (angular_resolution <= 0.0) {
            raise(ErrorCode::InvalidArgument, "sensor angular resolution must be positive");
        }
        if (range_noise_sigma < 0.0) {
            raise(ErrorCode::InvalidArgument, "sensor range noise must be >= 0");
        }
    }
};

/// Candidate (or selected) scanner pose.
struct Viewpoint {
    int id = 0;
    Point3 position;
    AgentClass agent_class = AgentClass::Ground;
    std::optional<double> heading; // deg, used when horizontal_fov < 360
};

/// Per-agent-class sensor envelopes.
struct SensorSuite {
    SensorModel ground; // TLS defaults
    SensorModel aerial; // UAV defaults

    const SensorModel& for_class(AgentClass c) const {
        return c == AgentClass::Ground ? ground : aerial;
    }

    static SensorSuite survey_defaults() {
        SensorSuite s;
        s.ground = SensorModel{0.6, 60.0, 75.0, -60.0, 90.0, 360.0, 1.0, 0.0};
        s.aerial = SensorModel{2.0, 80.0, 75.0, -90.0, 30.0, 360.0, 1.0, 0.0};
        return s;
    }
};

} // namespace scanplan
