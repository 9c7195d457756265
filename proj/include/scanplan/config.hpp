#pragma once

#include "scanplan/candidates.hpp"
#include "scanplan/meshify.hpp"
#include "scanplan/nbv.hpp"
#include "scanplan/sensor.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace scanplan {

inline constexpr const char* kToolVersion = "0.1.0";

/// Every tunable in one place, mirrored one-to-one onto the flat dotted-key
/// config file format (`meshify.voxel_size = 0.1`). Unknown keys are
/// rejected on load; numeric ranges are validated.
struct RunConfig {
    std::uint64_t seed = 0;
    unsigned threads = 0; // 0 = all hardware threads

    MeshifyParams meshify;
    double sampling_spacing = 0.3; // m between coverage atoms

    GroundCandidateParams ground;
    AerialCandidateParams aerial;
    SensorSuite sensors = SensorSuite::survey_defaults();

    SolverParams solver;
    WeightMode weight_mode = WeightMode::Uniform;
    double rho_ref = 200.0; // pts/m^2 reference density for deficit weights

    double coarse_resolution = 2.0;   // deg, walk-through mapping scans
    double coarse_range_sigma = 0.03; // m
    double coarse_pose_jitter = 0.05; // m
    int coarse_waypoint_decimation = 4;
    double coarse_elev_min = -90.0;
    double coarse_elev_max = 90.0;

    double epsilon_stop = 0.005; // stop when achieved-coverage gain drops below
    int max_iterations = 3;

    void validate() const;

    /// Canonical text form: every key in registry order, floats at 9
    /// significant digits. Equal configs serialize byte-identically.
    std::string to_text() const;

    /// FNV-1a hash of the canonical text, as 16 hex digits.
    std::string hash() const;

    void set(const std::string& key, const std::string& value);

    static RunConfig from_text(const std::string& text);
    static RunConfig load(const std::filesystem::path& path);
};

/// %.9g float formatting shared by config and plan serialization.
std::string format_g9(double value);

} // namespace scanplan
