#include "scanplan/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace scanplan {

std::string format_g9(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

namespace {

struct KeyDesc {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

double parse_double(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        raise(ErrorCode::ParseError, "config key '" + key + "': bad number '" + value + "'");
    }
    return v;
}

long long parse_int(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const long long v = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        raise(ErrorCode::ParseError, "config key '" + key + "': bad integer '" + value + "'");
    }
    return v;
}

KeyDesc dbl(std::string key, double RunConfig::* member) {
    return {key, [member](const RunConfig& c) { return format_g9(c.*member); },
            [key, member](RunConfig& c, const std::string& v) { c.*member = parse_double(key, v); }};
}

template <typename Sub>
KeyDesc dbl(std::string key, Sub RunConfig::* sub, double Sub::* member) {
    return {key, [sub, member](const RunConfig& c) { return format_g9(c.*sub.*member); },
            [key, sub, member](RunConfig& c, const std::string& v) {
                c.*sub.*member = parse_double(key, v);
            }};
}

KeyDesc sensor_dbl(std::string key, SensorModel SensorSuite::* which,
                   double SensorModel::* member) {
    return {key,
            [which, member](const RunConfig& c) { return format_g9(c.sensors.*which.*member); },
            [key, which, member](RunConfig& c, const std::string& v) {
                c.sensors.*which.*member = parse_double(key, v);
            }};
}

const std::vector<KeyDesc>& key_table() {
    static const std::vector<KeyDesc> table = [] {
        std::vector<KeyDesc> t;
        t.push_back({"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
                     [](RunConfig& c, const std::string& v) {
                         c.seed = std::uint64_t(parse_int("seed", v));
                     }});
        t.push_back({"runtime.threads",
                     [](const RunConfig& c) { return std::to_string(c.threads); },
                     [](RunConfig& c, const std::string& v) {
                         const long long n = parse_int("runtime.threads", v);
                         if (n < 0) raise(ErrorCode::ParseError, "runtime.threads must be >= 0");
                         c.threads = unsigned(n);
                     }});

        t.push_back(dbl("meshify.voxel_size", &RunConfig::meshify, &MeshifyParams::voxel_size));
        t.push_back(dbl("meshify.truncation_scale", &RunConfig::meshify,
                        &MeshifyParams::truncation_scale));
        t.push_back({"meshify.normals_k",
                     [](const RunConfig& c) { return std::to_string(c.meshify.normals_k); },
                     [](RunConfig& c, const std::string& v) {
                         c.meshify.normals_k = int(parse_int("meshify.normals_k", v));
                     }});
        t.push_back(dbl("meshify.min_component_area_scale", &RunConfig::meshify,
                        &MeshifyParams::min_component_area_scale));
        t.push_back({"meshify.max_grid_nodes",
                     [](const RunConfig& c) { return std::to_string(c.meshify.max_grid_nodes); },
                     [](RunConfig& c, const std::string& v) {
                         c.meshify.max_grid_nodes =
                             std::size_t(parse_int("meshify.max_grid_nodes", v));
                     }});

        t.push_back(dbl("sampling.spacing", &RunConfig::sampling_spacing));

        t.push_back(dbl("ground.grid_spacing", &RunConfig::ground,
                        &GroundCandidateParams::grid_spacing));
        t.push_back(dbl("ground.mount_height", &RunConfig::ground,
                        &GroundCandidateParams::mount_height));
        t.push_back(dbl("ground.clearance_radius", &RunConfig::ground,
                        &GroundCandidateParams::clearance_radius));
        t.push_back(dbl("ground.max_height_above_ground", &RunConfig::ground,
                        &GroundCandidateParams::max_height_above_ground));

        t.push_back(dbl("aerial.lattice_spacing", &RunConfig::aerial,
                        &AerialCandidateParams::lattice_spacing));
        t.push_back(dbl("aerial.standoff", &RunConfig::aerial, &AerialCandidateParams::standoff));
        t.push_back(dbl("aerial.alt_min", &RunConfig::aerial, &AerialCandidateParams::alt_min));
        t.push_back(dbl("aerial.alt_max", &RunConfig::aerial, &AerialCandidateParams::alt_max));

        const auto sensor_block = [&t](const std::string& prefix,
                                       SensorModel SensorSuite::* which) {
            t.push_back(sensor_dbl(prefix + "min_range", which, &SensorModel::min_range));
            t.push_back(sensor_dbl(prefix + "max_range", which, &SensorModel::max_range));
            t.push_back(sensor_dbl(prefix + "max_incidence", which, &SensorModel::max_incidence));
            t.push_back(sensor_dbl(prefix + "elev_min", which, &SensorModel::min_elevation));
            t.push_back(sensor_dbl(prefix + "elev_max", which, &SensorModel::max_elevation));
            t.push_back(sensor_dbl(prefix + "hfov", which, &SensorModel::horizontal_fov));
            t.push_back(sensor_dbl(prefix + "resolution", which,
                                   &SensorModel::angular_resolution));
            t.push_back(sensor_dbl(prefix + "range_sigma", which,
                                   &SensorModel::range_noise_sigma));
        };
        sensor_block("sensor.tls.", &SensorSuite::ground);
        sensor_block("sensor.uav.", &SensorSuite::aerial);

        t.push_back(dbl("solver.target_coverage", &RunConfig::solver,
                        &SolverParams::target_coverage));
        t.push_back(dbl("solver.min_gain", &RunConfig::solver, &SolverParams::min_gain));
        t.push_back({"solver.max_views",
                     [](const RunConfig& c) { return std::to_string(c.solver.max_views); },
                     [](RunConfig& c, const std::string& v) {
                         c.solver.max_views = int(parse_int("solver.max_views", v));
                     }});
        t.push_back({"solver.weight_mode",
                     [](const RunConfig& c) {
                         return std::string(c.weight_mode == WeightMode::Uniform
                                                ? "uniform"
                                                : "density_deficit");
                     },
                     [](RunConfig& c, const std::string& v) {
                         if (v == "uniform") {
                             c.weight_mode = WeightMode::Uniform;
                         } else if (v == "density_deficit") {
                             c.weight_mode = WeightMode::DensityDeficit;
                         } else {
                             raise(ErrorCode::ParseError,
                                   "solver.weight_mode must be uniform or density_deficit");
                         }
                     }});
        t.push_back(dbl("solver.rho_ref", &RunConfig::rho_ref));

        t.push_back(dbl("coarse.resolution", &RunConfig::coarse_resolution));
        t.push_back(dbl("coarse.range_sigma", &RunConfig::coarse_range_sigma));
        t.push_back(dbl("coarse.pose_jitter", &RunConfig::coarse_pose_jitter));
        t.push_back({"coarse.waypoint_decimation",
                     [](const RunConfig& c) {
                         return std::to_string(c.coarse_waypoint_decimation);
                     },
                     [](RunConfig& c, const std::string& v) {
                         c.coarse_waypoint_decimation =
                             int(parse_int("coarse.waypoint_decimation", v));
                     }});
        t.push_back(dbl("coarse.elev_min", &RunConfig::coarse_elev_min));
        t.push_back(dbl("coarse.elev_max", &RunConfig::coarse_elev_max));

        t.push_back(dbl("pipeline.epsilon_stop", &RunConfig::epsilon_stop));
        t.push_back({"pipeline.max_iterations",
                     [](const RunConfig& c) { return std::to_string(c.max_iterations); },
                     [](RunConfig& c, const std::string& v) {
                         c.max_iterations = int(parse_int("pipeline.max_iterations", v));
                     }});
        return t;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

} // namespace

void RunConfig::validate() const {
    sensors.ground.validate();
    sensors.aerial.validate();
    if (meshify.voxel_size <= 0.0) raise(ErrorCode::InvalidArgument, "meshify.voxel_size <= 0");
    if (meshify.truncation_scale < 2.0) {
        raise(ErrorCode::InvalidArgument, "meshify.truncation_scale must be >= 2");
    }
    if (meshify.normals_k < 3) raise(ErrorCode::InvalidArgument, "meshify.normals_k < 3");
    if (sampling_spacing <= 0.0) raise(ErrorCode::InvalidArgument, "sampling.spacing <= 0");
    if (ground.grid_spacing <= 0.0 || ground.mount_height <= 0.0 ||
        ground.clearance_radius < 0.0) {
        raise(ErrorCode::InvalidArgument, "ground candidate parameters invalid");
    }
    if (aerial.lattice_spacing <= 0.0 || aerial.standoff <= 0.0 ||
        aerial.alt_min >= aerial.alt_max) {
        raise(ErrorCode::InvalidArgument, "aerial candidate parameters invalid");
    }
    if (!(solver.target_coverage > 0.0 && solver.target_coverage <= 1.0)) {
        raise(ErrorCode::InvalidArgument, "solver.target_coverage out of (0, 1]");
    }
    if (solver.min_gain < 0.0) raise(ErrorCode::InvalidArgument, "solver.min_gain < 0");
    if (solver.max_views < 1) raise(ErrorCode::InvalidArgument, "solver.max_views < 1");
    if (rho_ref <= 0.0) raise(ErrorCode::InvalidArgument, "solver.rho_ref <= 0");
    if (coarse_resolution <= 0.0) raise(ErrorCode::InvalidArgument, "coarse.resolution <= 0");
    if (coarse_range_sigma < 0.0 || coarse_pose_jitter < 0.0) {
        raise(ErrorCode::InvalidArgument, "coarse noise parameters must be >= 0");
    }
    if (coarse_waypoint_decimation < 1) {
        raise(ErrorCode::InvalidArgument, "coarse.waypoint_decimation < 1");
    }
    if (!(-90.0 <= coarse_elev_min && coarse_elev_min < coarse_elev_max &&
          coarse_elev_max <= 90.0)) {
        raise(ErrorCode::InvalidArgument, "coarse elevation band invalid");
    }
    if (epsilon_stop < 0.0) raise(ErrorCode::InvalidArgument, "pipeline.epsilon_stop < 0");
    if (max_iterations < 1) raise(ErrorCode::InvalidArgument, "pipeline.max_iterations < 1");
}

std::string RunConfig::to_text() const {
    std::ostringstream out;
    for (const auto& desc : key_table()) {
        out << desc.key << " = " << desc.get(*this) << "\n";
    }
    return out.str();
}

std::string RunConfig::hash() const {
    const std::string text = to_text();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void RunConfig::set(const std::string& key, const std::string& value) {
    for (const auto& desc : key_table()) {
        if (key == desc.key) {
            desc.set(*this, value);
            return;
        }
    }
    raise(ErrorCode::ParseError, "unknown config key '" + key + "'");
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            raise(ErrorCode::ParseError,
                  "config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        try {
            cfg.set(key, value);
        } catch (const Error& e) {
            raise(e.code(), "config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

} // namespace scanplan
