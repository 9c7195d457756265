#include "scanplan/plan_io.hpp"

#include "scanplan/config.hpp"
#include "scanplan/ply_io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace scanplan {

namespace {

void emit_viewpoints(std::ostringstream& out, const std::vector<PlannedViewpoint>& vps,
                     const char* indent) {
    if (vps.empty()) {
        out << "[]";
        return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < vps.size(); ++i) {
        const PlannedViewpoint& vp = vps[i];
        out << indent << "  {\"id\": " << vp.id << ", \"position\": [" << format_g9(vp.position.x)
            << ", " << format_g9(vp.position.y) << ", " << format_g9(vp.position.z)
            << "], \"class\": \"" << to_string(vp.agent_class) << "\", \"marginal_gain\": "
            << format_g9(vp.marginal_gain) << ", \"heading\": ";
        if (vp.heading) {
            out << format_g9(*vp.heading);
        } else {
            out << "null";
        }
        out << "}" << (i + 1 < vps.size() ? "," : "") << "\n";
    }
    out << indent << "]";
}

template <typename T>
void emit_int_array(std::ostringstream& out, const std::vector<T>& values) {
    out << "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out << (i ? ", " : "") << values[i];
    }
    out << "]";
}

using json = nlohmann::json;

[[noreturn]] void schema_fail(const std::string& key, const std::string& what) {
    raise(ErrorCode::SchemaError, "plan key '" + key + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& context) {
    if (!obj.is_object()) schema_fail(context, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) schema_fail(context.empty() ? key : context + "." + key, "missing");
    return *it;
}

double require_number(const json& obj, const std::string& key, const std::string& context) {
    const json& v = require(obj, key, context);
    if (!v.is_number()) schema_fail(context + "." + key, "expected a number");
    return v.get<double>();
}

std::vector<PlannedViewpoint> parse_viewpoints(const json& arr, AgentClass expected,
                                               const std::string& context) {
    if (!arr.is_array()) schema_fail(context, "expected an array");
    std::vector<PlannedViewpoint> out;
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string ctx = context + "[" + std::to_string(i) + "]";
        const json& v = arr[i];
        PlannedViewpoint vp;
        const json& id = require(v, "id", ctx);
        if (!id.is_number_integer()) schema_fail(ctx + ".id", "expected an integer");
        vp.id = id.get<int>();
        const json& pos = require(v, "position", ctx);
        if (!pos.is_array() || pos.size() != 3) {
            schema_fail(ctx + ".position", "expected [x, y, z]");
        }
        vp.position = {pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>()};
        const json& cls = require(v, "class", ctx);
        if (!cls.is_string()) schema_fail(ctx + ".class", "expected a string");
        vp.agent_class = agent_class_from_string(cls.get<std::string>());
        if (vp.agent_class != expected) schema_fail(ctx + ".class", "wrong agent class");
        vp.marginal_gain = require_number(v, "marginal_gain", ctx);
        const json& heading = require(v, "heading", ctx);
        if (heading.is_number()) {
            vp.heading = heading.get<double>();
        } else if (!heading.is_null()) {
            schema_fail(ctx + ".heading", "expected a number or null");
        }
        out.push_back(vp);
    }
    return out;
}

} // namespace

std::string serialize_plan(const ScanPlan& plan) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"meta\": {\"tool\": \"scanplan\", \"version\": \"" << plan.tool_version
        << "\"},\n";
    out << "  \"config_hash\": \"" << plan.config_hash << "\",\n";
    out << "  \"seed\": " << plan.seed << ",\n";

    out << "  \"selections\": {\n";
    out << "    \"ground\": ";
    emit_viewpoints(out, plan.ground, "    ");
    out << ",\n";
    out << "    \"aerial\": ";
    emit_viewpoints(out, plan.aerial, "    ");
    out << "\n  },\n";

    out << "  \"tours\": [";
    for (std::size_t i = 0; i < plan.tours.size(); ++i) {
        const PlanTour& tour = plan.tours[i];
        out << (i ? "," : "") << "\n    {\"class\": \"" << to_string(tour.agent_class)
            << "\", \"order\": ";
        emit_int_array(out, tour.order);
        out << ", \"length\": " << format_g9(tour.length) << "}";
    }
    out << (plan.tours.empty() ? "]" : "\n  ]") << ",\n";

    out << "  \"coverage\": {\"planned_fraction\": " << format_g9(plan.planned_fraction)
        << ", \"residual_uncovered\": ";
    emit_int_array(out, plan.residual_uncovered);
    out << "}\n";
    out << "}\n";
    return out.str();
}

ScanPlan parse_plan(const std::string& text,
                    const std::optional<std::string>& expected_config_hash) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        raise(ErrorCode::ParseError, std::string("plan is not valid JSON: ") + e.what());
    }

    ScanPlan plan;
    const json& meta = require(root, "meta", "");
    const json& version = require(meta, "version", "meta");
    if (!version.is_string()) schema_fail("meta.version", "expected a string");
    plan.tool_version = version.get<std::string>();

    const json& hash = require(root, "config_hash", "");
    if (!hash.is_string()) schema_fail("config_hash", "expected a string");
    plan.config_hash = hash.get<std::string>();
    if (expected_config_hash && plan.config_hash != *expected_config_hash) {
        schema_fail("config_hash", "does not match the supplied config");
    }

    const json& seed = require(root, "seed", "");
    if (!seed.is_number_integer()) schema_fail("seed", "expected an integer");
    plan.seed = seed.get<std::uint64_t>();

    const json& selections = require(root, "selections", "");
    plan.ground = parse_viewpoints(require(selections, "ground", "selections"),
                                   AgentClass::Ground, "selections.ground");
    plan.aerial = parse_viewpoints(require(selections, "aerial", "selections"),
                                   AgentClass::Aerial, "selections.aerial");

    const json& tours = require(root, "tours", "");
    if (!tours.is_array()) schema_fail("tours", "expected an array");
    for (std::size_t i = 0; i < tours.size(); ++i) {
        const std::string ctx = "tours[" + std::to_string(i) + "]";
        PlanTour tour;
        const json& cls = require(tours[i], "class", ctx);
        if (!cls.is_string()) schema_fail(ctx + ".class", "expected a string");
        tour.agent_class = agent_class_from_string(cls.get<std::string>());
        const json& order = require(tours[i], "order", ctx);
        if (!order.is_array()) schema_fail(ctx + ".order", "expected an array");
        for (const json& v : order) tour.order.push_back(v.get<int>());
        tour.length = require_number(tours[i], "length", ctx);
        plan.tours.push_back(tour);
    }

    const json& coverage = require(root, "coverage", "");
    plan.planned_fraction = require_number(coverage, "planned_fraction", "coverage");
    const json& residual = require(coverage, "residual_uncovered", "coverage");
    if (!residual.is_array()) schema_fail("coverage.residual_uncovered", "expected an array");
    for (const json& v : residual) plan.residual_uncovered.push_back(v.get<std::uint32_t>());

    return plan;
}

void save_plan(const ScanPlan& plan, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_plan(plan));
}

ScanPlan load_plan(const std::filesystem::path& path,
                   const std::optional<std::string>& expected_config_hash) {
    std::ifstream in(path);
    if (!in) raise(ErrorCode::IoError, "cannot open plan file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_plan(buf.str(), expected_config_hash);
}

bool plans_equal(const ScanPlan& a, const ScanPlan& b, double float_tol) {
    const auto feq = [float_tol](double x, double y) {
        return float_tol == 0.0 ? x == y
                                : std::abs(x - y) <= float_tol * std::max({1.0, std::abs(x),
                                                                           std::abs(y)});
    };
    const auto vps_equal = [&](const std::vector<PlannedViewpoint>& lhs,
                               const std::vector<PlannedViewpoint>& rhs) {
        if (lhs.size() != rhs.size()) return false;
        for (std::size_t i = 0; i < lhs.size(); ++i) {
            if (lhs[i].id != rhs[i].id || lhs[i].agent_class != rhs[i].agent_class) return false;
            if (!feq(lhs[i].position.x, rhs[i].position.x) ||
                !feq(lhs[i].position.y, rhs[i].position.y) ||
                !feq(lhs[i].position.z, rhs[i].position.z)) {
                return false;
            }
            if (!feq(lhs[i].marginal_gain, rhs[i].marginal_gain)) return false;
            if (lhs[i].heading.has_value() != rhs[i].heading.has_value()) return false;
            if (lhs[i].heading && !feq(*lhs[i].heading, *rhs[i].heading)) return false;
        }
        return true;
    };

    if (a.tool_version != b.tool_version || a.config_hash != b.config_hash || a.seed != b.seed) {
        return false;
    }
    if (!vps_equal(a.ground, b.ground) || !vps_equal(a.aerial, b.aerial)) return false;
    if (a.tours.size() != b.tours.size()) return false;
    for (std::size_t i = 0; i < a.tours.size(); ++i) {
        if (a.tours[i].agent_class != b.tours[i].agent_class ||
            a.tours[i].order != b.tours[i].order || !feq(a.tours[i].length, b.tours[i].length)) {
            return false;
        }
    }
    return feq(a.planned_fraction, b.planned_fraction) &&
           a.residual_uncovered == b.residual_uncovered;
}

} // namespace scanplan
