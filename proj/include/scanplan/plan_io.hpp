#pragma once

#include "scanplan/plan.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace scanplan {

/// Stable, documented plan schema. Top-level keys in fixed order: meta,
/// config_hash, seed, selections, tours, coverage. Floats print with 9
/// significant digits, so equal plans serialize byte-identically. Empty
/// selections are present as [] rather than omitted.
std::string serialize_plan(const ScanPlan& plan);

/// Parses a serialized plan; missing or mistyped keys raise SchemaError
/// naming the offending key. When expected_config_hash is given, a mismatch
/// also raises SchemaError (tamper check).
ScanPlan parse_plan(const std::string& text,
                    const std::optional<std::string>& expected_config_hash = std::nullopt);

void save_plan(const ScanPlan& plan, const std::filesystem::path& path);
ScanPlan load_plan(const std::filesystem::path& path,
                   const std::optional<std::string>& expected_config_hash = std::nullopt);

bool plans_equal(const ScanPlan& a, const ScanPlan& b, double float_tol = 0.0);

} // namespace scanplan
