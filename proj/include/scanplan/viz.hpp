#pragma once

#include "scanplan/bitset.hpp"
#include "scanplan/plan.hpp"
#include "scanplan/sampling.hpp"

#include <filesystem>
#include <vector>

namespace scanplan {

/// Writes the coverage picture as data: a colored copy of the mesh at `path`
/// (covered-by-ground blue, covered-only-by-aerial green, uncovered red) plus
/// the viewpoints as colored points at `<stem>_viewpoints.ply`. Vertex color
/// aggregates the incident triangles' sample statuses; red wins over green
/// wins over blue so blind spots stay visible.
void export_coverage_viz(const TriangleMesh& mesh, const std::vector<SurfaceSample>& samples,
                         const Bitset& ground_covered, const Bitset& aerial_covered,
                         const std::vector<PlannedViewpoint>& viewpoints,
                         const std::filesystem::path& path);

} // namespace scanplan
