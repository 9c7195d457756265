#pragma once

#include "scanplan/bitset.hpp"
#include "scanplan/config.hpp"
#include "scanplan/plan.hpp"
#include "scanplan/sampling.hpp"
#include "scanplan/simulate.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace scanplan {

/// Everything the planning stage produced for one mesh: the plan artifact
/// plus the pieces eval and viz need.
struct PlanningResult {
    ScanPlan plan;
    std::vector<SurfaceSample> samples; // on the planning mesh
    Bitset ground_covered;
    Bitset aerial_covered;
};

/// One-shot planning on a mesh: sample, generate candidates, build coverage,
/// two-phase select, order tours. weight_mode_override lets the pipeline
/// force DENSITY_DEFICIT on later iterations.
PlanningResult plan_scene(const TriangleMesh& mesh, const PointCloud* prior_cloud,
                          const RunConfig& cfg,
                          std::optional<WeightMode> weight_mode_override = std::nullopt);

/// Simulates one fine scan per selected viewpoint against the truth index,
/// writing scans/vp_g<id>.ply / vp_a<id>.ply under `dir` and returning the
/// merged cloud.
PointCloud simulate_plan_scans(const SpatialIndex& truth_index, const ScanPlan& plan,
                               const RunConfig& cfg, const std::filesystem::path& dir);

/// Re-derives samples and per-class visibility for a saved plan against a
/// mesh; the honest-evaluation entry point for the CLI and C API.
CoverageReport evaluate_plan_on_mesh(const TriangleMesh& mesh, const ScanPlan& plan,
                                     const RunConfig& cfg);

/// Recomputes coverage of the plan's viewpoints on the mesh and writes the
/// Fig.-4 style colored export.
void export_plan_viz(const TriangleMesh& mesh, const ScanPlan& plan, const RunConfig& cfg,
                     const std::filesystem::path& path);

struct IterationRecord {
    int iteration = 0;
    double planned_fraction = 0.0;  // on the planning mesh
    double achieved_fraction = 0.0; // cumulative executed scans vs ground truth
    ScanPlan plan;
    std::filesystem::path dir;
};

struct PipelineResult {
    std::vector<IterationRecord> iterations;
    double final_achieved = 0.0;
};

/// The coarse-to-fine loop. Iteration 0 maps the site with a noisy low-res
/// walk-through, meshes it, and plans on that coarse model (or plans straight
/// on prior_mesh when given - the BIM bypass). Later iterations remesh the
/// accumulated fine scans, reweight by density deficit, re-plan and re-scan.
/// Stops when the achieved-coverage gain drops below epsilon_stop or after
/// max_iterations. Every stage is seeded; artifacts land under out_dir.
PipelineResult run_pipeline(const TriangleMesh& ground_truth, const RunConfig& cfg,
                            const std::filesystem::path& out_dir,
                            const std::optional<TriangleMesh>& prior_mesh = std::nullopt);

} // namespace scanplan
