#pragma once

#include "scanplan/knn.hpp"
#include "scanplan/visibility.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace scanplan {

enum class WeightMode { Uniform, DensityDeficit };

/// Per-sample nonnegative importance, m^2-scaled.
using WeightVector = std::vector<double>;

/// UNIFORM: w_i = weight_area_i. DENSITY_DEFICIT: w_i = weight_area_i /
/// (1 + rho_i / rho_ref), rho_i the prior-cloud density near sample i, so
/// poorly pre-scanned surface is up-weighted.
WeightVector compute_weights(const std::vector<SurfaceSample>& samples,
                             const PointCloud* prior_cloud, WeightMode mode, double rho_ref);

struct Selection {
    struct Pick {
        int viewpoint_id = 0;
        double marginal_gain = 0.0; // weight newly covered by this pick
    };
    std::vector<Pick> picks;     // in selection order; gains non-increasing
    Bitset covered;              // union of the selected rows
    double coverage_fraction = 0.0; // covered weight / total weight
};

struct SolverParams {
    double target_coverage = 0.98;
    double min_gain = 0.05; // m^2
    int max_views = 64;
};

/// Greedy weighted set cover: repeatedly picks the candidate with the largest
/// uncovered weight (ties to the lowest viewpoint id) until the target, the
/// min-gain floor, or the view budget stops it. Gain evaluation fans out over
/// workers; the argmax matches serial evaluation exactly.
Selection greedy_select(const CoverageMatrix& matrix, const WeightVector& weights,
                        const SolverParams& params, unsigned workers = 0);

/// Exhaustive minimum-cardinality cover for oracle use; candidate count must
/// be <= 20. Ties resolve to the lexicographically smallest id set. Picks are
/// ordered by marginal gain so Selection invariants hold.
Selection brute_force_cover(const CoverageMatrix& matrix, const WeightVector& weights,
                            double target_coverage);

struct TwoPhaseParams {
    SolverParams solver;
    unsigned workers = 0;
};

struct TwoPhasePlan {
    Selection ground;
    Selection aerial;
    Bitset covered;                  // union of both phases
    double ground_fraction = 0.0;    // of total weight
    double aerial_fraction = 0.0;    // of total weight, phase-2 additions only
    double combined_fraction = 0.0;
    std::vector<std::uint32_t> residual_uncovered; // sample ids, the blind set
    bool aerial_skipped = false; // phase 2 had nothing to add (target already met)
};

/// Ground-first planning: phase 1 selects from ground candidates; phase 2
/// zeroes the already-covered weight and selects from aerial candidates
/// against the residual. Matrices must share one sample list.
TwoPhasePlan two_phase_plan(const CoverageMatrix& ground_matrix,
                            const CoverageMatrix& aerial_matrix, const WeightVector& weights,
                            const TwoPhaseParams& params);

} // namespace scanplan
