#include "scanplan/nbv.hpp"

#include "scanplan/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace scanplan {

namespace {

constexpr double kDensityRadius = 0.25; // m, fixed neighbourhood for deficit weights

double total_weight(const WeightVector& weights) {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

double covered_weight(const Bitset& covered, const WeightVector& weights) {
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (covered.test(i)) sum += weights[i];
    }
    return sum;
}

double row_gain(const Bitset& row, const Bitset& covered, const WeightVector& weights) {
    double gain = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (row.test(i) && !covered.test(i)) gain += weights[i];
    }
    return gain;
}

} // namespace

WeightVector compute_weights(const std::vector<SurfaceSample>& samples,
                             const PointCloud* prior_cloud, WeightMode mode, double rho_ref) {
    WeightVector weights(samples.size());
    if (mode == WeightMode::Uniform) {
        for (std::size_t i = 0; i < samples.size(); ++i) weights[i] = samples[i].weight_area;
        return weights;
    }

    if (prior_cloud == nullptr || prior_cloud->points.empty()) {
        raise(ErrorCode::MissingPrior, "DENSITY_DEFICIT weights need a prior cloud");
    }
    if (rho_ref <= 0.0) raise(ErrorCode::InvalidArgument, "rho_ref must be positive");

    const PointIndex index(prior_cloud->points);
    const double disc_area = 3.14159265358979323846 * kDensityRadius * kDensityRadius;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double count = double(index.count_within(samples[i].point, kDensityRadius));
        const double rho = count / disc_area; // pts per m^2
        weights[i] = samples[i].weight_area / (1.0 + rho / rho_ref);
    }
    return weights;
}

Selection greedy_select(const CoverageMatrix& matrix, const WeightVector& weights,
                        const SolverParams& params, unsigned workers) {
    if (weights.size() != matrix.sample_count()) {
        raise(ErrorCode::InvalidArgument, "weight vector length != sample count");
    }
    if (!(params.target_coverage > 0.0 && params.target_coverage <= 1.0)) {
        raise(ErrorCode::InvalidArgument, "target_coverage out of (0, 1]");
    }
    if (params.min_gain < 0.0) raise(ErrorCode::InvalidArgument, "min_gain must be >= 0");

    const double total = total_weight(weights);
    if (total <= 0.0) raise(ErrorCode::InvalidArgument, "weights must not be all zero");

    Selection sel;
    sel.covered = Bitset(matrix.sample_count());

    std::vector<double> gains(matrix.candidate_count());
    std::vector<char> taken(matrix.candidate_count(), 0);
    double covered = 0.0;
    double prev_gain = std::numeric_limits<double>::infinity();

    while (int(sel.picks.size()) < params.max_views) {
        sel.coverage_fraction = covered / total;
        if (sel.coverage_fraction >= params.target_coverage) break;

        parallel_for(matrix.candidate_count(), workers, [&](std::size_t c) {
            gains[c] = taken[c] ? 0.0 : row_gain(matrix.rows[c], sel.covered, weights);
        });

        // Serial argmax; ties go to the lowest viewpoint id.
        std::size_t best = matrix.candidate_count();
        double best_gain = 0.0;
        int best_id = 0;
        for (std::size_t c = 0; c < matrix.candidate_count(); ++c) {
            const int id = matrix.candidates[c].id;
            if (gains[c] > best_gain ||
                (gains[c] == best_gain && best != matrix.candidate_count() &&
                 gains[c] > 0.0 && id < best_id)) {
                best = c;
                best_gain = gains[c];
                best_id = id;
            }
        }

        if (best == matrix.candidate_count() || best_gain <= 0.0) {
            if (sel.picks.empty()) {
                raise(ErrorCode::NoProgress, "no candidate sees any weighted sample");
            }
            break;
        }
        if (best_gain < params.min_gain) break;

        // Submodularity: recorded gains must never increase.
        if (best_gain > prev_gain + 1e-9 * std::max(1.0, prev_gain)) {
            raise(ErrorCode::Internal, "marginal gain increased; selection state corrupt");
        }
        prev_gain = best_gain;

        taken[best] = 1;
        sel.picks.push_back({matrix.candidates[best].id, best_gain});
        sel.covered |= matrix.rows[best];
        covered += best_gain;
    }

    sel.coverage_fraction = covered / total;
    return sel;
}

Selection brute_force_cover(const CoverageMatrix& matrix, const WeightVector& weights,
                            double target_coverage) {
    const std::size_t n = matrix.candidate_count();
    if (n > 20) raise(ErrorCode::TooLarge, "brute force cover limited to 20 candidates");
    if (weights.size() != matrix.sample_count()) {
        raise(ErrorCode::InvalidArgument, "weight vector length != sample count");
    }

    const double total = total_weight(weights);

    // Candidate order by ascending viewpoint id makes "lexicographically
    // smallest id set" the first subset found at a given size.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return matrix.candidates[a].id < matrix.candidates[b].id;
    });

    {
        Bitset all(matrix.sample_count());
        for (const Bitset& row : matrix.rows) all |= row;
        if (covered_weight(all, weights) / total < target_coverage) {
            raise(ErrorCode::Infeasible, "even the full candidate set misses the target");
        }
    }

    std::vector<std::size_t> combo;
    std::vector<std::size_t> found;
    const auto search = [&](auto&& self, std::size_t start, std::size_t remaining) -> bool {
        if (remaining == 0) {
            Bitset covered(matrix.sample_count());
            for (const std::size_t c : combo) covered |= matrix.rows[c];
            return covered_weight(covered, weights) / total >= target_coverage;
        }
        for (std::size_t i = start; i + remaining <= n; ++i) {
            combo.push_back(order[i]);
            if (self(self, i + 1, remaining - 1)) return true;
            combo.pop_back();
        }
        return false;
    };

    for (std::size_t size = 1; size <= n; ++size) {
        combo.clear();
        if (search(search, 0, size)) {
            found = combo;
            break;
        }
    }

    // Order the fixed set by marginal gain (greedy order over the subset) so
    // the Selection gain sequence is non-increasing; a minimum-cardinality
    // cover has strictly positive marginals throughout.
    Selection sel;
    sel.covered = Bitset(matrix.sample_count());
    std::vector<char> used(found.size(), 0);
    double covered = 0.0;
    for (std::size_t step = 0; step < found.size(); ++step) {
        std::size_t best = found.size();
        double best_gain = -1.0;
        int best_id = 0;
        for (std::size_t i = 0; i < found.size(); ++i) {
            if (used[i]) continue;
            const double gain = row_gain(matrix.rows[found[i]], sel.covered, weights);
            const int id = matrix.candidates[found[i]].id;
            if (gain > best_gain || (gain == best_gain && id < best_id)) {
                best = i;
                best_gain = gain;
                best_id = id;
            }
        }
        used[best] = 1;
        sel.picks.push_back({matrix.candidates[found[best]].id, best_gain});
        sel.covered |= matrix.rows[found[best]];
        covered += best_gain;
    }
    sel.coverage_fraction = covered / total;
    return sel;
}

TwoPhasePlan two_phase_plan(const CoverageMatrix& ground_matrix,
                            const CoverageMatrix& aerial_matrix, const WeightVector& weights,
                            const TwoPhaseParams& params) {
    if (!aerial_matrix.candidates.empty() &&
        aerial_matrix.sample_count() != ground_matrix.sample_count()) {
        raise(ErrorCode::InvalidArgument, "phase matrices must share one sample list");
    }

    const double total = total_weight(weights);

    TwoPhasePlan plan;
    plan.ground = greedy_select(ground_matrix, weights, params.solver, params.workers);
    plan.ground_fraction = plan.ground.coverage_fraction;

    // Residual: zero the weight of everything phase 1 covered.
    WeightVector residual = weights;
    for (std::size_t i = 0; i < residual.size(); ++i) {
        if (plan.ground.covered.test(i)) residual[i] = 0.0;
    }
    const double residual_total = total_weight(residual);
    const double needed = params.solver.target_coverage * total - plan.ground_fraction * total;

    plan.aerial.covered = Bitset(ground_matrix.sample_count());
    if (aerial_matrix.candidates.empty() || residual_total <= 0.0 || needed <= 0.0) {
        plan.aerial_skipped = true;
    } else {
        SolverParams phase2 = params.solver;
        phase2.target_coverage = std::min(1.0, needed / residual_total);
        try {
            plan.aerial = greedy_select(aerial_matrix, residual, phase2, params.workers);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::NoProgress &&
                plan.ground_fraction >= params.solver.target_coverage) {
                plan.aerial = Selection{};
                plan.aerial.covered = Bitset(ground_matrix.sample_count());
                plan.aerial_skipped = true;
            } else {
                throw;
            }
        }
    }

    plan.covered = plan.ground.covered;
    plan.covered |= plan.aerial.covered;

    double aerial_gain = 0.0;
    for (const auto& pick : plan.aerial.picks) aerial_gain += pick.marginal_gain;
    plan.aerial_fraction = aerial_gain / total;
    plan.combined_fraction = covered_weight(plan.covered, weights) / total;

    for (std::uint32_t i = 0; i < ground_matrix.sample_count(); ++i) {
        if (!plan.covered.test(i)) plan.residual_uncovered.push_back(i);
    }
    return plan;
}

} // namespace scanplan
