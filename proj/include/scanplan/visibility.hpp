#pragma once

#include "scanplan/bitset.hpp"
#include "scanplan/bvh.hpp"
#include "scanplan/sampling.hpp"
#include "scanplan/sensor.hpp"

#include <vector>

namespace scanplan {

/// True iff the sample is countable from the viewpoint: in range, inside the
/// sensor's field of view, front-facing within the incidence limit, and the
/// first surface the ray meets is the sample's own (matched by hit distance,
/// tolerance max(1e-4, 1e-4 * d), so adjacent coplanar triangles do not
/// occlude spuriously).
bool visibility_test(const Viewpoint& vp, const SurfaceSample& s, const SensorModel& sensor,
                     const SpatialIndex& index);

/// Candidate x sample visibility table; the set-cover instance.
struct CoverageMatrix {
    std::vector<Viewpoint> candidates;
    std::vector<SurfaceSample> samples;
    std::vector<Bitset> rows; // rows[c].test(s) == visible

    std::size_t candidate_count() const { return candidates.size(); }
    std::size_t sample_count() const { return samples.size(); }
};

/// Evaluates every (candidate, sample) pair. Rows fan out over workers
/// (0 = all hardware threads); results are bit-identical for any schedule.
CoverageMatrix build_coverage(const std::vector<Viewpoint>& candidates,
                              const std::vector<SurfaceSample>& samples,
                              const SensorSuite& sensors, const SpatialIndex& index,
                              unsigned workers = 0);

} // namespace scanplan
