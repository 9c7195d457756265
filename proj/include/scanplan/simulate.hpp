#pragma once

#include "scanplan/bvh.hpp"
#include "scanplan/plan.hpp"
#include "scanplan/sampling.hpp"
#include "scanplan/sensor.hpp"

#include <cstdint>
#include <vector>

namespace scanplan {

struct ScanConfig {
    SensorModel sensor;            // envelope + angular_resolution + range noise
    std::uint64_t seed = 0;
    double pose_jitter_sigma = 0.0; // m, coarse survey only

    void validate() const {
        sensor.validate();
        if (pose_jitter_sigma < 0.0) {
            raise(ErrorCode::InvalidArgument, "pose jitter must be >= 0");
        }
    }
};

/// One panoramic scan: rays on an azimuth x elevation lattice at the sensor's
/// angular resolution. Hits within range emit a point displaced along the ray
/// by seeded Gaussian range noise; every point records its origin. Noise is
/// keyed by (seed, viewpoint id, ray index), never by execution order.
PointCloud simulate_scan(const SpatialIndex& index, const Viewpoint& vp, const ScanConfig& cfg,
                         unsigned workers = 0);

/// Walk-through mapping pass: one low-resolution scan per waypoint, each from
/// the waypoint plus a seeded jitter offset (pose error stand-in), merged.
PointCloud simulate_coarse_survey(const SpatialIndex& index,
                                  const std::vector<Point3>& waypoints, const ScanConfig& cfg,
                                  unsigned workers = 0);

/// Coverage actually achieved by executing a plan, measured against ground
/// truth samples; the honest check that a plan made on a coarse model works
/// on reality.
struct CoverageReport {
    double achieved_fraction = 0.0;
    std::vector<std::uint32_t> hit_counts;         // per sample
    std::vector<std::uint32_t> residual_uncovered; // sample ids
    double mean_covered_spacing = 0.0;             // m between covered samples
};

CoverageReport evaluate_plan(const std::vector<SurfaceSample>& ground_truth_samples,
                             const ScanPlan& plan, const SpatialIndex& index,
                             const SensorSuite& sensors, unsigned workers = 0);

} // namespace scanplan
