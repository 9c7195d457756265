#include "scanplan/simulate.hpp"

#include "scanplan/knn.hpp"
#include "scanplan/parallel.hpp"
#include "scanplan/rng.hpp"
#include "scanplan/visibility.hpp"

#include <cmath>

namespace scanplan {

namespace {

// RNG stream tags; scan noise and pose jitter must never share a stream.
constexpr std::uint64_t kScanNoiseTag = std::uint64_t(1) << 56;
constexpr std::uint64_t kJitterTag = std::uint64_t(2) << 56;

} // namespace

PointCloud simulate_scan(const SpatialIndex& index, const Viewpoint& vp, const ScanConfig& cfg,
                         unsigned workers) {
    cfg.validate();
    const SensorModel& sensor = cfg.sensor;
    const double res = sensor.angular_resolution;

    const bool panoramic = sensor.horizontal_fov >= 360.0;
    const long az_count = std::lround(sensor.horizontal_fov / res);
    const long elev_count =
        long(std::floor((sensor.max_elevation - sensor.min_elevation) / res + 1e-9)) + 1;
    const double az_start =
        panoramic ? 0.0 : vp.heading.value_or(0.0) - sensor.horizontal_fov / 2.0;

    const std::size_t ray_total = std::size_t(az_count) * std::size_t(elev_count);
    std::vector<Point3> hits(ray_total);
    std::vector<char> valid(ray_total, 0);

    const std::uint64_t stream = kScanNoiseTag ^ std::uint64_t(std::uint32_t(vp.id));

    parallel_for(ray_total, workers, [&](std::size_t ray) {
        const long e = long(ray) / az_count;
        const long a = long(ray) % az_count;
        const double elev = deg_to_rad(sensor.min_elevation + double(e) * res);
        const double azim = deg_to_rad(az_start + double(a) * res);
        const Dir3 dir{std::cos(elev) * std::cos(azim), std::cos(elev) * std::sin(azim),
                       std::sin(elev)};

        const auto hit = index.ray_cast(vp.position, dir, sensor.max_range);
        if (!hit || hit->t < sensor.min_range) return;

        double noise = 0.0;
        if (sensor.range_noise_sigma > 0.0) {
            noise = standard_normal(cfg.seed, stream, ray) * sensor.range_noise_sigma;
        }
        hits[ray] = hit->point + dir * noise;
        valid[ray] = 1;
    });

    PointCloud cloud;
    for (std::size_t ray = 0; ray < ray_total; ++ray) {
        if (!valid[ray]) continue;
        cloud.points.push_back(hits[ray]);
        cloud.origins.push_back(vp.position);
    }
    return cloud;
}

PointCloud simulate_coarse_survey(const SpatialIndex& index,
                                  const std::vector<Point3>& waypoints, const ScanConfig& cfg,
                                  unsigned workers) {
    if (waypoints.empty()) raise(ErrorCode::EmptyInput, "coarse survey needs waypoints");
    cfg.validate();

    PointCloud merged;
    for (std::size_t w = 0; w < waypoints.size(); ++w) {
        Vec3 offset{0, 0, 0};
        if (cfg.pose_jitter_sigma > 0.0) {
            const std::uint64_t stream = kJitterTag ^ std::uint64_t(w);
            offset = Vec3{standard_normal(cfg.seed, stream, 0),
                          standard_normal(cfg.seed, stream, 1),
                          standard_normal(cfg.seed, stream, 2)} *
                     cfg.pose_jitter_sigma;
        }
        Viewpoint vp;
        vp.id = int(w);
        vp.position = waypoints[w] + offset;
        vp.agent_class = AgentClass::Ground;
        merged.append(simulate_scan(index, vp, cfg, workers));
    }
    return merged;
}

CoverageReport evaluate_plan(const std::vector<SurfaceSample>& ground_truth_samples,
                             const ScanPlan& plan, const SpatialIndex& index,
                             const SensorSuite& sensors, unsigned workers) {
    if (plan.empty()) raise(ErrorCode::EmptyPlan, "plan selects no viewpoints");
    if (ground_truth_samples.empty()) {
        raise(ErrorCode::EmptyInput, "evaluation needs ground truth samples");
    }

    std::vector<Viewpoint> viewpoints;
    viewpoints.reserve(plan.viewpoint_count());
    for (const auto& pv : plan.ground) {
        viewpoints.push_back({pv.id, pv.position, AgentClass::Ground, pv.heading});
    }
    for (const auto& pv : plan.aerial) {
        viewpoints.push_back({pv.id, pv.position, AgentClass::Aerial, pv.heading});
    }

    std::vector<Bitset> rows(viewpoints.size(), Bitset(ground_truth_samples.size()));
    parallel_for(viewpoints.size(), workers, [&](std::size_t v) {
        const SensorModel& sensor = sensors.for_class(viewpoints[v].agent_class);
        for (std::size_t s = 0; s < ground_truth_samples.size(); ++s) {
            if (visibility_test(viewpoints[v], ground_truth_samples[s], sensor, index)) {
                rows[v].set(s);
            }
        }
    });

    CoverageReport report;
    report.hit_counts.assign(ground_truth_samples.size(), 0);
    for (const Bitset& row : rows) {
        for (std::size_t s = 0; s < ground_truth_samples.size(); ++s) {
            if (row.test(s)) report.hit_counts[s]++;
        }
    }

    double total = 0.0;
    double covered = 0.0;
    std::vector<Point3> covered_points;
    for (std::size_t s = 0; s < ground_truth_samples.size(); ++s) {
        total += ground_truth_samples[s].weight_area;
        if (report.hit_counts[s] > 0) {
            covered += ground_truth_samples[s].weight_area;
            covered_points.push_back(ground_truth_samples[s].point);
        } else {
            report.residual_uncovered.push_back(std::uint32_t(s));
        }
    }
    report.achieved_fraction = total > 0.0 ? covered / total : 0.0;

    if (covered_points.size() >= 2) {
        const PointIndex idx(covered_points);
        double sum = 0.0;
        for (const Point3& p : covered_points) sum += idx.knn(p, 2).back().second;
        report.mean_covered_spacing = sum / double(covered_points.size());
    }
    return report;
}

} // namespace scanplan
