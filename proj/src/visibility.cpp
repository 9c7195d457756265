#include "scanplan/visibility.hpp"

#include "scanplan/parallel.hpp"

#include <cmath>

namespace scanplan {

bool visibility_test(const Viewpoint& vp, const SurfaceSample& s, const SensorModel& sensor,
                     const SpatialIndex& index) {
    const Vec3 to_sample = s.point - vp.position;
    const double d = to_sample.norm();
    if (d <= 0.0 || d < sensor.min_range || d > sensor.max_range) return false;

    const double elevation = rad_to_deg(std::asin(std::clamp(to_sample.z / d, -1.0, 1.0)));
    if (elevation < sensor.min_elevation || elevation > sensor.max_elevation) return false;

    if (sensor.horizontal_fov < 360.0) {
        if (!vp.heading) {
            raise(ErrorCode::InvalidArgument,
                  "viewpoint needs a heading for a limited horizontal fov");
        }
        const double azimuth = rad_to_deg(std::atan2(to_sample.y, to_sample.x));
        double diff = std::fmod(azimuth - *vp.heading + 540.0, 360.0) - 180.0;
        if (std::abs(diff) > sensor.horizontal_fov / 2.0) return false;
    }

    // Front-facing within the incidence limit.
    const double cos_incidence = dot(s.normal, -to_sample) / d;
    if (cos_incidence <= 0.0) return false;
    if (cos_incidence < std::cos(deg_to_rad(sensor.max_incidence))) return false;

    // Occlusion: the nearest hit along the sight line must be the sample's
    // own surface.
    const double tol = std::max(1e-4, 1e-4 * d);
    const auto hit = index.ray_cast(vp.position, to_sample / d, d + tol);
    return hit && std::abs(hit->t - d) <= tol;
}

CoverageMatrix build_coverage(const std::vector<Viewpoint>& candidates,
                              const std::vector<SurfaceSample>& samples,
                              const SensorSuite& sensors, const SpatialIndex& index,
                              unsigned workers) {
    if (candidates.empty() || samples.empty()) {
        raise(ErrorCode::EmptyInput, "coverage matrix needs candidates and samples");
    }

    CoverageMatrix matrix;
    matrix.candidates = candidates;
    matrix.samples = samples;
    matrix.rows.assign(candidates.size(), Bitset(samples.size()));

    parallel_for(candidates.size(), workers, [&](std::size_t c) {
        const SensorModel& sensor = sensors.for_class(candidates[c].agent_class);
        Bitset& row = matrix.rows[c];
        for (std::size_t s = 0; s < samples.size(); ++s) {
            if (visibility_test(candidates[c], samples[s], sensor, index)) row.set(s);
        }
    });
    return matrix;
}

} // namespace scanplan
