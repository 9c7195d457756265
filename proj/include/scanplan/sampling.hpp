#pragma once

#include "scanplan/geometry.hpp"

#include <cstdint>
#include <vector>

namespace scanplan {

/// Area-weighted coverage atom on the mesh surface.
struct SurfaceSample {
    std::uint32_t id = 0;
    Point3 point;
    Dir3 normal;
    std::uint32_t triangle_id = 0;
    double weight_area = 0.0; // m^2
};

/// Discretizes the mesh into coverage atoms. Triangle t emits
/// n_t = max(1, round(area_t / spacing^2)) samples from a deterministic
/// low-discrepancy barycentric sequence (first point is the centroid), each
/// weighing area_t / n_t, so total weight equals mesh area exactly.
std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, double spacing);

} // namespace scanplan
