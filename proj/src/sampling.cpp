#include "scanplan/sampling.hpp"

#include <cmath>

namespace scanplan {

namespace {

// R2 low-discrepancy sequence (plastic-constant rotations of (0.5, 0.5)).
constexpr double kAlpha1 = 0.7548776662466927;
constexpr double kAlpha2 = 0.5698402909980532;

void barycentric_seed(std::size_t n, double& u, double& v) {
    if (n == 0) {
        u = 1.0 / 3.0;
        v = 1.0 / 3.0;
        return;
    }
    u = std::fmod(0.5 + kAlpha1 * double(n), 1.0);
    v = std::fmod(0.5 + kAlpha2 * double(n), 1.0);
    if (u + v > 1.0) { // fold the unit square onto the barycentric triangle
        u = 1.0 - u;
        v = 1.0 - v;
    }
}

} // namespace

std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, double spacing) {
    if (mesh.triangles.empty()) raise(ErrorCode::EmptyMesh, "sample_surface on empty mesh");
    if (spacing <= 0.0) raise(ErrorCode::InvalidArgument, "sample spacing must be positive");

    TriangleMesh derived;
    const TriangleMesh* m = &mesh;
    if (mesh.face_areas.size() != mesh.triangles.size()) {
        derived = mesh;
        derived.update_derived();
        m = &derived;
    }

    std::vector<SurfaceSample> samples;
    samples.reserve(std::size_t(m->total_area / (spacing * spacing)) + m->triangle_count());

    std::uint32_t next_id = 0;
    for (std::uint32_t t = 0; t < m->triangle_count(); ++t) {
        const double area = m->face_areas[t];
        if (area <= 0.0) continue;
        const std::size_t n = std::max<std::size_t>(
            1, std::size_t(std::llround(area / (spacing * spacing))));
        const double weight = area / double(n);

        const Point3 a = m->vertex(t, 0);
        const Point3 b = m->vertex(t, 1);
        const Point3 c = m->vertex(t, 2);
        for (std::size_t s = 0; s < n; ++s) {
            double u, v;
            barycentric_seed(s, u, v);
            SurfaceSample sample;
            sample.id = next_id++;
            sample.point = a * (1.0 - u - v) + b * u + c * v;
            sample.normal = m->face_normals[t];
            sample.triangle_id = t;
            sample.weight_area = weight;
            samples.push_back(sample);
        }
    }
    return samples;
}

} // namespace scanplan
