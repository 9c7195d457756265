#include "scanplan/candidates.hpp"

#include "scanplan/sampling.hpp"
#include "scanplan/knn.hpp"

#include <cmath>

namespace scanplan {

namespace {

const double kGroundNormalZ = std::cos(deg_to_rad(30.0));

const Dir3 kAxisProbes[6] = {
    {1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1},
};

bool clear_of_geometry(const SpatialIndex& index, const Point3& pos, double radius) {
    for (const Dir3& dir : kAxisProbes) {
        if (index.ray_cast(pos, dir, radius)) return false;
    }
    return true;
}

// Lowest surface under (x, y): the farthest hit of a vertical ray dropped
// from above the scene. Returns false when the ray misses everything.
bool lowest_hit(const SpatialIndex& index, double x, double y, RayHit& out) {
    const Aabb& box = index.bounds();
    const Point3 start{x, y, box.max.z + 1.0};
    const double t_max = (box.max.z - box.min.z) + 2.0;
    const auto hits = index.ray_cast_all(start, Dir3{0, 0, -1}, t_max);
    if (hits.empty()) return false;
    out = hits.back();
    return true;
}

} // namespace

std::vector<Viewpoint> generate_ground_candidates(const TriangleMesh& mesh,
                                                  const SpatialIndex& index,
                                                  const GroundCandidateParams& params) {
    if (params.grid_spacing <= 0.0 || params.mount_height <= 0.0) {
        raise(ErrorCode::InvalidArgument, "ground candidate spacing/mount must be positive");
    }
    TriangleMesh derived;
    const TriangleMesh* m = &mesh;
    if (mesh.face_normals.size() != mesh.triangles.size()) {
        derived = mesh;
        derived.update_derived();
        m = &derived;
    }

    bool any_ground = false;
    for (const Dir3& n : m->face_normals) {
        if (n.z > kGroundNormalZ) {
            any_ground = true;
            break;
        }
    }
    if (!any_ground) raise(ErrorCode::NoGroundFound, "scene has no up-facing triangles");

    const Aabb box = m->bounds();
    const Vec3 ext = box.extent();
    const int cells_x = int(std::floor(ext.x / params.grid_spacing + 1e-9));
    const int cells_y = int(std::floor(ext.y / params.grid_spacing + 1e-9));

    std::vector<Viewpoint> out;
    int next_id = 0;
    for (int gy = 0; gy <= cells_y; ++gy) {
        for (int gx = 0; gx <= cells_x; ++gx) {
            const double x = box.min.x + gx * params.grid_spacing;
            const double y = box.min.y + gy * params.grid_spacing;
            RayHit hit;
            if (!lowest_hit(index, x, y, hit)) continue;
            if (m->face_normals[hit.triangle_id].z <= kGroundNormalZ) continue;
            if (hit.point.z - box.min.z > params.max_height_above_ground) continue;

            const Point3 pos = hit.point + Vec3{0, 0, params.mount_height};
            if (!clear_of_geometry(index, pos, params.clearance_radius)) continue;

            Viewpoint vp;
            vp.id = next_id++;
            vp.position = pos;
            vp.agent_class = AgentClass::Ground;
            out.push_back(vp);
        }
    }
    if (out.empty()) raise(ErrorCode::NoGroundFound, "no ground candidate survived filtering");
    return out;
}

std::vector<Viewpoint> generate_aerial_candidates(const TriangleMesh& mesh,
                                                  const SpatialIndex& index,
                                                  const AerialCandidateParams& params) {
    if (params.lattice_spacing <= 0.0 || params.standoff <= 0.0 ||
        params.alt_min >= params.alt_max) {
        raise(ErrorCode::InvalidArgument, "aerial candidate parameters invalid");
    }

    const Aabb box = mesh.bounds();
    const double s = params.standoff;
    const Vec3 lo = box.min - Vec3{s, s, 0.0};
    const Vec3 hi = box.max + Vec3{s, s, s + 2.0 * params.lattice_spacing};

    // Sampled surface distance catches diagonal proximity the axis probes
    // miss (e.g. box corners).
    const double sample_spacing = std::max(0.25, params.standoff / 3.0);
    const auto surface = sample_surface(mesh, sample_spacing);
    std::vector<Point3> surface_points;
    surface_points.reserve(surface.size());
    for (const auto& sp : surface) surface_points.push_back(sp.point);
    const PointIndex surface_index(surface_points);

    const int nx = int(std::floor((hi.x - lo.x) / params.lattice_spacing + 1e-9));
    const int ny = int(std::floor((hi.y - lo.y) / params.lattice_spacing + 1e-9));
    const int nz = int(std::floor((hi.z - lo.z) / params.lattice_spacing + 1e-9));

    std::vector<Viewpoint> out;
    int next_id = 0;
    for (int gz = 0; gz <= nz; ++gz) {
        for (int gy = 0; gy <= ny; ++gy) {
            for (int gx = 0; gx <= nx; ++gx) {
                const Point3 pos{lo.x + gx * params.lattice_spacing,
                                 lo.y + gy * params.lattice_spacing,
                                 lo.z + gz * params.lattice_spacing};

                RayHit ground;
                const double ground_z =
                    lowest_hit(index, pos.x, pos.y, ground) ? ground.point.z : box.min.z;
                const double altitude = pos.z - ground_z;
                if (altitude < params.alt_min || altitude > params.alt_max) continue;

                if (!clear_of_geometry(index, pos, params.standoff)) continue;
                if (surface_index.knn(pos, 1).front().second < params.standoff) continue;

                Viewpoint vp;
                vp.id = next_id++;
                vp.position = pos;
                vp.agent_class = AgentClass::Aerial;
                out.push_back(vp);
            }
        }
    }
    return out;
}

} // namespace scanplan
