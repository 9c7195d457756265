#include "scanplan/viz.hpp"

#include "scanplan/ply_io.hpp"

namespace scanplan {

namespace {

enum Status : std::uint8_t { kGround = 0, kAerialOnly = 1, kUncovered = 2 };

constexpr std::array<std::uint8_t, 3> kStatusColor[3] = {
    {0, 0, 255},   // ground-covered: blue
    {0, 255, 0},   // aerial-only: green
    {255, 0, 0},   // uncovered: red
};

} // namespace

void export_coverage_viz(const TriangleMesh& mesh, const std::vector<SurfaceSample>& samples,
                         const Bitset& ground_covered, const Bitset& aerial_covered,
                         const std::vector<PlannedViewpoint>& viewpoints,
                         const std::filesystem::path& path) {
    if (ground_covered.size() != samples.size() || aerial_covered.size() != samples.size()) {
        raise(ErrorCode::InvalidArgument, "coverage bitset length != sample count");
    }

    // Worst sample status per triangle, then worst triangle status per vertex.
    std::vector<std::uint8_t> tri_status(mesh.triangle_count(), kGround);
    std::vector<char> tri_seen(mesh.triangle_count(), 0);
    for (std::size_t s = 0; s < samples.size(); ++s) {
        Status st = kUncovered;
        if (ground_covered.test(s)) {
            st = kGround;
        } else if (aerial_covered.test(s)) {
            st = kAerialOnly;
        }
        const std::uint32_t t = samples[s].triangle_id;
        if (!tri_seen[t] || st > tri_status[t]) tri_status[t] = std::uint8_t(st);
        tri_seen[t] = 1;
    }

    std::vector<std::uint8_t> vert_status(mesh.vertex_count(), kGround);
    std::vector<char> vert_seen(mesh.vertex_count(), 0);
    for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
        if (!tri_seen[t]) continue;
        for (int c = 0; c < 3; ++c) {
            const std::uint32_t v = mesh.triangles[t][c];
            if (!vert_seen[v] || tri_status[t] > vert_status[v]) vert_status[v] = tri_status[t];
            vert_seen[v] = 1;
        }
    }

    std::vector<std::array<std::uint8_t, 3>> colors(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        colors[v] = kStatusColor[vert_status[v]];
    }
    save_colored_mesh(mesh, colors, path);

    std::vector<Point3> vp_points;
    std::vector<std::array<std::uint8_t, 3>> vp_colors;
    for (const PlannedViewpoint& vp : viewpoints) {
        vp_points.push_back(vp.position);
        // Fig.-4 style: TLS positions blue, UAV positions green.
        vp_colors.push_back(vp.agent_class == AgentClass::Ground
                                ? std::array<std::uint8_t, 3>{0, 0, 255}
                                : std::array<std::uint8_t, 3>{0, 255, 0});
    }
    std::filesystem::path vp_path = path;
    vp_path.replace_filename(path.stem().string() + "_viewpoints.ply");
    save_colored_points(vp_points, vp_colors, vp_path);
}

} // namespace scanplan
