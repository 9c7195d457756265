#include "scanplan.h"

#include "scanplan/config.hpp"
#include "scanplan/meshify.hpp"
#include "scanplan/pipeline.hpp"
#include "scanplan/plan_io.hpp"
#include "scanplan/ply_io.hpp"

#include <cstring>
#include <string>

using namespace scanplan;

struct sp_config {
    RunConfig cfg;
};
struct sp_cloud {
    PointCloud cloud;
};
struct sp_mesh {
    TriangleMesh mesh;
};
struct sp_plan {
    ScanPlan plan;
};
struct sp_report {
    CoverageReport report;
};

namespace {

thread_local std::string g_last_error;

sp_status status_of(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::MissingPrior: return SP_ERR_INVALID_ARGUMENT;
        case ErrorCode::NoGroundFound:
        case ErrorCode::NoProgress:
        case ErrorCode::Infeasible: return SP_ERR_INFEASIBLE;
        case ErrorCode::IoError: return SP_ERR_IO;
        case ErrorCode::Internal: return SP_ERR_INTERNAL;
        default: return SP_ERR_DATA;
    }
}

sp_status fail(const char* what) {
    g_last_error = what;
    return SP_ERR_INVALID_ARGUMENT;
}

template <typename Fn>
sp_status guarded(Fn&& fn) {
    try {
        fn();
        return SP_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SP_ERR_INTERNAL;
    }
}

} // namespace

extern "C" {

const char* sp_version(void) { return kToolVersion; }

const char* sp_last_error(void) { return g_last_error.c_str(); }

/* --- configuration ------------------------------------------------------ */

sp_status sp_config_create(sp_config** out) {
    if (!out) return fail("sp_config_create: out is NULL");
    return guarded([&] { *out = new sp_config{RunConfig{}}; });
}

sp_status sp_config_load(const char* path, sp_config** out) {
    if (!path || !out) return fail("sp_config_load: NULL argument");
    return guarded([&] { *out = new sp_config{RunConfig::load(path)}; });
}

sp_status sp_config_set(sp_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) return fail("sp_config_set: NULL argument");
    return guarded([&] {
        cfg->cfg.set(key, value);
        cfg->cfg.validate();
    });
}

size_t sp_config_text(const sp_config* cfg, char* buf, size_t buf_size) {
    if (!cfg) return 0;
    const std::string text = cfg->cfg.to_text();
    if (buf && buf_size > 0) {
        const size_t n = std::min(buf_size - 1, text.size());
        std::memcpy(buf, text.data(), n);
        buf[n] = '\0';
    }
    return text.size();
}

sp_status sp_config_hash(const sp_config* cfg, char buf[17]) {
    if (!cfg || !buf) return fail("sp_config_hash: NULL argument");
    return guarded([&] {
        const std::string h = cfg->cfg.hash();
        std::memcpy(buf, h.c_str(), 17);
    });
}

void sp_config_free(sp_config* cfg) { delete cfg; }

/* --- geometry ------------------------------------------------------------ */

sp_status sp_cloud_load(const char* path, sp_cloud** out) {
    if (!path || !out) return fail("sp_cloud_load: NULL argument");
    return guarded([&] { *out = new sp_cloud{load_cloud(path)}; });
}

sp_status sp_cloud_save(const sp_cloud* cloud, const char* path, int binary) {
    if (!cloud || !path) return fail("sp_cloud_save: NULL argument");
    return guarded([&] { save_cloud(cloud->cloud, path, binary != 0); });
}

size_t sp_cloud_size(const sp_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }

void sp_cloud_free(sp_cloud* cloud) { delete cloud; }

sp_status sp_mesh_load(const char* path, sp_mesh** out) {
    if (!path || !out) return fail("sp_mesh_load: NULL argument");
    return guarded([&] { *out = new sp_mesh{load_mesh(path)}; });
}

sp_status sp_mesh_save(const sp_mesh* mesh, const char* path, int binary) {
    if (!mesh || !path) return fail("sp_mesh_save: NULL argument");
    return guarded([&] { save_mesh(mesh->mesh, path, binary != 0); });
}

size_t sp_mesh_vertex_count(const sp_mesh* mesh) {
    return mesh ? mesh->mesh.vertex_count() : 0;
}

size_t sp_mesh_triangle_count(const sp_mesh* mesh) {
    return mesh ? mesh->mesh.triangle_count() : 0;
}

sp_status sp_mesh_topology(const sp_mesh* mesh, sp_topology* out) {
    if (!mesh || !out) return fail("sp_mesh_topology: NULL argument");
    return guarded([&] {
        const TopologyReport r = mesh_topology_report(mesh->mesh);
        out->boundary_edges = r.boundary_edges;
        out->non_manifold_edges = r.non_manifold_edges;
        out->connected_components = r.connected_components;
        out->total_area = r.total_area;
        out->watertight = r.watertight ? 1 : 0;
    });
}

void sp_mesh_free(sp_mesh* mesh) { delete mesh; }

/* --- operations ----------------------------------------------------------- */

sp_status sp_meshify(const sp_config* cfg, const sp_cloud* cloud, sp_mesh** out) {
    if (!cfg || !cloud || !out) return fail("sp_meshify: NULL argument");
    return guarded([&] {
        cfg->cfg.validate();
        *out = new sp_mesh{meshify_cloud(cloud->cloud, cfg->cfg.meshify)};
    });
}

sp_status sp_plan_build(const sp_config* cfg, const sp_mesh* mesh, const sp_cloud* prior,
                        sp_plan** out) {
    if (!cfg || !mesh || !out) return fail("sp_plan_build: NULL argument");
    return guarded([&] {
        const PointCloud* prior_cloud = prior ? &prior->cloud : nullptr;
        *out = new sp_plan{plan_scene(mesh->mesh, prior_cloud, cfg->cfg).plan};
    });
}

sp_status sp_plan_save(const sp_plan* plan, const char* path) {
    if (!plan || !path) return fail("sp_plan_save: NULL argument");
    return guarded([&] { save_plan(plan->plan, path); });
}

sp_status sp_plan_load(const char* path, const sp_config* verify, sp_plan** out) {
    if (!path || !out) return fail("sp_plan_load: NULL argument");
    return guarded([&] {
        std::optional<std::string> expected;
        if (verify) expected = verify->cfg.hash();
        *out = new sp_plan{load_plan(path, expected)};
    });
}

size_t sp_plan_ground_count(const sp_plan* plan) { return plan ? plan->plan.ground.size() : 0; }

size_t sp_plan_aerial_count(const sp_plan* plan) { return plan ? plan->plan.aerial.size() : 0; }

double sp_plan_planned_fraction(const sp_plan* plan) {
    return plan ? plan->plan.planned_fraction : 0.0;
}

void sp_plan_free(sp_plan* plan) { delete plan; }

sp_status sp_simulate(const sp_config* cfg, const sp_mesh* truth, const sp_plan* plan,
                      const char* out_dir) {
    if (!cfg || !truth || !plan || !out_dir) return fail("sp_simulate: NULL argument");
    return guarded([&] {
        cfg->cfg.validate();
        if (plan->plan.empty()) raise(ErrorCode::EmptyPlan, "plan selects no viewpoints");
        TriangleMesh mesh = truth->mesh;
        mesh.validate();
        mesh.update_derived();
        const SpatialIndex index(mesh);
        const std::filesystem::path dir(out_dir);
        const PointCloud merged =
            simulate_plan_scans(index, plan->plan, cfg->cfg, dir / "scans");
        save_cloud(merged, dir / "merged.ply");
    });
}

sp_status sp_evaluate(const sp_config* cfg, const sp_mesh* truth, const sp_plan* plan,
                      sp_report** out) {
    if (!cfg || !truth || !plan || !out) return fail("sp_evaluate: NULL argument");
    return guarded([&] {
        *out = new sp_report{evaluate_plan_on_mesh(truth->mesh, plan->plan, cfg->cfg)};
    });
}

double sp_report_achieved_fraction(const sp_report* report) {
    return report ? report->report.achieved_fraction : 0.0;
}

size_t sp_report_covered_count(const sp_report* report) {
    if (!report) return 0;
    return report->report.hit_counts.size() - report->report.residual_uncovered.size();
}

size_t sp_report_uncovered_count(const sp_report* report) {
    return report ? report->report.residual_uncovered.size() : 0;
}

double sp_report_mean_spacing(const sp_report* report) {
    return report ? report->report.mean_covered_spacing : 0.0;
}

void sp_report_free(sp_report* report) { delete report; }

sp_status sp_export_viz(const sp_config* cfg, const sp_mesh* mesh, const sp_plan* plan,
                        const char* path) {
    if (!cfg || !mesh || !plan || !path) return fail("sp_export_viz: NULL argument");
    return guarded([&] { export_plan_viz(mesh->mesh, plan->plan, cfg->cfg, path); });
}

sp_status sp_pipeline_run(const sp_config* cfg, const sp_mesh* truth, const sp_mesh* prior,
                          const char* out_dir, sp_pipeline_summary* summary) {
    if (!cfg || !truth || !out_dir) return fail("sp_pipeline_run: NULL argument");
    return guarded([&] {
        std::optional<TriangleMesh> prior_mesh;
        if (prior) prior_mesh = prior->mesh;
        const PipelineResult result =
            run_pipeline(truth->mesh, cfg->cfg, out_dir, prior_mesh);
        if (summary) {
            summary->iterations = int(result.iterations.size());
            summary->final_achieved_fraction = result.final_achieved;
        }
    });
}

} // extern "C"
