/* scanplan C API: scan-planning toolkit for terrestrial + aerial surveys.
 *
 * Opaque handles, status codes, and a thread-local error message. Every
 * function that can fail returns sp_status; on failure, sp_last_error()
 * holds a human-readable description until the next failing call on the
 * same thread. Handles are freed with their matching *_free function;
 * passing NULL to a free function is a no-op.
 */
#ifndef SCANPLAN_H
#define SCANPLAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SCANPLAN_API __declspec(dllexport)
#else
#define SCANPLAN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sp_status {
    SP_OK = 0,
    SP_ERR_INVALID_ARGUMENT = 1, /* bad parameter or config value */
    SP_ERR_DATA = 2,             /* parse/schema/geometry problem */
    SP_ERR_INFEASIBLE = 3,       /* no plan can satisfy the request */
    SP_ERR_IO = 4,
    SP_ERR_INTERNAL = 5
} sp_status;

typedef struct sp_config sp_config;
typedef struct sp_cloud sp_cloud;
typedef struct sp_mesh sp_mesh;
typedef struct sp_plan sp_plan;
typedef struct sp_report sp_report;

typedef struct sp_topology {
    size_t boundary_edges;
    size_t non_manifold_edges;
    size_t connected_components;
    double total_area;
    int watertight;
} sp_topology;

typedef struct sp_pipeline_summary {
    int iterations;
    double final_achieved_fraction;
} sp_pipeline_summary;

SCANPLAN_API const char* sp_version(void);
SCANPLAN_API const char* sp_last_error(void);

/* --- configuration ------------------------------------------------------ */

SCANPLAN_API sp_status sp_config_create(sp_config** out);
SCANPLAN_API sp_status sp_config_load(const char* path, sp_config** out);
SCANPLAN_API sp_status sp_config_set(sp_config* cfg, const char* key, const char* value);
/* Canonical config text; returns the number of bytes (excluding the NUL)
 * that buf would need. buf may be NULL to query the size. */
SCANPLAN_API size_t sp_config_text(const sp_config* cfg, char* buf, size_t buf_size);
/* 16 hex digits + NUL. */
SCANPLAN_API sp_status sp_config_hash(const sp_config* cfg, char buf[17]);
SCANPLAN_API void sp_config_free(sp_config* cfg);

/* --- geometry ------------------------------------------------------------ */

SCANPLAN_API sp_status sp_cloud_load(const char* path, sp_cloud** out);
SCANPLAN_API sp_status sp_cloud_save(const sp_cloud* cloud, const char* path, int binary);
SCANPLAN_API size_t sp_cloud_size(const sp_cloud* cloud);
SCANPLAN_API void sp_cloud_free(sp_cloud* cloud);

SCANPLAN_API sp_status sp_mesh_load(const char* path, sp_mesh** out);
SCANPLAN_API sp_status sp_mesh_save(const sp_mesh* mesh, const char* path, int binary);
SCANPLAN_API size_t sp_mesh_vertex_count(const sp_mesh* mesh);
SCANPLAN_API size_t sp_mesh_triangle_count(const sp_mesh* mesh);
SCANPLAN_API sp_status sp_mesh_topology(const sp_mesh* mesh, sp_topology* out);
SCANPLAN_API void sp_mesh_free(sp_mesh* mesh);

/* --- operations ----------------------------------------------------------- */

/* Coarse cloud -> cleaned triangle mesh (normal estimation, truncated signed
 * field, marching cubes, component cleanup). */
SCANPLAN_API sp_status sp_meshify(const sp_config* cfg, const sp_cloud* cloud, sp_mesh** out);

/* Two-phase viewpoint selection + tours on a planning mesh. prior may be
 * NULL; it is required when solver.weight_mode = density_deficit. */
SCANPLAN_API sp_status sp_plan_build(const sp_config* cfg, const sp_mesh* mesh,
                                     const sp_cloud* prior, sp_plan** out);

SCANPLAN_API sp_status sp_plan_save(const sp_plan* plan, const char* path);
/* verify may be NULL; when given, the stored config hash must match. */
SCANPLAN_API sp_status sp_plan_load(const char* path, const sp_config* verify, sp_plan** out);
SCANPLAN_API size_t sp_plan_ground_count(const sp_plan* plan);
SCANPLAN_API size_t sp_plan_aerial_count(const sp_plan* plan);
SCANPLAN_API double sp_plan_planned_fraction(const sp_plan* plan);
SCANPLAN_API void sp_plan_free(sp_plan* plan);

/* One simulated scan per planned viewpoint against the truth mesh; writes
 * scans/vp_g<id>.ply / vp_a<id>.ply plus merged.ply under out_dir. */
SCANPLAN_API sp_status sp_simulate(const sp_config* cfg, const sp_mesh* truth,
                                   const sp_plan* plan, const char* out_dir);

/* Honest coverage of the plan measured on the truth mesh. */
SCANPLAN_API sp_status sp_evaluate(const sp_config* cfg, const sp_mesh* truth,
                                   const sp_plan* plan, sp_report** out);
SCANPLAN_API double sp_report_achieved_fraction(const sp_report* report);
SCANPLAN_API size_t sp_report_covered_count(const sp_report* report);
SCANPLAN_API size_t sp_report_uncovered_count(const sp_report* report);
SCANPLAN_API double sp_report_mean_spacing(const sp_report* report);
SCANPLAN_API void sp_report_free(sp_report* report);

/* Colored coverage export (mesh at path, viewpoints at <stem>_viewpoints.ply). */
SCANPLAN_API sp_status sp_export_viz(const sp_config* cfg, const sp_mesh* mesh,
                                     const sp_plan* plan, const char* path);

/* Full coarse-to-fine loop. prior may be NULL; when given, iteration 0 plans
 * directly on it and skips the coarse survey. summary may be NULL. */
SCANPLAN_API sp_status sp_pipeline_run(const sp_config* cfg, const sp_mesh* truth,
                                       const sp_mesh* prior, const char* out_dir,
                                       sp_pipeline_summary* summary);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SCANPLAN_H */
