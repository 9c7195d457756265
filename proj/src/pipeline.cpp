#include "scanplan/pipeline.hpp"

#include "scanplan/candidates.hpp"
#include "scanplan/meshify.hpp"
#include "scanplan/nbv.hpp"
#include "scanplan/plan_io.hpp"
#include "scanplan/ply_io.hpp"
#include "scanplan/tour.hpp"
#include "scanplan/viz.hpp"

#include <sstream>
#include <unordered_map>

namespace scanplan {

namespace {

SensorModel coarse_sensor(const RunConfig& cfg) {
    SensorModel s = cfg.sensors.ground;
    s.angular_resolution = cfg.coarse_resolution;
    s.range_noise_sigma = cfg.coarse_range_sigma;
    s.min_elevation = cfg.coarse_elev_min;
    s.max_elevation = cfg.coarse_elev_max;
    return s;
}

std::vector<PlannedViewpoint> selected_viewpoints(const Selection& selection,
                                                  const std::vector<Viewpoint>& candidates,
                                                  AgentClass cls) {
    std::unordered_map<int, const Viewpoint*> by_id;
    for (const Viewpoint& vp : candidates) by_id[vp.id] = &vp;

    std::vector<PlannedViewpoint> out;
    for (const auto& pick : selection.picks) {
        const Viewpoint* vp = by_id.at(pick.viewpoint_id);
        out.push_back({vp->id, vp->position, cls, pick.marginal_gain, vp->heading});
    }
    return out;
}

std::string report_json(const CoverageReport& report) {
    std::ostringstream out;
    out << "{\n";
    out << "  \"achieved_fraction\": " << format_g9(report.achieved_fraction) << ",\n";
    out << "  \"covered_samples\": "
        << (report.hit_counts.size() - report.residual_uncovered.size()) << ",\n";
    out << "  \"uncovered_samples\": " << report.residual_uncovered.size() << ",\n";
    out << "  \"mean_covered_spacing\": " << format_g9(report.mean_covered_spacing) << ",\n";
    out << "  \"residual_uncovered\": [";
    for (std::size_t i = 0; i < report.residual_uncovered.size(); ++i) {
        out << (i ? ", " : "") << report.residual_uncovered[i];
    }
    out << "]\n}\n";
    return out.str();
}

template <typename Fn>
auto stage(int iteration, const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        raise(e.code(), "iteration " + std::to_string(iteration) + ", stage " + name + ": " +
                            e.what());
    }
}

} // namespace

PlanningResult plan_scene(const TriangleMesh& mesh, const PointCloud* prior_cloud,
                          const RunConfig& cfg, std::optional<WeightMode> weight_mode_override) {
    cfg.validate();
    TriangleMesh planning = mesh;
    planning.validate();
    planning.update_derived();

    const SpatialIndex index(planning);
    const auto samples = sample_surface(planning, cfg.sampling_spacing);

    const auto ground_candidates = generate_ground_candidates(planning, index, cfg.ground);
    const auto aerial_candidates = generate_aerial_candidates(planning, index, cfg.aerial);

    const CoverageMatrix ground_matrix =
        build_coverage(ground_candidates, samples, cfg.sensors, index, cfg.threads);
    CoverageMatrix aerial_matrix;
    aerial_matrix.samples = samples;
    if (!aerial_candidates.empty()) {
        aerial_matrix =
            build_coverage(aerial_candidates, samples, cfg.sensors, index, cfg.threads);
    }

    const WeightMode mode = weight_mode_override.value_or(cfg.weight_mode);
    const WeightVector weights = compute_weights(samples, prior_cloud, mode, cfg.rho_ref);

    TwoPhaseParams solver;
    solver.solver = cfg.solver;
    solver.workers = cfg.threads;
    const TwoPhasePlan two_phase = two_phase_plan(ground_matrix, aerial_matrix, weights, solver);

    PlanningResult result;
    result.samples = samples;
    result.ground_covered = two_phase.ground.covered;
    result.aerial_covered = two_phase.aerial.covered;

    ScanPlan& plan = result.plan;
    plan.tool_version = kToolVersion;
    plan.config_hash = cfg.hash();
    plan.seed = cfg.seed;
    plan.ground = selected_viewpoints(two_phase.ground, ground_candidates, AgentClass::Ground);
    plan.aerial = selected_viewpoints(two_phase.aerial, aerial_candidates, AgentClass::Aerial);
    plan.planned_fraction = two_phase.combined_fraction;
    plan.residual_uncovered = two_phase.residual_uncovered;

    const Aabb box = planning.bounds();
    std::vector<ClassSelection> tour_input;
    if (!plan.ground.empty()) {
        ClassSelection sel;
        sel.agent_class = AgentClass::Ground;
        sel.depot = box.min;
        for (const auto& vp : plan.ground) sel.viewpoints.push_back({vp.id, vp.position});
        tour_input.push_back(std::move(sel));
    }
    if (!plan.aerial.empty()) {
        ClassSelection sel;
        sel.agent_class = AgentClass::Aerial;
        sel.depot = Point3{box.min.x, box.min.y, box.max.z};
        for (const auto& vp : plan.aerial) sel.viewpoints.push_back({vp.id, vp.position});
        tour_input.push_back(std::move(sel));
    }
    for (const Tour& tour : plan_tours(tour_input)) {
        plan.tours.push_back({tour.agent_class, tour.order, tour.length});
    }
    return result;
}

PointCloud simulate_plan_scans(const SpatialIndex& truth_index, const ScanPlan& plan,
                               const RunConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    PointCloud merged;
    const auto scan_class = [&](const std::vector<PlannedViewpoint>& vps, AgentClass cls,
                                const char* prefix) {
        ScanConfig scan_cfg;
        scan_cfg.sensor = cfg.sensors.for_class(cls);
        scan_cfg.seed = cfg.seed;
        for (const PlannedViewpoint& pv : vps) {
            Viewpoint vp{pv.id, pv.position, cls, pv.heading};
            const PointCloud cloud = simulate_scan(truth_index, vp, scan_cfg, cfg.threads);
            save_cloud(cloud, dir / ("vp_" + std::string(prefix) + std::to_string(pv.id) +
                                     ".ply"));
            merged.append(cloud);
        }
    };
    scan_class(plan.ground, AgentClass::Ground, "g");
    scan_class(plan.aerial, AgentClass::Aerial, "a");
    return merged;
}

CoverageReport evaluate_plan_on_mesh(const TriangleMesh& mesh, const ScanPlan& plan,
                                     const RunConfig& cfg) {
    cfg.validate();
    TriangleMesh truth = mesh;
    truth.validate();
    truth.update_derived();
    const SpatialIndex index(truth);
    const auto samples = sample_surface(truth, cfg.sampling_spacing);
    return evaluate_plan(samples, plan, index, cfg.sensors, cfg.threads);
}

void export_plan_viz(const TriangleMesh& mesh, const ScanPlan& plan, const RunConfig& cfg,
                     const std::filesystem::path& path) {
    cfg.validate();
    TriangleMesh scene = mesh;
    scene.validate();
    scene.update_derived();
    const SpatialIndex index(scene);
    const auto samples = sample_surface(scene, cfg.sampling_spacing);

    Bitset ground_covered(samples.size());
    Bitset aerial_covered(samples.size());
    const auto mark = [&](const std::vector<PlannedViewpoint>& vps, AgentClass cls,
                          Bitset& covered) {
        const SensorModel& sensor = cfg.sensors.for_class(cls);
        for (const PlannedViewpoint& pv : vps) {
            const Viewpoint vp{pv.id, pv.position, cls, pv.heading};
            for (std::size_t s = 0; s < samples.size(); ++s) {
                if (visibility_test(vp, samples[s], sensor, index)) covered.set(s);
            }
        }
    };
    mark(plan.ground, AgentClass::Ground, ground_covered);
    mark(plan.aerial, AgentClass::Aerial, aerial_covered);

    std::vector<PlannedViewpoint> all = plan.ground;
    all.insert(all.end(), plan.aerial.begin(), plan.aerial.end());
    export_coverage_viz(scene, samples, ground_covered, aerial_covered, all, path);
}

PipelineResult run_pipeline(const TriangleMesh& ground_truth, const RunConfig& cfg,
                            const std::filesystem::path& out_dir,
                            const std::optional<TriangleMesh>& prior_mesh) {
    cfg.validate();
    TriangleMesh truth = ground_truth;
    truth.validate();
    truth.update_derived();

    const SpatialIndex truth_index(truth);
    const auto truth_samples = sample_surface(truth, cfg.sampling_spacing);

    std::filesystem::create_directories(out_dir);
    write_file_atomic(out_dir / "config.txt", cfg.to_text());

    PointCloud accumulated; // all fine scans so far, with origins
    ScanPlan executed;      // cumulative executed viewpoints (ids not unique)
    executed.tool_version = kToolVersion;
    executed.config_hash = cfg.hash();
    executed.seed = cfg.seed;

    PipelineResult result;
    double prev_achieved = 0.0;

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        const std::filesystem::path iter_dir = out_dir / ("iter_" + std::to_string(iter));
        std::filesystem::create_directories(iter_dir);

        // Planning substrate for this iteration.
        TriangleMesh planning_mesh;
        PointCloud coarse_cloud;
        bool have_prior_cloud = false;

        if (iter == 0 && prior_mesh) {
            planning_mesh = *prior_mesh; // BIM bypass: no survey, no meshify
        } else if (iter == 0) {
            stage(iter, "coarse-survey", [&] {
                auto waypoints_full = generate_ground_candidates(truth, truth_index, cfg.ground);
                std::vector<Point3> waypoints;
                for (std::size_t i = 0; i < waypoints_full.size();
                     i += std::size_t(cfg.coarse_waypoint_decimation)) {
                    waypoints.push_back(waypoints_full[i].position);
                }
                ScanConfig coarse_cfg;
                coarse_cfg.sensor = coarse_sensor(cfg);
                coarse_cfg.seed = cfg.seed;
                coarse_cfg.pose_jitter_sigma = cfg.coarse_pose_jitter;
                coarse_cloud = simulate_coarse_survey(truth_index, waypoints, coarse_cfg,
                                                      cfg.threads);
                save_cloud(coarse_cloud, iter_dir / "coarse.ply");
                return 0;
            });
            have_prior_cloud = true;
            planning_mesh = stage(iter, "meshify",
                                  [&] { return meshify_cloud(coarse_cloud, cfg.meshify); });
            save_mesh(planning_mesh, iter_dir / "coarse_mesh.ply");
        } else {
            planning_mesh = stage(iter, "meshify",
                                  [&] { return meshify_cloud(accumulated, cfg.meshify); });
            save_mesh(planning_mesh, iter_dir / "coarse_mesh.ply");
        }

        // Plan on the current model. Later iterations aim at what the
        // accumulated scans still cover poorly.
        const PointCloud* prior = nullptr;
        std::optional<WeightMode> mode_override;
        if (iter > 0) {
            prior = &accumulated;
            mode_override = WeightMode::DensityDeficit;
        } else if (have_prior_cloud && cfg.weight_mode == WeightMode::DensityDeficit) {
            prior = &coarse_cloud;
        } else if (cfg.weight_mode == WeightMode::DensityDeficit) {
            mode_override = WeightMode::Uniform; // BIM bypass has no cloud yet
        }

        const PlanningResult planning = stage(iter, "plan", [&] {
            return plan_scene(planning_mesh, prior, cfg, mode_override);
        });
        save_plan(planning.plan, iter_dir / "plan.json");

        stage(iter, "viz", [&] {
            std::vector<PlannedViewpoint> all = planning.plan.ground;
            all.insert(all.end(), planning.plan.aerial.begin(), planning.plan.aerial.end());
            export_coverage_viz(planning_mesh, planning.samples, planning.ground_covered,
                                planning.aerial_covered, all, iter_dir / "viz.ply");
            return 0;
        });

        // Execute: scan from every selected viewpoint against ground truth.
        const PointCloud fine = stage(iter, "scan", [&] {
            return simulate_plan_scans(truth_index, planning.plan, cfg, iter_dir / "scans");
        });
        accumulated.append(fine);
        executed.ground.insert(executed.ground.end(), planning.plan.ground.begin(),
                               planning.plan.ground.end());
        executed.aerial.insert(executed.aerial.end(), planning.plan.aerial.begin(),
                               planning.plan.aerial.end());

        const CoverageReport report = stage(iter, "evaluate", [&] {
            return evaluate_plan(truth_samples, executed, truth_index, cfg.sensors,
                                 cfg.threads);
        });
        write_file_atomic(iter_dir / "report.json", report_json(report));

        IterationRecord record;
        record.iteration = iter;
        record.planned_fraction = planning.plan.planned_fraction;
        record.achieved_fraction = report.achieved_fraction;
        record.plan = planning.plan;
        record.dir = iter_dir;
        result.iterations.push_back(std::move(record));
        result.final_achieved = report.achieved_fraction;

        const double gain = report.achieved_fraction - prev_achieved;
        prev_achieved = report.achieved_fraction;
        if (gain < cfg.epsilon_stop) break;
    }
    return result;
}

} // namespace scanplan
