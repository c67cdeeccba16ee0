#include "navrl/benchmark_runner.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "navrl/dwa.hpp"
#include "navrl/global_planner.hpp"
#include "navrl/log.hpp"
#include "navrl/scenario_suite.hpp"
#include "navrl/sp_planner.hpp"
#include "navrl/svg_render.hpp"
#include "navrl/waypoints.hpp"

namespace navrl {

namespace {

// Plans once on the first act() call (the t=0 inflated grid, i.e. before
// any appearing obstacle exists) and reselects the waypoint every step.
class WaypointFollower : public Policy {
 public:
  WaypointFollower(double spacing_m, double clearance_m, double cost_weight)
      : spacing_m_(spacing_m), clearance_m_(clearance_m), cost_weight_(cost_weight) {}

  void reset() override {
    waypoints_.clear();
    planned_ = false;
  }

  Action act(const StepContext& ctx) override {
    if (!planned_) {
      planned_ = true;
      auto plan = plan_global(ctx.grid_inflated, {ctx.robot.x, ctx.robot.y},
                              ctx.spec.goal, cost_weight_);
      if (plan) waypoints_ = make_waypoints(*plan, spacing_m_);
    }
    if (waypoints_.empty()) return act_toward(ctx, ctx.spec.goal);
    auto [wp, window] = select_waypoint(waypoints_, ctx.robot, ctx.grid_inflated,
                                        clearance_m_);
    return act_toward(ctx, wp);
  }

 protected:
  virtual Action act_toward(const StepContext& ctx, Point2 waypoint) = 0;

 private:
  double spacing_m_, clearance_m_, cost_weight_;
  std::vector<Point2> waypoints_;
  bool planned_ = false;
};

class DwaPolicy : public WaypointFollower {
 public:
  explicit DwaPolicy(const BenchmarkConfig& cfg)
      : WaypointFollower(cfg.waypoint_spacing_m, cfg.waypoint_clearance_m,
                         cfg.plan_cost_weight),
        dwa_(cfg.dwa) {}

 protected:
  Action act_toward(const StepContext& ctx, Point2 waypoint) override {
    // Raw grid: the footprint radius already covers the robot body, and the
    // environment's collision test uses the same pairing. Checking arcs
    // against the inflated grid would count the robot radius twice and
    // close off any gap narrower than walls + 2 * (inscribed + footprint).
    return dwa_plan(ctx.robot, ctx.last_action, waypoint, ctx.grid_raw, dwa_);
  }

 private:
  DwaConfig dwa_;
};

class SpPolicy : public WaypointFollower {
 public:
  explicit SpPolicy(const BenchmarkConfig& cfg)
      : WaypointFollower(cfg.waypoint_spacing_m, cfg.waypoint_clearance_m,
                         cfg.plan_cost_weight),
        sp_(cfg.sp) {}

 protected:
  Action act_toward(const StepContext& ctx, Point2 waypoint) override {
    return sp_plan(ctx.robot, waypoint, ctx.grid_inflated, sp_);
  }

 private:
  SpConfig sp_;
};

class SacPolicy : public WaypointFollower {
 public:
  SacPolicy(const BenchmarkConfig& cfg, SacAgent& agent, const TrainConfig& tcfg)
      : WaypointFollower(cfg.waypoint_spacing_m, cfg.waypoint_clearance_m,
                         cfg.plan_cost_weight),
        agent_(agent),
        tcfg_(tcfg) {}

  void reset() override {
    WaypointFollower::reset();
    history_.clear();
  }

 protected:
  Action act_toward(const StepContext& ctx, Point2 waypoint) override {
    Image frame = render_observation(tcfg_.obs, ctx.grid_inflated, ctx.robot, waypoint);
    history_.push_back(std::move(frame));
    const int k = tcfg_.sac.frame_stack;
    if (static_cast<int>(history_.size()) > k)
      history_.erase(history_.begin(), history_.end() - k);
    Image stacked = stack_frames(history_, k);
    return agent_.act(stacked, true);
  }

 private:
  SacAgent& agent_;
  TrainConfig tcfg_;
  std::vector<Image> history_;
};

double path_length(const std::vector<TrajectoryRow>& rows) {
  double d = 0.0;
  for (size_t i = 1; i < rows.size(); ++i) {
    double dx = rows[i].x - rows[i - 1].x;
    double dy = rows[i].y - rows[i - 1].y;
    d += std::sqrt(dx * dx + dy * dy);
  }
  return d;
}

}  // namespace

std::unique_ptr<Policy> make_dwa_policy(const BenchmarkConfig& cfg) {
  return std::make_unique<DwaPolicy>(cfg);
}

std::unique_ptr<Policy> make_sp_policy(const BenchmarkConfig& cfg) {
  return std::make_unique<SpPolicy>(cfg);
}

std::unique_ptr<Policy> make_sac_policy(const BenchmarkConfig& cfg, SacAgent& agent,
                                        const TrainConfig& train_cfg) {
  return std::make_unique<SacPolicy>(cfg, agent, train_cfg);
}

BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  BenchmarkReport report;
  report.seeds = cfg.seeds;

  std::unique_ptr<SacAgent> agent;
  TrainConfig agent_cfg;
  bool wants_sac = false;
  for (const auto& p : cfg.planners) wants_sac = wants_sac || p == "sac";
  if (wants_sac && !cfg.checkpoint.empty() &&
      std::filesystem::exists(cfg.checkpoint)) {
    agent = agent_from_checkpoint(cfg.checkpoint, &agent_cfg);
  } else if (wants_sac) {
    log::warn("sac checkpoint missing (%s); reporting the planner as unavailable",
              cfg.checkpoint.c_str());
  }

  for (const auto& planner : cfg.planners) {
    for (const auto& scenario : cfg.scenarios) {
      CellStats cell;
      cell.planner = planner;
      cell.scenario = scenario;
      if (planner == "sac" && !agent) {
        cell.unavailable = true;
        report.cells.push_back(cell);
        continue;
      }
      std::unique_ptr<Policy> policy;
      if (planner == "dwa") {
        policy = make_dwa_policy(cfg);
      } else if (planner == "sp") {
        policy = make_sp_policy(cfg);
      } else if (planner == "sac") {
        policy = make_sac_policy(cfg, *agent, agent_cfg);
      } else {
        throw std::invalid_argument("unknown planner: " + planner);
      }

      for (uint64_t seed : cfg.seeds) {
        ScenarioSpec spec = scenario_by_name(scenario, seed);
        EpisodeRecord rec = run_episode(spec, *policy, cfg.env);

        RunRecord run;
        run.planner = planner;
        run.scenario = scenario;
        run.seed = seed;
        run.status = rec.status;
        run.steps = rec.steps;
        run.travel_time_s = rec.rows.back().t_s;
        run.travel_dist_m = path_length(rec.rows);
        run.mean_speed_mps =
            run.travel_time_s > 0.0 ? run.travel_dist_m / run.travel_time_s : 0.0;

        char stem[128];
        std::snprintf(stem, sizeof(stem), "traj_%s_%s_seed%llu", planner.c_str(),
                      scenario.c_str(), static_cast<unsigned long long>(seed));
        run.trajectory_csv = std::string(stem) + ".csv";
        run.trajectory_svg = std::string(stem) + ".svg";
        write_trajectory_csv(rec, outdir + "/" + run.trajectory_csv);
        render_trajectory(rec, spec, outdir + "/" + run.trajectory_svg);

        ++cell.runs;
        switch (rec.status) {
          case EpisodeStatus::kSuccess: cell.success_rate += 1; break;
          case EpisodeStatus::kCollision: cell.collision_rate += 1; break;
          case EpisodeStatus::kTimeout: cell.timeout_rate += 1; break;
          case EpisodeStatus::kAborted: cell.abort_rate += 1; break;
        }
        if (rec.status != EpisodeStatus::kCollision) {
          ++cell.travel_samples;
          cell.mean_travel_time_s += run.travel_time_s;
          cell.mean_travel_dist_m += run.travel_dist_m;
          cell.mean_speed_mps += run.mean_speed_mps;
        }
        report.runs.push_back(run);
      }
      if (cell.runs > 0) {
        cell.success_rate /= cell.runs;
        cell.collision_rate /= cell.runs;
        cell.timeout_rate /= cell.runs;
        cell.abort_rate /= cell.runs;
      }
      if (cell.travel_samples > 0) {
        cell.mean_travel_time_s /= cell.travel_samples;
        cell.mean_travel_dist_m /= cell.travel_samples;
        cell.mean_speed_mps /= cell.travel_samples;
      }
      report.cells.push_back(cell);
      log::info("%s on %s: success %.0f%%, collision %.0f%%", planner.c_str(),
                scenario.c_str(), 100.0 * cell.success_rate,
                100.0 * cell.collision_rate);
    }
  }

  std::ofstream json_out(outdir + "/report.json", std::ios::binary);
  json_out << report_to_json(report).dump(2) << "\n";
  json_out.close();
  write_report_csv(report, outdir + "/report.csv");
  return report;
}

ordered_json report_to_json(const BenchmarkReport& report) {
  ordered_json cells = ordered_json::array();
  for (const auto& c : report.cells) {
    cells.push_back(ordered_json{{"planner", c.planner},
                                 {"scenario", c.scenario},
                                 {"unavailable", c.unavailable},
                                 {"runs", c.runs},
                                 {"success_rate", c.success_rate},
                                 {"collision_rate", c.collision_rate},
                                 {"timeout_rate", c.timeout_rate},
                                 {"abort_rate", c.abort_rate},
                                 {"travel_samples", c.travel_samples},
                                 {"mean_travel_time_s", c.mean_travel_time_s},
                                 {"mean_travel_dist_m", c.mean_travel_dist_m},
                                 {"mean_speed_mps", c.mean_speed_mps}});
  }
  ordered_json runs = ordered_json::array();
  for (const auto& r : report.runs) {
    runs.push_back(ordered_json{{"planner", r.planner},
                                {"scenario", r.scenario},
                                {"seed", r.seed},
                                {"outcome", std::string(to_string(r.status))},
                                {"steps", r.steps},
                                {"travel_time_s", r.travel_time_s},
                                {"travel_dist_m", r.travel_dist_m},
                                {"mean_speed_mps", r.mean_speed_mps},
                                {"trajectory_csv", r.trajectory_csv},
                                {"trajectory_svg", r.trajectory_svg}});
  }
  return ordered_json{{"seeds", report.seeds}, {"cells", cells}, {"runs", runs}};
}

void write_report_csv(const BenchmarkReport& report, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fprintf(f,
               "planner,scenario,unavailable,runs,success_rate,collision_rate,"
               "timeout_rate,abort_rate,mean_travel_time_s,mean_travel_dist_m,"
               "mean_speed_mps\n");
  for (const auto& c : report.cells) {
    std::fprintf(f, "%s,%s,%d,%d,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                 c.planner.c_str(), c.scenario.c_str(), c.unavailable ? 1 : 0, c.runs,
                 c.success_rate, c.collision_rate, c.timeout_rate, c.abort_rate,
                 c.mean_travel_time_s, c.mean_travel_dist_m, c.mean_speed_mps);
  }
  std::fclose(f);
}

}  // namespace navrl
