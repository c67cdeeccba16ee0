#pragma once

#include <memory>
#include <string>
#include <vector>

#include "navrl/config.hpp"
#include "navrl/gridworld.hpp"
#include "navrl/trainer.hpp"

namespace navrl {

// Planner policies over the shared pipeline: global plan on the inflated
// grid at t=0, a waypoint window re-selected every control step, then the
// local planner. The SAC policy renders its observation around the selected
// waypoint and acts deterministically.
std::unique_ptr<Policy> make_dwa_policy(const BenchmarkConfig& cfg);
std::unique_ptr<Policy> make_sp_policy(const BenchmarkConfig& cfg);
std::unique_ptr<Policy> make_sac_policy(const BenchmarkConfig& cfg, SacAgent& agent,
                                        const TrainConfig& train_cfg);

struct RunRecord {
  std::string planner;
  std::string scenario;
  uint64_t seed = 0;
  EpisodeStatus status = EpisodeStatus::kTimeout;
  int steps = 0;
  double travel_time_s = 0.0;
  double travel_dist_m = 0.0;
  double mean_speed_mps = 0.0;
  std::string trajectory_csv;  // relative to the output directory
  std::string trajectory_svg;
};

struct CellStats {
  std::string planner;
  std::string scenario;
  bool unavailable = false;  // checkpoint missing for a learned planner
  int runs = 0;
  double success_rate = 0.0;
  double collision_rate = 0.0;
  double timeout_rate = 0.0;
  double abort_rate = 0.0;
  // Means over non-collision runs; zero when no such run exists.
  int travel_samples = 0;
  double mean_travel_time_s = 0.0;
  double mean_travel_dist_m = 0.0;
  double mean_speed_mps = 0.0;
};

struct BenchmarkReport {
  std::vector<uint64_t> seeds;
  std::vector<CellStats> cells;
  std::vector<RunRecord> runs;
};

// One episode per (planner, scenario, seed); writes per-run trajectory CSVs
// and SVGs plus report.json / report.csv into outdir.
BenchmarkReport run_benchmark(const BenchmarkConfig& cfg, const std::string& outdir);

ordered_json report_to_json(const BenchmarkReport& report);
void write_report_csv(const BenchmarkReport& report, const std::string& path);

}  // namespace navrl
