#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "navrl/dwa.hpp"
#include "navrl/gridworld.hpp"
#include "navrl/observation.hpp"
#include "navrl/sac.hpp"
#include "navrl/sp_planner.hpp"

namespace navrl {

using ordered_json = nlohmann::ordered_json;

// Thrown on unknown keys, bad enum values, or type mismatches; the message
// names the offending key and the accepted schema.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct TrainConfig {
  NetworkConfig net;
  SacConfig sac;
  EnvConfig env;
  ObsConfig obs;
  int episodes = 800;
  int eval_episodes = 100;
  int checkpoint_every = 0;  // episodes between checkpoints; 0 = final only
  uint64_t seed = 1;
};

// Reduced setup: 40x40 polar observation over 4 m, small networks, batch 32.
TrainConfig desk_train_config();
// Full-size setup: 64x64 observation, 4x32 conv encoder, 4x1024 MLPs,
// batch 128, 10000 episodes.
TrainConfig paper_train_config();

ordered_json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const ordered_json& j);
TrainConfig load_train_config(const std::string& path);
void save_train_config(const TrainConfig& cfg, const std::string& path);

struct BenchmarkConfig {
  std::vector<std::string> planners = {"sac", "dwa", "sp"};
  std::vector<std::string> scenarios = {"c1", "c2", "c3", "c4"};
  std::vector<uint64_t> seeds = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::string checkpoint;  // manifest path; empty marks sac unavailable
  EnvConfig env;
  DwaConfig dwa;
  SpConfig sp;
  double waypoint_spacing_m = 1.0;
  double waypoint_clearance_m = 0.4;
  double plan_cost_weight = 3.0;
};

BenchmarkConfig default_benchmark_config();

ordered_json benchmark_config_to_json(const BenchmarkConfig& cfg);
BenchmarkConfig benchmark_config_from_json(const ordered_json& j);
BenchmarkConfig load_benchmark_config(const std::string& path);
void save_benchmark_config(const BenchmarkConfig& cfg, const std::string& path);

// Network dimensions implied by the observation config (stacked channels,
// rows, cols stamped onto the architecture fields).
NetworkConfig resolve_network(NetworkConfig net, const ObsConfig& obs,
                              int frame_stack);

}  // namespace navrl
