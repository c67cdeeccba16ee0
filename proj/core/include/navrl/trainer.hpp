#pragma once

#include <memory>
#include <string>
#include <vector>

#include "navrl/config.hpp"
#include "navrl/gridworld.hpp"
#include "navrl/sac.hpp"

namespace navrl {

struct EpisodeStats {
  int episode = 0;
  int steps = 0;
  double ret = 0.0;
  EpisodeStatus status = EpisodeStatus::kTimeout;
  // Means over the episode's gradient updates; zero when none ran.
  double critic_loss = 0.0;
  double actor_loss = 0.0;
  double alpha_loss = 0.0;
  double alpha = 0.0;
};

struct EvalStats {
  int episodes = 0;
  int successes = 0, collisions = 0, timeouts = 0;
  double success_rate = 0.0, collision_rate = 0.0, timeout_rate = 0.0;
};

struct TrainResult {
  std::vector<EpisodeStats> log;
  std::string manifest_path;
  std::string log_path;
  EvalStats final_eval;
};

// Runs the training loop on the 3-room rotation: random actions for the
// first explore_episodes, then sampled policy actions with one update per
// environment step once the buffer holds a batch. Writes train_log.csv,
// periodic checkpoints (checkpoint_every > 0), and checkpoint_final.json
// with the config echoed into the manifest. Throws on non-finite losses.
TrainResult train(const TrainConfig& cfg, const std::string& outdir);

// Deterministic-mode rollouts over the held-out room family.
EvalStats evaluate_agent(SacAgent& agent, const TrainConfig& cfg, int episodes);

// Rebuilds the agent (architecture and weights) from a manifest written by
// train(); the optional out parameter receives the echoed config.
std::unique_ptr<SacAgent> agent_from_checkpoint(const std::string& manifest_path,
                                                TrainConfig* out_cfg = nullptr);

EvalStats evaluate_checkpoint(const std::string& manifest_path, int episodes);

void write_train_log_csv(const std::vector<EpisodeStats>& log, const std::string& path);

}  // namespace navrl
