#include "navrl/trainer.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

#include "navrl/log.hpp"
#include "navrl/scenario_suite.hpp"

namespace navrl {

namespace {

Image stacked_observation(const TrainConfig& cfg, std::vector<Image>& history,
                          const Environment& env) {
  Image frame = render_observation(cfg.obs, env.grid_inflated(), env.robot(),
                                   env.spec().goal);
  history.push_back(std::move(frame));
  const int k = cfg.sac.frame_stack;
  if (static_cast<int>(history.size()) > k)
    history.erase(history.begin(), history.end() - k);
  return stack_frames(history, k);
}

Action random_action(Rng& rng, const ActionBounds& b) {
  double v = rng.uniform(b.v_min, b.v_max);
  double w = rng.uniform(-b.omega_max, b.omega_max);
  return Action{v, w};
}

EpisodeStatus roll_deterministic(SacAgent& agent, const TrainConfig& cfg,
                                 const ScenarioSpec& spec) {
  Environment env(spec, cfg.env);
  env.reset();
  std::vector<Image> history;
  Image obs = stacked_observation(cfg, history, env);
  while (!env.done()) {
    Action a = agent.act(obs, true);
    env.step(a);
    obs = stacked_observation(cfg, history, env);
  }
  return env.status();
}

}  // namespace

EvalStats evaluate_agent(SacAgent& agent, const TrainConfig& cfg, int episodes) {
  EvalStats stats;
  stats.episodes = episodes;
  for (int i = 0; i < episodes; ++i) {
    switch (roll_deterministic(agent, cfg, eval_world(i))) {
      case EpisodeStatus::kSuccess: ++stats.successes; break;
      case EpisodeStatus::kCollision: ++stats.collisions; break;
      default: ++stats.timeouts; break;
    }
  }
  if (episodes > 0) {
    stats.success_rate = static_cast<double>(stats.successes) / episodes;
    stats.collision_rate = static_cast<double>(stats.collisions) / episodes;
    stats.timeout_rate = static_cast<double>(stats.timeouts) / episodes;
  }
  return stats;
}

void write_train_log_csv(const std::vector<EpisodeStats>& log, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot write " + path);
  std::fprintf(f, "episode,steps,return,outcome,critic_loss,actor_loss,alpha_loss,alpha\n");
  for (const auto& e : log) {
    std::fprintf(f, "%d,%d,%.9g,%s,%.9g,%.9g,%.9g,%.9g\n", e.episode, e.steps, e.ret,
                 to_string(e.status), e.critic_loss, e.actor_loss, e.alpha_loss, e.alpha);
  }
  std::fclose(f);
}

TrainResult train(const TrainConfig& cfg, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  SacAgent agent(cfg.net, cfg.sac, cfg.env.bounds, cfg.seed);
  ReplayBuffer buffer(cfg.sac.capacity, cfg.net.obs_channels, cfg.net.obs_rows,
                      cfg.net.obs_cols);
  Rng root(cfg.seed);
  Rng explore_rng = root.stream(100);

  ordered_json echo{{"train", train_config_to_json(cfg)}};
  auto save = [&](const std::string& stem) {
    ParamSet<float> params = agent.checkpoint_params();
    save_checkpoint(params, outdir + "/" + stem + ".json", outdir + "/" + stem + ".bin",
                    echo);
    return outdir + "/" + stem + ".json";
  };

  TrainResult result;
  for (int ep = 1; ep <= cfg.episodes; ++ep) {
    ScenarioSpec spec = training_world((ep - 1) % 3);
    Environment env(spec, cfg.env);
    env.reset();
    std::vector<Image> history;
    Image obs = stacked_observation(cfg, history, env);
    const bool exploring = ep <= cfg.sac.explore_episodes;

    EpisodeStats stats;
    stats.episode = ep;
    int n_updates = 0, n_actor = 0;
    while (!env.done()) {
      Action a = exploring ? random_action(explore_rng, cfg.env.bounds)
                           : agent.act(obs, false);
      Environment::StepResult res = env.step(a);
      Image next_obs = stacked_observation(cfg, history, env);
      auto norm = agent.mapper().to_norm(a);
      buffer.push(obs, {static_cast<float>(norm[0]), static_cast<float>(norm[1])},
                  static_cast<float>(res.reward.value), next_obs,
                  // Timeouts bootstrap; only collision/goal are true terminals.
                  res.reward.terminal);
      obs = std::move(next_obs);
      stats.ret += res.reward.value;

      if (!exploring && buffer.size() >= cfg.sac.batch_size) {
        UpdateStats u = agent.update(buffer);
        stats.critic_loss += u.critic_loss;
        ++n_updates;
        if (u.actor_stepped) {
          stats.actor_loss += u.actor_loss;
          stats.alpha_loss += u.alpha_loss;
          ++n_actor;
        }
        if (!std::isfinite(u.critic_loss) ||
            (u.actor_stepped &&
             (!std::isfinite(u.actor_loss) || !std::isfinite(u.alpha_loss)))) {
          std::ostringstream msg;
          msg << "training diverged: non-finite loss at episode " << ep << " step "
              << env.steps();
          throw std::runtime_error(msg.str());
        }
      }
    }
    stats.steps = env.steps();
    stats.status = env.status();
    if (n_updates > 0) stats.critic_loss /= n_updates;
    if (n_actor > 0) {
      stats.actor_loss /= n_actor;
      stats.alpha_loss /= n_actor;
    }
    stats.alpha = agent.alpha();
    result.log.push_back(stats);

    if (cfg.checkpoint_every > 0 && ep % cfg.checkpoint_every == 0) {
      char stem[32];
      std::snprintf(stem, sizeof(stem), "checkpoint_ep%05d", ep);
      save(stem);
    }
    if (ep % 25 == 0 || ep == cfg.episodes) {
      log::info("episode %d/%d: %s, return %.2f, alpha %.4f", ep, cfg.episodes,
                to_string(stats.status), stats.ret, stats.alpha);
    }
  }

  result.manifest_path = save("checkpoint_final");
  result.log_path = outdir + "/train_log.csv";
  write_train_log_csv(result.log, result.log_path);
  result.final_eval = evaluate_agent(agent, cfg, cfg.eval_episodes);
  return result;
}

std::unique_ptr<SacAgent> agent_from_checkpoint(const std::string& manifest_path,
                                                TrainConfig* out_cfg) {
  LoadedCheckpoint ckpt = load_checkpoint(manifest_path);
  if (!ckpt.config.contains("train"))
    throw std::runtime_error(manifest_path + ": manifest lacks a train config echo");
  TrainConfig cfg = train_config_from_json(ckpt.config.at("train"));
  auto agent = std::make_unique<SacAgent>(cfg.net, cfg.sac, cfg.env.bounds, cfg.seed);
  agent->restore(ckpt);
  if (out_cfg) *out_cfg = cfg;
  return agent;
}

EvalStats evaluate_checkpoint(const std::string& manifest_path, int episodes) {
  TrainConfig cfg;
  auto agent = agent_from_checkpoint(manifest_path, &cfg);
  return evaluate_agent(*agent, cfg, episodes);
}

}  // namespace navrl
