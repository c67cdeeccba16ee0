#include "navrl/config.hpp"

#include <fstream>
#include <sstream>

namespace navrl {

namespace {

void check_keys(const ordered_json& j, const std::vector<std::string>& allowed,
                const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : allowed) ok = ok || (it.key() == k);
    if (!ok) {
      std::ostringstream msg;
      msg << context << ": unknown key \"" << it.key() << "\"; accepted keys:";
      for (const auto& k : allowed) msg << " " << k;
      throw ConfigError(msg.str());
    }
  }
}

template <typename T>
void get_to(const ordered_json& j, const char* key, T& out, const std::string& context) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(context + "." + key + ": " + e.what());
  }
}

ordered_json network_to_json(const NetworkConfig& n) {
  // Observation dimensions are stamped from the observation section at load
  // time, so only the architecture appears here.
  return ordered_json{{"conv_layers", n.conv_layers},
                      {"conv_filters", n.conv_filters},
                      {"kernel_size", n.kernel_size},
                      {"latent_dim", n.latent_dim},
                      {"mlp_hidden_layers", n.mlp_hidden_layers},
                      {"mlp_hidden_dim", n.mlp_hidden_dim}};
}

void network_from_json(const ordered_json& j, NetworkConfig& n) {
  check_keys(j,
             {"conv_layers", "conv_filters", "kernel_size", "latent_dim",
              "mlp_hidden_layers", "mlp_hidden_dim"},
             "network");
  get_to(j, "conv_layers", n.conv_layers, "network");
  get_to(j, "conv_filters", n.conv_filters, "network");
  get_to(j, "kernel_size", n.kernel_size, "network");
  get_to(j, "latent_dim", n.latent_dim, "network");
  get_to(j, "mlp_hidden_layers", n.mlp_hidden_layers, "network");
  get_to(j, "mlp_hidden_dim", n.mlp_hidden_dim, "network");
}

ordered_json sac_to_json(const SacConfig& s) {
  return ordered_json{{"gamma", s.gamma},
                      {"lr", s.lr},
                      {"batch_size", s.batch_size},
                      {"capacity", s.capacity},
                      {"tau", s.tau},
                      {"target_update_freq", s.target_update_freq},
                      {"actor_update_freq", s.actor_update_freq},
                      {"explore_episodes", s.explore_episodes},
                      {"drq_k", s.drq_k},
                      {"shift_radius_px", s.shift_radius_px},
                      {"frame_stack", s.frame_stack},
                      {"target_entropy", s.target_entropy},
                      {"init_alpha", s.init_alpha}};
}

void sac_from_json(const ordered_json& j, SacConfig& s) {
  check_keys(j,
             {"gamma", "lr", "batch_size", "capacity", "tau", "target_update_freq",
              "actor_update_freq", "explore_episodes", "drq_k", "shift_radius_px",
              "frame_stack", "target_entropy", "init_alpha"},
             "sac");
  get_to(j, "gamma", s.gamma, "sac");
  get_to(j, "lr", s.lr, "sac");
  get_to(j, "batch_size", s.batch_size, "sac");
  get_to(j, "capacity", s.capacity, "sac");
  get_to(j, "tau", s.tau, "sac");
  get_to(j, "target_update_freq", s.target_update_freq, "sac");
  get_to(j, "actor_update_freq", s.actor_update_freq, "sac");
  get_to(j, "explore_episodes", s.explore_episodes, "sac");
  get_to(j, "drq_k", s.drq_k, "sac");
  get_to(j, "shift_radius_px", s.shift_radius_px, "sac");
  get_to(j, "frame_stack", s.frame_stack, "sac");
  get_to(j, "target_entropy", s.target_entropy, "sac");
  get_to(j, "init_alpha", s.init_alpha, "sac");
}

ordered_json obs_to_json(const ObsConfig& o) {
  return ordered_json{{"mode", std::string(to_string(o.mode))},
                      {"rows", o.rows},
                      {"cols", o.cols},
                      {"r_max_m", o.r_max_m},
                      {"window_m", o.window_m}};
}

void obs_from_json(const ordered_json& j, ObsConfig& o) {
  check_keys(j, {"mode", "rows", "cols", "r_max_m", "window_m"}, "observation");
  if (j.contains("mode")) {
    std::string m;
    get_to(j, "mode", m, "observation");
    try {
      o.mode = obs_mode_from_string(m);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("observation.mode: ") + e.what());
    }
  }
  get_to(j, "rows", o.rows, "observation");
  get_to(j, "cols", o.cols, "observation");
  get_to(j, "r_max_m", o.r_max_m, "observation");
  get_to(j, "window_m", o.window_m, "observation");
}

ordered_json env_to_json(const EnvConfig& e) {
  return ordered_json{
      {"dt_s", e.dt_s},
      {"v_min_mps", e.bounds.v_min},
      {"v_max_mps", e.bounds.v_max},
      {"omega_max_radps", e.bounds.omega_max},
      {"footprint_m", e.footprint_m},
      {"front_ray_max_m", e.front_ray_max_m},
      {"inflation",
       {{"inscribed_radius_m", e.inflation.inscribed_radius_m},
        {"inflation_radius_m", e.inflation.inflation_radius_m},
        {"cost_scaling_factor", e.inflation.cost_scaling_factor}}},
      {"reward",
       {{"r_max", e.reward.r_max},
        {"gaussian_sigma_m", e.reward.gaussian_sigma_m},
        {"gaussian_half_width_m", e.reward.gaussian_half_width_m},
        {"goal_tolerance_m", e.reward.goal_tolerance_m},
        {"progress_weight", e.reward.progress_weight}}}};
}

void env_from_json(const ordered_json& j, EnvConfig& e) {
  check_keys(j,
             {"dt_s", "v_min_mps", "v_max_mps", "omega_max_radps", "footprint_m",
              "front_ray_max_m", "inflation", "reward"},
             "env");
  get_to(j, "dt_s", e.dt_s, "env");
  get_to(j, "v_min_mps", e.bounds.v_min, "env");
  get_to(j, "v_max_mps", e.bounds.v_max, "env");
  get_to(j, "omega_max_radps", e.bounds.omega_max, "env");
  get_to(j, "footprint_m", e.footprint_m, "env");
  get_to(j, "front_ray_max_m", e.front_ray_max_m, "env");
  if (j.contains("inflation")) {
    const auto& ji = j.at("inflation");
    check_keys(ji, {"inscribed_radius_m", "inflation_radius_m", "cost_scaling_factor"},
               "env.inflation");
    get_to(ji, "inscribed_radius_m", e.inflation.inscribed_radius_m, "env.inflation");
    get_to(ji, "inflation_radius_m", e.inflation.inflation_radius_m, "env.inflation");
    get_to(ji, "cost_scaling_factor", e.inflation.cost_scaling_factor, "env.inflation");
  }
  if (j.contains("reward")) {
    const auto& jr = j.at("reward");
    check_keys(jr,
               {"r_max", "gaussian_sigma_m", "gaussian_half_width_m", "goal_tolerance_m",
                "progress_weight"},
               "env.reward");
    get_to(jr, "r_max", e.reward.r_max, "env.reward");
    get_to(jr, "gaussian_sigma_m", e.reward.gaussian_sigma_m, "env.reward");
    get_to(jr, "gaussian_half_width_m", e.reward.gaussian_half_width_m, "env.reward");
    get_to(jr, "goal_tolerance_m", e.reward.goal_tolerance_m, "env.reward");
    get_to(jr, "progress_weight", e.reward.progress_weight, "env.reward");
  }
}

ordered_json dwa_to_json(const DwaConfig& d) {
  return ordered_json{{"v_min_mps", d.v_min},
                      {"v_max_mps", d.v_max},
                      {"omega_max_radps", d.omega_max},
                      {"accel_lin_mps2", d.accel_lin},
                      {"accel_ang_radps2", d.accel_ang},
                      {"samples_v", d.samples_v},
                      {"samples_omega", d.samples_omega},
                      {"horizon_s", d.horizon_s},
                      {"sim_step_s", d.sim_step_s},
                      {"control_period_s", d.control_period_s},
                      {"footprint_m", d.footprint_m},
                      {"w_path", d.w_path},
                      {"w_clear", d.w_clear},
                      {"w_speed", d.w_speed},
                      {"clearance_cap_m", d.clearance_cap_m}};
}

void dwa_from_json(const ordered_json& j, DwaConfig& d) {
  check_keys(j,
             {"v_min_mps", "v_max_mps", "omega_max_radps", "accel_lin_mps2",
              "accel_ang_radps2", "samples_v", "samples_omega", "horizon_s", "sim_step_s",
              "control_period_s", "footprint_m", "w_path", "w_clear", "w_speed",
              "clearance_cap_m"},
             "dwa");
  get_to(j, "v_min_mps", d.v_min, "dwa");
  get_to(j, "v_max_mps", d.v_max, "dwa");
  get_to(j, "omega_max_radps", d.omega_max, "dwa");
  get_to(j, "accel_lin_mps2", d.accel_lin, "dwa");
  get_to(j, "accel_ang_radps2", d.accel_ang, "dwa");
  get_to(j, "samples_v", d.samples_v, "dwa");
  get_to(j, "samples_omega", d.samples_omega, "dwa");
  get_to(j, "horizon_s", d.horizon_s, "dwa");
  get_to(j, "sim_step_s", d.sim_step_s, "dwa");
  get_to(j, "control_period_s", d.control_period_s, "dwa");
  get_to(j, "footprint_m", d.footprint_m, "dwa");
  get_to(j, "w_path", d.w_path, "dwa");
  get_to(j, "w_clear", d.w_clear, "dwa");
  get_to(j, "w_speed", d.w_speed, "dwa");
  get_to(j, "clearance_cap_m", d.clearance_cap_m, "dwa");
}

ordered_json sp_to_json(const SpConfig& s) {
  return ordered_json{{"lookahead_m", s.lookahead_m},
                      {"k_omega", s.k_omega},
                      {"v_max_mps", s.v_max},
                      {"omega_max_radps", s.omega_max},
                      {"cost_weight", s.cost_weight}};
}

void sp_from_json(const ordered_json& j, SpConfig& s) {
  check_keys(j, {"lookahead_m", "k_omega", "v_max_mps", "omega_max_radps", "cost_weight"},
             "sp");
  get_to(j, "lookahead_m", s.lookahead_m, "sp");
  get_to(j, "k_omega", s.k_omega, "sp");
  get_to(j, "v_max_mps", s.v_max, "sp");
  get_to(j, "omega_max_radps", s.omega_max, "sp");
  get_to(j, "cost_weight", s.cost_weight, "sp");
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json_file(const ordered_json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace

NetworkConfig resolve_network(NetworkConfig net, const ObsConfig& obs, int frame_stack) {
  net.obs_rows = obs.rows;
  net.obs_cols = obs.cols;
  net.obs_channels = obs_base_channels(obs.mode) * frame_stack;
  return net;
}

TrainConfig desk_train_config() {
  TrainConfig cfg;
  cfg.net = desk_network();
  cfg.sac.batch_size = 32;
  cfg.sac.capacity = 60000;
  cfg.obs.rows = 40;
  cfg.obs.cols = 40;
  cfg.obs.r_max_m = 4.0;
  cfg.obs.frame_stack = cfg.sac.frame_stack;
  cfg.episodes = 800;
  cfg.net = resolve_network(cfg.net, cfg.obs, cfg.sac.frame_stack);
  return cfg;
}

TrainConfig paper_train_config() {
  TrainConfig cfg;
  cfg.net = paper_network();
  cfg.obs.rows = 64;
  cfg.obs.cols = 64;
  cfg.obs.r_max_m = 8.0;
  cfg.obs.frame_stack = cfg.sac.frame_stack;
  cfg.episodes = 10000;
  cfg.net = resolve_network(cfg.net, cfg.obs, cfg.sac.frame_stack);
  return cfg;
}

ordered_json train_config_to_json(const TrainConfig& cfg) {
  return ordered_json{{"episodes", cfg.episodes},
                      {"eval_episodes", cfg.eval_episodes},
                      {"checkpoint_every", cfg.checkpoint_every},
                      {"seed", cfg.seed},
                      {"network", network_to_json(cfg.net)},
                      {"sac", sac_to_json(cfg.sac)},
                      {"observation", obs_to_json(cfg.obs)},
                      {"env", env_to_json(cfg.env)}};
}

TrainConfig train_config_from_json(const ordered_json& j) {
  TrainConfig cfg = desk_train_config();
  check_keys(j,
             {"episodes", "eval_episodes", "checkpoint_every", "seed", "network", "sac",
              "observation", "env"},
             "train config");
  get_to(j, "episodes", cfg.episodes, "train config");
  get_to(j, "eval_episodes", cfg.eval_episodes, "train config");
  get_to(j, "checkpoint_every", cfg.checkpoint_every, "train config");
  get_to(j, "seed", cfg.seed, "train config");
  if (j.contains("network")) network_from_json(j.at("network"), cfg.net);
  if (j.contains("sac")) sac_from_json(j.at("sac"), cfg.sac);
  if (j.contains("observation")) obs_from_json(j.at("observation"), cfg.obs);
  if (j.contains("env")) env_from_json(j.at("env"), cfg.env);
  cfg.obs.frame_stack = cfg.sac.frame_stack;
  cfg.net = resolve_network(cfg.net, cfg.obs, cfg.sac.frame_stack);
  return cfg;
}

TrainConfig load_train_config(const std::string& path) {
  return train_config_from_json(read_json_file(path));
}

void save_train_config(const TrainConfig& cfg, const std::string& path) {
  write_json_file(train_config_to_json(cfg), path);
}

BenchmarkConfig default_benchmark_config() {
  return BenchmarkConfig{};
}

ordered_json benchmark_config_to_json(const BenchmarkConfig& cfg) {
  return ordered_json{{"planners", cfg.planners},
                      {"scenarios", cfg.scenarios},
                      {"seeds", cfg.seeds},
                      {"checkpoint", cfg.checkpoint},
                      {"env", env_to_json(cfg.env)},
                      {"dwa", dwa_to_json(cfg.dwa)},
                      {"sp", sp_to_json(cfg.sp)},
                      {"waypoint_spacing_m", cfg.waypoint_spacing_m},
                      {"waypoint_clearance_m", cfg.waypoint_clearance_m},
                      {"plan_cost_weight", cfg.plan_cost_weight}};
}

BenchmarkConfig benchmark_config_from_json(const ordered_json& j) {
  BenchmarkConfig cfg;
  check_keys(j,
             {"planners", "scenarios", "seeds", "checkpoint", "env", "dwa", "sp",
              "waypoint_spacing_m", "waypoint_clearance_m", "plan_cost_weight"},
             "benchmark config");
  get_to(j, "planners", cfg.planners, "benchmark config");
  get_to(j, "scenarios", cfg.scenarios, "benchmark config");
  get_to(j, "seeds", cfg.seeds, "benchmark config");
  get_to(j, "checkpoint", cfg.checkpoint, "benchmark config");
  if (j.contains("env")) env_from_json(j.at("env"), cfg.env);
  if (j.contains("dwa")) dwa_from_json(j.at("dwa"), cfg.dwa);
  if (j.contains("sp")) sp_from_json(j.at("sp"), cfg.sp);
  get_to(j, "waypoint_spacing_m", cfg.waypoint_spacing_m, "benchmark config");
  get_to(j, "waypoint_clearance_m", cfg.waypoint_clearance_m, "benchmark config");
  get_to(j, "plan_cost_weight", cfg.plan_cost_weight, "benchmark config");
  return cfg;
}

BenchmarkConfig load_benchmark_config(const std::string& path) {
  return benchmark_config_from_json(read_json_file(path));
}

void save_benchmark_config(const BenchmarkConfig& cfg, const std::string& path) {
  write_json_file(benchmark_config_to_json(cfg), path);
}

}  // namespace navrl
