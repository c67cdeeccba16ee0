#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "navrl/benchmark_runner.hpp"
#include "navrl/config.hpp"
#include "navrl/gradcheck.hpp"
#include "navrl/scenario_suite.hpp"
#include "navrl/svg_render.hpp"
#include "navrl/trainer.hpp"

namespace {

void print_eval(const navrl::EvalStats& s) {
  std::printf("episodes   %d\n", s.episodes);
  std::printf("success    %d (%.1f%%)\n", s.successes, 100.0 * s.success_rate);
  std::printf("collision  %d (%.1f%%)\n", s.collisions, 100.0 * s.collision_rate);
  std::printf("timeout    %d (%.1f%%)\n", s.timeouts, 100.0 * s.timeout_rate);
}

int cmd_train(const std::string& config_path, int seed, int episodes,
              const std::string& outdir) {
  navrl::TrainConfig cfg = config_path.empty() ? navrl::desk_train_config()
                                               : navrl::load_train_config(config_path);
  if (seed >= 0) cfg.seed = seed;
  if (episodes > 0) cfg.episodes = episodes;
  navrl::TrainResult res = navrl::train(cfg, outdir);
  std::printf("checkpoint %s\n", res.manifest_path.c_str());
  std::printf("log        %s\n", res.log_path.c_str());
  print_eval(res.final_eval);
  return 0;
}

int cmd_evaluate(const std::string& checkpoint, int episodes) {
  print_eval(navrl::evaluate_checkpoint(checkpoint, episodes));
  return 0;
}

int cmd_benchmark(const std::string& config_path, const std::string& checkpoint,
                  const std::vector<std::string>& planners,
                  const std::vector<std::string>& scenarios,
                  const std::vector<uint64_t>& seeds, const std::string& outdir) {
  navrl::BenchmarkConfig cfg = config_path.empty()
                                   ? navrl::default_benchmark_config()
                                   : navrl::load_benchmark_config(config_path);
  if (!checkpoint.empty()) cfg.checkpoint = checkpoint;
  if (!planners.empty()) cfg.planners = planners;
  if (!scenarios.empty()) cfg.scenarios = scenarios;
  if (!seeds.empty()) cfg.seeds = seeds;
  navrl::run_benchmark(cfg, outdir);
  std::printf("report     %s/report.json\n", outdir.c_str());
  return 0;
}

int cmd_render(const std::string& csv, const std::string& scenario, uint64_t seed,
               std::string out) {
  navrl::ScenarioSpec spec = navrl::scenario_by_name(scenario, seed);
  navrl::EpisodeRecord rec = navrl::read_trajectory_csv(csv);
  rec.status = navrl::reconstruct_status(rec, spec, navrl::EnvConfig{});
  if (out.empty()) {
    out = csv;
    auto dot = out.find_last_of('.');
    if (dot != std::string::npos) out.resize(dot);
    out += ".svg";
  }
  navrl::render_trajectory(rec, spec, out);
  std::printf("svg        %s\n", out.c_str());
  return 0;
}

int cmd_gradcheck(uint64_t seed, bool verbose) {
  navrl::GradCheckReport report = navrl::run_gradcheck(seed, verbose);
  for (const auto& c : report.cases) {
    std::printf("%-32s %s  max rel err %.3g\n", c.name.c_str(),
                c.pass ? "ok" : "FAIL", c.max_rel_err);
  }
  std::printf("worst relative error %.3g\n", report.worst);
  if (!report.all_pass) {
    std::fprintf(stderr, "gradient check failed\n");
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar costmap navigation: SAC training and planner benchmarks"};
  app.require_subcommand(1);

  std::string config_path, checkpoint, outdir, scenario, csv, out;
  std::vector<std::string> planners, scenarios;
  std::vector<uint64_t> seeds;
  int seed_i = -1, episodes = 0;
  uint64_t seed_u = 0;
  bool verbose = false;

  CLI::App* train = app.add_subcommand("train", "Train the SAC agent");
  train->add_option("--config", config_path, "Training config JSON");
  train->add_option("--seed", seed_i, "Override the config seed");
  train->add_option("--episodes", episodes, "Override the episode count");
  train->add_option("--outdir", outdir, "Output directory")->default_val("runs/train");

  CLI::App* eval = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  eval->add_option("--checkpoint", checkpoint, "Checkpoint manifest JSON")->required();
  eval->add_option("--episodes", episodes, "Evaluation episodes")->default_val(100);

  CLI::App* bench = app.add_subcommand("benchmark", "Run the planner benchmark");
  bench->add_option("--config", config_path, "Benchmark config JSON");
  bench->add_option("--checkpoint", checkpoint, "Override the SAC checkpoint");
  bench->add_option("--planner", planners, "Planner subset (sac/dwa/sp)");
  bench->add_option("--scenario", scenarios, "Scenario subset");
  bench->add_option("--seed", seeds, "Seed list");
  bench->add_option("--outdir", outdir, "Output directory")
      ->default_val("runs/benchmark");

  CLI::App* render = app.add_subcommand("render", "Render a trajectory CSV to SVG");
  render->add_option("csv", csv, "Trajectory CSV")->required();
  render->add_option("--scenario", scenario, "Scenario name")->required();
  render->add_option("--seed", seed_u, "Scenario seed")->default_val(0);
  render->add_option("--out", out, "Output SVG path (default: csv with .svg)");

  CLI::App* grad = app.add_subcommand("gradcheck", "Run the finite-difference suite");
  grad->add_option("--seed", seed_u, "Suite seed")->default_val(1234);
  grad->add_flag("--verbose", verbose, "Print every case");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 1;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, seed_i, episodes, outdir);
    if (eval->parsed()) return cmd_evaluate(checkpoint, episodes);
    if (bench->parsed())
      return cmd_benchmark(config_path, checkpoint, planners, scenarios, seeds, outdir);
    if (render->parsed()) return cmd_render(csv, scenario, seed_u, out);
    if (grad->parsed()) return cmd_gradcheck(seed_u, verbose);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
