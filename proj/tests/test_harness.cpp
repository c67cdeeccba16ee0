#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "navrl/benchmark_runner.hpp"
#include "navrl/config.hpp"
#include "navrl/global_planner.hpp"
#include "navrl/inflation.hpp"
#include "navrl/scenario_suite.hpp"
#include "navrl/svg_render.hpp"

using namespace navrl;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct StandStill : Policy {
  Action act(const StepContext&) override { return {0.0, 0.0}; }
};

struct DriveStraight : Policy {
  Action act(const StepContext&) override { return {1.0, 0.0}; }
};

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

TEST_CASE("scenario generators are reproducible and seed-sensitive") {
  for (const auto& name : benchmark_scenario_names()) {
    const ScenarioSpec a = scenario_by_name(name, 3);
    const ScenarioSpec b = scenario_by_name(name, 3);
    CHECK(scenario_to_json(a) == scenario_to_json(b));
  }
  // The pedestrian cases vary with the seed.
  CHECK(scenario_to_json(scenario_c3(1)) != scenario_to_json(scenario_c3(2)));
  CHECK(scenario_to_json(scenario_c4(1)) != scenario_to_json(scenario_c4(2)));
  CHECK_THROWS_AS(scenario_by_name("bogus", 0), std::invalid_argument);
}

TEST_CASE("every suite scenario validates and is solvable at t=0") {
  EnvConfig env;
  for (const auto& name : {"c1", "c2", "c3", "c4", "train0", "train1", "train2",
                           "eval0", "eval7", "random3"}) {
    CAPTURE(name);
    const ScenarioSpec spec = scenario_by_name(name, 0);
    CHECK_NOTHROW(validate(spec));
    const OccupancyGrid inflated = inflate(rasterize(spec, 0.0), env.inflation);
    const auto plan = plan_global(inflated, {spec.start.x, spec.start.y}, spec.goal);
    CHECK(plan.has_value());
  }
}

TEST_CASE("c2's appearing disk sits on the global plan computed at t=0") {
  const ScenarioSpec spec = scenario_c2(0);
  REQUIRE(spec.appearing.size() == 1);
  const AppearingObstacle& disk = spec.appearing[0];
  EnvConfig env;
  const OccupancyGrid inflated = inflate(rasterize(spec, 0.0), env.inflation);
  const auto plan = plan_global(inflated, {spec.start.x, spec.start.y}, spec.goal);
  REQUIRE(plan.has_value());
  double closest = 1e9;
  for (const Point2& p : plan->points) closest = std::min(closest, distance(p, disk.center));
  CHECK(closest <= disk.radius);
}

TEST_CASE("c3's pedestrian halts near the robot, c4's does not") {
  const ScenarioSpec c3 = scenario_c3(0);
  REQUIRE(c3.movers.size() == 1);
  REQUIRE(c3.movers[0].halt_within_m.has_value());
  CHECK(*c3.movers[0].halt_within_m == 1.0);
  const ScenarioSpec c4 = scenario_c4(0);
  REQUIRE(c4.movers.size() == 1);
  CHECK(!c4.movers[0].halt_within_m.has_value());

  // Head-on approach: with the robot parked, the mover must stop roughly
  // one meter away instead of running it over.
  EnvConfig env;
  StandStill policy;
  EpisodeRecord rec = run_episode(c3, policy, env);
  CHECK(rec.status != EpisodeStatus::kCollision);
}

TEST_CASE("training and eval worlds are distinct families") {
  for (int i = 0; i < 3; ++i) {
    const ScenarioSpec t = training_world(i);
    CHECK(t.circles.size() == 1);
    CHECK(scenario_to_json(t) == scenario_to_json(training_world(i + 3)));  // wraps mod 3
  }
  const ScenarioSpec e0 = eval_world(0), e1 = eval_world(1);
  CHECK(scenario_to_json(e0) != scenario_to_json(e1));
  CHECK(scenario_to_json(eval_world(1)) == scenario_to_json(eval_world(1)));
  for (int i = 0; i < 10; ++i) {
    const ScenarioSpec e = eval_world(i);
    REQUIRE(e.circles.size() == 1);
    for (int j = 0; j < 3; ++j) {
      const ScenarioSpec t = training_world(j);
      const bool same = std::abs(e.circles[0].center.x - t.circles[0].center.x) < 1e-9 &&
                        std::abs(e.circles[0].center.y - t.circles[0].center.y) < 1e-9;
      CHECK(!same);
    }
  }
  CHECK_THROWS_AS(eval_world(-1), std::invalid_argument);
}

TEST_CASE("trajectory csv round-trips rows and mover traces") {
  const ScenarioSpec spec = scenario_c4(2);
  EnvConfig env;
  DriveStraight policy;
  EpisodeRecord rec = run_episode(spec, policy, env);
  REQUIRE(!rec.rows.empty());
  REQUIRE(rec.mover_traces.size() == 1);

  const std::string dir = "harness_csv_tmp";
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/traj.csv";
  write_trajectory_csv(rec, path);
  EpisodeRecord back = read_trajectory_csv(path);
  REQUIRE(back.rows.size() == rec.rows.size());
  REQUIRE(back.mover_traces.size() == 1);
  REQUIRE(back.mover_traces[0].size() == rec.mover_traces[0].size());
  for (size_t i = 0; i < rec.rows.size(); ++i) {
    CHECK(back.rows[i].t_s == doctest::Approx(rec.rows[i].t_s).epsilon(1e-8));
    CHECK(back.rows[i].x == doctest::Approx(rec.rows[i].x).epsilon(1e-8));
    CHECK(back.rows[i].y == doctest::Approx(rec.rows[i].y).epsilon(1e-8));
    CHECK(back.rows[i].v == doctest::Approx(rec.rows[i].v).epsilon(1e-8));
    CHECK(back.rows[i].reward == doctest::Approx(rec.rows[i].reward).epsilon(1e-6));
    CHECK(back.mover_traces[0][i].x ==
          doctest::Approx(rec.mover_traces[0][i].x).epsilon(1e-8));
  }
  // Writing the same record twice produces identical bytes.
  const std::string path2 = dir + "/traj2.csv";
  write_trajectory_csv(rec, path2);
  CHECK(slurp(path) == slurp(path2));
  std::filesystem::remove_all(dir);
}

TEST_CASE("terminal-row reconstruction recovers every outcome") {
  EnvConfig env;
  SUBCASE("success") {
    ScenarioSpec spec = training_world(0);
    spec.circles.clear();  // nothing in the way
    DriveStraight policy;
    EpisodeRecord rec = run_episode(spec, policy, env);
    REQUIRE(rec.status == EpisodeStatus::kSuccess);
    CHECK(reconstruct_status(rec, spec, env) == EpisodeStatus::kSuccess);
  }
  SUBCASE("collision") {
    const ScenarioSpec spec = training_world(0);  // disk dead ahead
    DriveStraight policy;
    EpisodeRecord rec = run_episode(spec, policy, env);
    REQUIRE(rec.status == EpisodeStatus::kCollision);
    CHECK(reconstruct_status(rec, spec, env) == EpisodeStatus::kCollision);
  }
  SUBCASE("timeout") {
    const ScenarioSpec spec = training_world(0);
    StandStill policy;
    EpisodeRecord rec = run_episode(spec, policy, env);
    REQUIRE(rec.status == EpisodeStatus::kTimeout);
    CHECK(reconstruct_status(rec, spec, env) == EpisodeStatus::kTimeout);
  }
}

TEST_CASE("svg rendering covers obstacles, velocity colors, and failure marks") {
  ScenarioSpec spec = scenario_c4(1);
  EnvConfig env;
  DriveStraight policy;
  EpisodeRecord rec = run_episode(spec, policy, env);
  const std::string svg = trajectory_svg(rec, spec);

  // Union shading: one gray circle per logged mover position.
  REQUIRE(!rec.mover_traces.empty());
  for (const Point2& p : rec.mover_traces[0]) {
    const std::string needle = "cx=\"" + fmt3(p.x * 100.0) + "\" cy=\"" +
                               fmt3((spec.size_y_m - p.y) * 100.0) + "\"";
    CHECK(svg.find(needle) != std::string::npos);
  }
  CHECK(svg.find("<svg") != std::string::npos);

  // A reverse segment is drawn in the dedicated reverse color.
  EpisodeRecord rev;
  rev.rows.push_back({0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0});
  rev.rows.push_back({0.2, 0.9, 1.0, 0.0, -0.5, 0.0, 1.0, 0.0});
  rev.status = EpisodeStatus::kTimeout;
  const std::string rev_svg = trajectory_svg(rev, spec);
  CHECK(rev_svg.find("#1565c0") != std::string::npos);

  // Collision runs carry the cross marker, non-collision runs do not.
  EpisodeRecord crash = rec;
  crash.status = EpisodeStatus::kCollision;
  CHECK(trajectory_svg(crash, spec).find("#c62828") != std::string::npos);
  EpisodeRecord clean = rec;
  clean.status = EpisodeStatus::kSuccess;
  CHECK(trajectory_svg(clean, spec).find("#c62828") == std::string::npos);
  EpisodeRecord empty;
  CHECK_THROWS_AS(trajectory_svg(empty, spec), std::invalid_argument);
}

TEST_CASE("front-distance column lower-bounds the forward ray in every logged row") {
  const ScenarioSpec spec = scenario_c1(0);
  EnvConfig env;
  DriveStraight policy;
  EpisodeRecord rec = run_episode(spec, policy, env);
  OccupancyGrid grid = rasterize(spec, 0.0);
  for (const auto& row : rec.rows) {
    const RobotState s{row.x, row.y, row.yaw};
    CHECK(row.min_front_dist_m <= raycast(s, grid, 0.0, env.front_ray_max_m) + 1e-9);
  }
}

TEST_CASE("benchmark reports are byte-identical across reruns") {
  BenchmarkConfig cfg;
  cfg.planners = {"sp", "dwa"};
  cfg.scenarios = {"c1"};
  cfg.seeds = {0, 1};
  cfg.checkpoint.clear();

  const std::string d1 = "bench_rerun_a", d2 = "bench_rerun_b";
  run_benchmark(cfg, d1);
  run_benchmark(cfg, d2);
  CHECK(slurp(d1 + "/report.json") == slurp(d2 + "/report.json"));
  CHECK(slurp(d1 + "/report.csv") == slurp(d2 + "/report.csv"));
  CHECK(slurp(d1 + "/traj_sp_c1_seed0.csv") == slurp(d2 + "/traj_sp_c1_seed0.csv"));
  CHECK(slurp(d1 + "/traj_dwa_c1_seed1.svg") == slurp(d2 + "/traj_dwa_c1_seed1.svg"));

  // Reported outcomes must match what their trajectory logs reconstruct to.
  BenchmarkReport rep = run_benchmark(cfg, d1);
  EnvConfig env = cfg.env;
  for (const auto& run : rep.runs) {
    const ScenarioSpec spec = scenario_by_name(run.scenario, run.seed);
    EpisodeRecord rec = read_trajectory_csv(d1 + "/" + run.trajectory_csv);
    CHECK(reconstruct_status(rec, spec, env) == run.status);
  }
  std::filesystem::remove_all(d1);
  std::filesystem::remove_all(d2);
}

TEST_CASE("missing checkpoints mark sac cells unavailable; empty scenario list is fine") {
  BenchmarkConfig cfg;
  cfg.planners = {"sac"};
  cfg.scenarios = {"c1"};
  cfg.seeds = {0};
  cfg.checkpoint = "does_not_exist.json";
  const std::string dir = "bench_unavail_tmp";
  BenchmarkReport rep = run_benchmark(cfg, dir);
  REQUIRE(rep.cells.size() == 1);
  CHECK(rep.cells[0].unavailable);
  CHECK(rep.cells[0].runs == 0);
  CHECK(rep.runs.empty());

  cfg.scenarios.clear();
  BenchmarkReport empty = run_benchmark(cfg, dir);
  CHECK(empty.cells.empty());
  CHECK(empty.runs.empty());
  std::filesystem::remove_all(dir);
}

TEST_CASE("configs round-trip through json and reject unknown keys") {
  const std::string dir = "config_tmp";
  std::filesystem::create_directories(dir);

  TrainConfig t = desk_train_config();
  t.seed = 99;
  t.episodes = 123;
  t.obs.mode = ObsMode::kCartesianRotation;
  save_train_config(t, dir + "/train.json");
  const TrainConfig back = load_train_config(dir + "/train.json");
  CHECK(back.seed == 99);
  CHECK(back.episodes == 123);
  CHECK(back.obs.mode == ObsMode::kCartesianRotation);
  CHECK(back.sac.batch_size == t.sac.batch_size);
  CHECK(back.net.obs_rows == t.net.obs_rows);
  CHECK(back.env.reward.r_max == t.env.reward.r_max);

  BenchmarkConfig b = default_benchmark_config();
  b.seeds = {4, 5};
  b.waypoint_spacing_m = 0.8;
  save_benchmark_config(b, dir + "/bench.json");
  const BenchmarkConfig bback = load_benchmark_config(dir + "/bench.json");
  CHECK(bback.seeds == std::vector<uint64_t>{4, 5});
  CHECK(bback.waypoint_spacing_m == 0.8);
  CHECK(bback.dwa.samples_v == b.dwa.samples_v);

  // Unknown keys are schema errors and the diagnostic names the key.
  {
    std::ofstream out(dir + "/bad.json");
    out << R"({"sac": {"batch_size": 8, "typo_key": 3}})";
  }
  try {
    load_train_config(dir + "/bad.json");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("typo_key") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("episode outcome names render and parse") {
  CHECK(std::string(to_string(EpisodeStatus::kSuccess)) == "success");
  CHECK(std::string(to_string(EpisodeStatus::kCollision)) == "collision");
  CHECK(std::string(to_string(EpisodeStatus::kTimeout)) == "timeout");
  CHECK(std::string(to_string(EpisodeStatus::kAborted)) == "aborted");
  CHECK(obs_mode_from_string("polar") == ObsMode::kPolar);
  CHECK_THROWS_AS(obs_mode_from_string("sideways"), std::invalid_argument);
}
