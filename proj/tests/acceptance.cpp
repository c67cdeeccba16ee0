// Acceptance gate: one line per criterion, [PASS]/[FAIL], exit 2 on any
// failure. Training-heavy criteria cache their per-seed results under the
// work directory (--workdir, default "acceptance_work"), so reruns are
// cheap; delete the directory to retrain from scratch.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "navrl/benchmark_runner.hpp"
#include "navrl/config.hpp"
#include "navrl/dwa.hpp"
#include "navrl/global_planner.hpp"
#include "navrl/gradcheck.hpp"
#include "navrl/gridworld.hpp"
#include "navrl/inflation.hpp"
#include "navrl/observation.hpp"
#include "navrl/reward.hpp"
#include "navrl/rng.hpp"
#include "navrl/scenario_suite.hpp"
#include "navrl/trainer.hpp"
#include "oracles.hpp"

using namespace navrl;

namespace {

std::string g_workdir = "acceptance_work";

double now_s() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return "<missing:" + path + ">";
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---- criterion 1: reward equation vs direct substitution ----

// Independent evaluation of the shaped reward: progress terms with doubled
// regressions, +-r_max terminal bonuses with collision precedence, minus a
// truncated-Gaussian correlation with normalized costs.
double reward_by_substitution(const WaypointGeometry& before,
                              const WaypointGeometry& after, bool collision,
                              const OccupancyGrid& grid, const RobotState& robot,
                              const RewardParams& p) {
  auto prog = [](double o, double n) {
    const double d = o - n;
    return d >= 0.0 ? d : 2.0 * d;
  };
  double r = p.progress_weight * prog(before.distance_m, after.distance_m) +
             p.progress_weight *
                 prog(std::abs(before.bearing_rad), std::abs(after.bearing_rad));
  if (collision)
    r -= p.r_max;
  else if (after.distance_m <= p.goal_tolerance_m)
    r += p.r_max;
  double num = 0.0, den = 0.0;
  for (int row = 0; row < grid.rows(); ++row)
    for (int col = 0; col < grid.cols(); ++col) {
      const Point2 c = grid.cell_center(row, col);
      const double dx = c.x - robot.x, dy = c.y - robot.y;
      if (std::abs(dx) > p.gaussian_half_width_m || std::abs(dy) > p.gaussian_half_width_m)
        continue;
      const double k =
          std::exp(-(dx * dx + dy * dy) / (2.0 * p.gaussian_sigma_m * p.gaussian_sigma_m));
      num += k * std::min<int>(grid.at(row, col), 254) / 254.0;
      den += k;
    }
  if (den > 0.0) r -= num / den;
  return r;
}

Outcome criterion_reward() {
  RewardParams p;
  OccupancyGrid grid(40, 40, 0.05, {0.0, 0.0});
  for (int r = 18; r <= 22; ++r)
    for (int c = 24; c <= 28; ++c) grid.at(r, c) = kCostObstacle;
  OccupancyGrid inflated = inflate(grid, InflationParams{0.2, 0.8, 2.0});

  struct Case {
    WaypointGeometry before, after;
    bool collision;
    RobotState robot;
    const OccupancyGrid* g;
  };
  const RobotState far_away{0.4, 0.4, 0.3};     // window holds only free cells
  const RobotState near_block{1.05, 1.0, 0.0};  // window overlaps the inflation
  const RobotState at_edge{0.07, 0.11, 1.1};    // window spills off the grid
  std::vector<Case> cases = {
      {{2.0, 0.8}, {1.7, 0.5}, false, far_away, &inflated},     // both improve
      {{1.2, 0.1}, {1.5, 0.05}, false, far_away, &inflated},    // distance regresses
      {{1.2, 0.2}, {1.0, 0.9}, false, far_away, &inflated},     // bearing regresses
      {{1.0, 0.3}, {1.4, -0.8}, false, far_away, &inflated},    // both regress
      {{1.0, 0.4}, {1.0, 0.4}, false, far_away, &inflated},     // no motion
      {{0.9, 0.2}, {0.6, 0.1}, true, far_away, &inflated},      // collision
      {{0.5, 0.3}, {0.1, 0.05}, false, far_away, &inflated},    // goal bonus
      {{0.4, 0.1}, {0.12, 0.3}, true, far_away, &inflated},     // collision beats goal
      {{1.5, 0.6}, {1.2, 0.4}, false, near_block, &inflated},   // gaussian term active
      {{1.5, -0.6}, {1.7, -0.2}, false, near_block, &inflated}, // gaussian + regress
      {{1.1, 0.2}, {0.8, 0.6}, false, at_edge, &inflated},      // window clipped
      {{1.0, -0.9}, {0.0, 0.0}, false, near_block, &inflated},  // arrival at goal
  };
  double max_err = 0.0;
  int goals = 0, collisions = 0;
  for (const auto& c : cases) {
    const WaypointGeometry b = c.before, a = c.after;
    const RewardResult got = reward(b, a, c.collision, *c.g, c.robot, p);
    const double want = reward_by_substitution(b, a, c.collision, *c.g, c.robot, p);
    max_err = std::max(max_err, std::abs(got.value - want));
    if (got.goal) ++goals;
    if (got.collision) ++collisions;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "12 cases, max |err| %.3g, %d goal / %d collision",
                max_err, goals, collisions);
  return {max_err <= 1e-9 && goals == 2 && collisions == 2, buf};
}

// ---- criterion 2: finite-difference gradients ----

Outcome criterion_gradcheck() {
  const GradCheckReport rep = run_gradcheck(1234, false);
  int failed = 0;
  for (const auto& c : rep.cases)
    if (!c.pass) ++failed;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%zu cases, worst rel err %.3g, %d failed",
                rep.cases.size(), rep.worst, failed);
  return {rep.all_pass, buf};
}

// ---- criterion 3: density normalization ----

Outcome criterion_density() {
  Rng rng(303);
  const ActionBounds bounds;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::array<double, 2> mu = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const std::array<double, 2> ls = {rng.uniform(-2.0, 0.7), rng.uniform(-2.0, 0.7)};
    const double integral = oracles::squashed_density_integral(mu, ls, bounds, 500);
    worst = std::max(worst, std::abs(integral - 1.0));
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "20 draws, worst |integral - 1| = %.3g", worst);
  return {worst <= 1e-2, buf};
}

// ---- criterion 4: target machinery ----

Outcome criterion_targets() {
  NetworkConfig nc;
  nc.obs_channels = 3;
  nc.obs_rows = 8;
  nc.obs_cols = 8;
  nc.conv_layers = 2;
  nc.conv_filters = 4;
  nc.latent_dim = 8;
  nc.mlp_hidden_layers = 1;
  nc.mlp_hidden_dim = 16;
  SacConfig cfg;
  cfg.batch_size = 4;
  cfg.shift_radius_px = 1;
  const ActionMapper mapper{ActionBounds{}};

  Rng root(4040);
  SacNets<double> nets;
  Rng init = root.stream(1);
  nets.init(nc, init, 0.1);

  Batch<double> batch;
  batch.b = 4;
  batch.c = 3;
  batch.h = 8;
  batch.w = 8;
  Rng data = root.stream(2);
  const size_t per = 3 * 8 * 8;
  batch.obs.resize(4 * per);
  batch.next_obs.resize(4 * per);
  for (auto& v : batch.obs) v = data.uniform_int(0, 254) / 254.0;
  for (auto& v : batch.next_obs) v = data.uniform_int(0, 254) / 254.0;
  batch.action = {0.2, -0.3, 0.5, 0.1, -0.7, 0.4, 0.0, 0.9};
  batch.reward = {0.5, -1.25, 0.0625, 2.0};
  batch.not_done = {1.0, 0.0, 1.0, 1.0};

  Rng draws = root.stream(3);
  std::vector<std::vector<Shift>> nxt(2);
  for (int k = 0; k < 2; ++k) nxt[k] = draw_shifts(draws, 4, 1);
  std::vector<std::vector<double>> noise(2);
  for (int k = 0; k < 2; ++k) noise[k] = draw_noise<double>(draws, 4, 2);

  const std::vector<double> y = compute_drq_targets(nets, batch, cfg, mapper, nxt, noise);

  bool bitwise = true;
  {
    NoGradGuard ng;
    const double alpha = std::exp(nets.log_alpha.values()[0]);
    std::vector<std::vector<double>> yk(2, std::vector<double>(4));
    for (int k = 0; k < 2; ++k) {
      Tensor<double> obs = shifted_obs_tensor(batch, batch.next_obs, nxt[k]);
      Tensor<double> lat = nets.encoder.forward(obs);
      PolicyHead<double> head = policy_head(nets, lat, cfg);
      Tensor<double> nt = Tensor<double>::from_data({4, 2}, noise[k]);
      PolicySample<double> ps = sample_policy(head.mu, head.log_sigma, nt, mapper, 1e-6);
      Tensor<double> q1 = q_forward(nets, nets.q1_target, lat, ps.a_norm);
      Tensor<double> q2 = q_forward(nets, nets.q2_target, lat, ps.a_norm);
      for (int i = 0; i < 4; ++i) {
        const double v =
            std::min(q1.values()[i], q2.values()[i]) - alpha * ps.log_pi.values()[i];
        yk[k][i] = batch.reward[i] + cfg.gamma * batch.not_done[i] * v;
      }
    }
    for (int i = 0; i < 4; ++i)
      if (y[i] != (yk[0][i] + yk[1][i]) / 2.0) bitwise = false;
  }

  const bool terminal_exact = y[1] == batch.reward[1];

  // EMA closed form at tau = 0.01.
  bool ema_ok = true;
  {
    ParamSet<double> tgt = nets.q_target_params();
    std::vector<std::vector<double>> before;
    for (const auto& p : tgt) before.push_back(p.tensor.values());
    ParamSet<double> live = nets.q_params();
    ema_update(tgt, live, 0.01);
    for (size_t i = 0; i < tgt.size() && ema_ok; ++i) {
      const auto& b = before[i];
      const auto& s = live[i].tensor.values();
      const auto& d = tgt[i].tensor.values();
      for (size_t j = 0; j < d.size(); ++j)
        if (d[j] != (1.0 - 0.01) * b[j] + 0.01 * s[j]) {
          ema_ok = false;
          break;
        }
    }
  }
  std::string detail = std::string("drq mean ") + (bitwise ? "bitwise" : "MISMATCH") +
                       ", terminal y==r " + (terminal_exact ? "exact" : "MISMATCH") +
                       ", ema closed form " + (ema_ok ? "exact" : "MISMATCH");
  return {bitwise && terminal_exact && ema_ok, detail};
}

// ---- criterion 5: planner oracles ----

Outcome criterion_planners() {
  Rng rng(5050);
  int cost_checked = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    OccupancyGrid g(15, 15, 0.1, {0.0, 0.0});
    for (int r = 0; r < 15; ++r)
      for (int c = 0; c < 15; ++c) {
        const double u = rng.uniform();
        if (u < 0.15)
          g.at(r, c) = kCostObstacle;
        else if (u < 0.4)
          g.at(r, c) = static_cast<uint8_t>(rng.uniform_int(1, 252));
      }
    g.at(0, 0) = kCostFree;
    g.at(14, 14) = kCostFree;
    const auto fast = plan_cost(g, g.cell_center(0, 0), g.cell_center(14, 14), 3.0);
    const auto slow =
        oracles::relaxation_plan_cost(g, g.cell_center(0, 0), g.cell_center(14, 14), 3.0);
    if (fast.has_value() != slow.has_value())
      return {false, "reachability disagreement on grid " + std::to_string(trial)};
    if (fast) {
      worst = std::max(worst, std::abs(*fast - *slow));
      ++cost_checked;
    }
  }

  DwaConfig cfg;
  int dwa_agree = 0;
  Rng scene_rng(5151);
  for (int scene = 0; scene < 10; ++scene) {
    OccupancyGrid g(60, 60, 0.05, {0.0, 0.0});
    const int n_obs = static_cast<int>(scene_rng.uniform_int(0, 4));
    for (int i = 0; i < n_obs; ++i)
      g.at(scene_rng.uniform_int(10, 49), scene_rng.uniform_int(10, 49)) = kCostObstacle;
    const RobotState robot{scene_rng.uniform(0.8, 2.2), scene_rng.uniform(0.8, 2.2),
                           scene_rng.uniform(-M_PI, M_PI)};
    const Action current{scene_rng.uniform(0.0, 0.9), scene_rng.uniform(-0.8, 0.8)};
    const Point2 wp{scene_rng.uniform(0.4, 2.6), scene_rng.uniform(0.4, 2.6)};
    const Action got = dwa_plan(robot, current, wp, g, cfg);
    const Action want = oracles::exhaustive_dwa(robot, current, wp, g, cfg);
    if (got.v == want.v && got.omega == want.omega) ++dwa_agree;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "path cost: %d grids, worst |err| %.3g; dwa: %d/10 scenes agree",
                cost_checked, worst, dwa_agree);
  return {cost_checked >= 5 && worst <= 1e-9 && dwa_agree == 10, buf};
}

// ---- criterion 6: polar rendering ----

Outcome criterion_polar() {
  Rng rng(606);
  const PolarDims dims{64, 64};
  const double r_max = 8.0;
  int marker_ok = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    OccupancyGrid g(160, 160, 0.05, {0.0, 0.0});
    for (int i = 0; i < 40; ++i)
      g.at(rng.uniform_int(0, 159), rng.uniform_int(0, 159)) = kCostObstacle;
    const RobotState robot{rng.uniform(1.0, 7.0), rng.uniform(1.0, 7.0),
                           rng.uniform(-M_PI, M_PI)};
    // Mix of in-range and beyond-range waypoints to exercise the clamp.
    const double range = t % 5 == 4 ? rng.uniform(8.5, 11.0) : rng.uniform(0.3, 7.5);
    const double world_ang = rng.uniform(-M_PI, M_PI);
    const Point2 wp{robot.x + range * std::cos(world_ang),
                    robot.y + range * std::sin(world_ang)};
    const Image img = render_polar(g, robot, wp, dims, r_max);

    // Analytic bin arithmetic, done from scratch.
    const double bearing = wrap_angle(world_ang - robot.yaw);
    int row = static_cast<int>(std::floor((bearing + M_PI) / (2.0 * M_PI) * 64));
    row = std::min(63, std::max(0, row));
    const int col = std::min(63, static_cast<int>(std::floor(range / r_max * 64)));

    std::set<std::pair<int, int>> expect;
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = (row + dr + 64) % 64;  // angle wraps
        const int cc = std::min(63, std::max(0, col + dc));  // distance clamps
        expect.insert({rr, cc});
      }
    bool ok = true;
    for (int r = 0; r < 64 && ok; ++r)
      for (int c = 0; c < 64 && ok; ++c) {
        const bool marked = expect.count({r, c}) > 0;
        if ((img.at(1, r, c) == 1.0f) != marked) ok = false;
        if ((img.at(2, r, c) == 1.0f) != marked) ok = false;
        if (marked && img.at(0, r, c) != 1.0f) ok = false;
      }
    if (ok) ++marker_ok;
  }

  // Rotation by whole bins rolls the image along the angle axis.
  int roll_ok = 0;
  const int roll_trials = 20;
  for (int t = 0; t < roll_trials; ++t) {
    OccupancyGrid g(160, 160, 0.05, {0.0, 0.0});
    for (int i = 0; i < 60; ++i)
      g.at(rng.uniform_int(0, 159), rng.uniform_int(0, 159)) = kCostObstacle;
    const RobotState robot{rng.uniform(1.5, 6.5), rng.uniform(1.5, 6.5),
                           rng.uniform(-M_PI, M_PI)};
    const Point2 wp{rng.uniform(1.0, 7.0), rng.uniform(1.0, 7.0)};
    const int k = static_cast<int>(rng.uniform_int(1, 63));
    const double delta = 2.0 * M_PI / 64 * k;
    const Image a = render_polar(g, robot, wp, dims, r_max);
    const Image b = render_polar(g, {robot.x, robot.y, robot.yaw + delta}, wp, dims, r_max);
    int mismatches = 0;
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 64; ++r)
        for (int col = 0; col < 64; ++col)
          if (b.at(c, r, col) != a.at(c, (r + k) % 64, col)) ++mismatches;
    // One-bin slack: bin-edge roundoff may displace a handful of samples.
    if (mismatches <= 12) ++roll_ok;
  }
  char buf[128];
  std::snprintf(buf, sizeof(buf), "marker %d/%d poses, rotation roll %d/%d",
                marker_ok, trials, roll_ok, roll_trials);
  return {marker_ok == trials && roll_ok == roll_trials, buf};
}

// ---- criteria 7/8: desk-scale learning ----

struct SeedResult {
  double success_rate = 0.0;
  double baseline_rate = 0.0;
  double wall_s = 0.0;
  std::string manifest;
};

SeedResult train_or_load(const std::string& mode, uint64_t seed) {
  namespace fs = std::filesystem;
  const std::string tag = "train_" + mode + "_seed" + std::to_string(seed);
  const std::string dir = g_workdir + "/" + tag;
  const std::string cache = dir + "/result.json";
  if (fs::exists(cache)) {
    std::ifstream in(cache);
    ordered_json j = ordered_json::parse(in);
    return {j.at("success_rate").get<double>(), j.at("baseline_rate").get<double>(),
            j.at("wall_s").get<double>(), j.at("manifest").get<std::string>()};
  }
  TrainConfig cfg = desk_train_config();
  cfg.seed = seed;
  if (mode == "cartesian") {
    cfg.obs.mode = ObsMode::kCartesianRotation;
    cfg.net = resolve_network(cfg.net, cfg.obs, cfg.sac.frame_stack);
  }
  const double t0 = now_s();
  std::fprintf(stderr, "  [training %s seed %llu: %d episodes]\n", mode.c_str(),
               static_cast<unsigned long long>(seed), cfg.episodes);
  TrainResult res = train(cfg, dir);
  const double wall = now_s() - t0;

  SacAgent baseline(cfg.net, cfg.sac, cfg.env.bounds, seed + 9000);
  const EvalStats base = evaluate_agent(baseline, cfg, cfg.eval_episodes);

  SeedResult out{res.final_eval.success_rate, base.success_rate, wall,
                 res.manifest_path};
  ordered_json j = {{"success_rate", out.success_rate},
                    {"baseline_rate", out.baseline_rate},
                    {"wall_s", out.wall_s},
                    {"manifest", out.manifest}};
  std::ofstream(cache) << j.dump(2) << "\n";
  return out;
}

Outcome criterion_learning(std::vector<SeedResult>& polar_out) {
  const std::vector<uint64_t> seeds = {1, 2, 3};
  double mean = 0.0, base_mean = 0.0, worst_wall = 0.0;
  std::string per;
  for (uint64_t s : seeds) {
    const SeedResult r = train_or_load("polar", s);
    polar_out.push_back(r);
    mean += r.success_rate;
    base_mean += r.baseline_rate;
    worst_wall = std::max(worst_wall, r.wall_s);
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %.0f%%", 100.0 * r.success_rate);
    per += buf;
  }
  mean /= seeds.size();
  base_mean /= seeds.size();
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "trained%s -> mean %.1f%% (gate >= 70%%), untrained %.1f%% (gate <= "
                "25%%), slowest seed %.0f s",
                per.c_str(), 100.0 * mean, 100.0 * base_mean, worst_wall);
  return {mean >= 0.70 && base_mean <= 0.25, buf};
}

Outcome criterion_representation(const std::vector<SeedResult>& polar) {
  const std::vector<uint64_t> seeds = {1, 2, 3};
  double cart = 0.0;
  std::string per;
  for (uint64_t s : seeds) {
    const SeedResult r = train_or_load("cartesian", s);
    cart += r.success_rate;
    char buf[64];
    std::snprintf(buf, sizeof(buf), " %.0f%%", 100.0 * r.success_rate);
    per += buf;
  }
  cart /= seeds.size();
  double pol = 0.0;
  for (const auto& r : polar) pol += r.success_rate;
  pol /= polar.size();
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "polar mean %.1f%% vs cartesian-rotation%s -> mean %.1f%%",
                100.0 * pol, per.c_str(), 100.0 * cart);
  return {pol >= cart, buf};
}

// ---- criterion 9: benchmark behavior ----

Outcome criterion_benchmark(const std::string& sac_manifest) {
  BenchmarkConfig cfg;
  cfg.checkpoint = sac_manifest;
  const std::string dir = g_workdir + "/benchmark";
  const BenchmarkReport rep = run_benchmark(cfg, dir);

  auto cell = [&](const std::string& planner,
                  const std::string& scenario) -> const CellStats* {
    for (const auto& c : rep.cells)
      if (c.planner == planner && c.scenario == scenario) return &c;
    return nullptr;
  };
  const CellStats* sp_c1 = cell("sp", "c1");
  const CellStats* dwa_c3 = cell("dwa", "c3");
  const CellStats* sac_c3 = cell("sac", "c3");
  if (!sp_c1 || !dwa_c3 || !sac_c3 || sac_c3->unavailable)
    return {false, "missing benchmark cells"};

  const bool sp_clean = sp_c1->collision_rate == 0.0 && sp_c1->runs == 10;
  const double dwa_fail = dwa_c3->collision_rate + dwa_c3->abort_rate;
  const bool dwa_struggles = dwa_fail > 0.0;
  const bool sac_better = sac_c3->collision_rate < dwa_c3->collision_rate;

  // Travel orderings are reported, not gated.
  const CellStats* sac_c1 = cell("sac", "c1");
  const CellStats* dwa_c1 = cell("dwa", "c1");
  char info[256];
  std::snprintf(info, sizeof(info),
                "  [info] c1 mean travel dist: sac %.2f m, dwa %.2f m, sp %.2f m\n",
                sac_c1 ? sac_c1->mean_travel_dist_m : 0.0,
                dwa_c1 ? dwa_c1->mean_travel_dist_m : 0.0, sp_c1->mean_travel_dist_m);
  std::fputs(info, stdout);

  char buf[224];
  std::snprintf(buf, sizeof(buf),
                "sp@c1 collisions %.0f%%; dwa@c3 collision %.0f%% + abort %.0f%%; "
                "sac@c3 collision %.0f%%",
                100.0 * sp_c1->collision_rate, 100.0 * dwa_c3->collision_rate,
                100.0 * dwa_c3->abort_rate, 100.0 * sac_c3->collision_rate);
  return {sp_clean && dwa_struggles && sac_better, buf};
}

// ---- criterion 10: determinism ----

Outcome criterion_determinism() {
  namespace fs = std::filesystem;
  TrainConfig cfg = desk_train_config();
  cfg.episodes = 20;
  cfg.eval_episodes = 20;
  cfg.seed = 7;

  const std::string d1 = g_workdir + "/determinism_a";
  const std::string d2 = g_workdir + "/determinism_b";
  fs::remove_all(d1);
  fs::remove_all(d2);
  train(cfg, d1);
  train(cfg, d2);

  const bool log_same = slurp(d1 + "/train_log.csv") == slurp(d2 + "/train_log.csv");
  const bool manifest_same =
      slurp(d1 + "/checkpoint_final.json") == slurp(d2 + "/checkpoint_final.json");
  const bool blob_same =
      slurp(d1 + "/checkpoint_final.bin") == slurp(d2 + "/checkpoint_final.bin");

  const EvalStats e1 = evaluate_checkpoint(d1 + "/checkpoint_final.json", 20);
  const EvalStats e2 = evaluate_checkpoint(d1 + "/checkpoint_final.json", 20);
  const bool eval_same = e1.successes == e2.successes && e1.collisions == e2.collisions &&
                         e1.timeouts == e2.timeouts;

  BenchmarkConfig bench;
  bench.planners = {"sac"};
  bench.scenarios = {"c1"};
  bench.seeds = {0};
  bench.checkpoint = d1 + "/checkpoint_final.json";
  run_benchmark(bench, d1 + "/bench");
  run_benchmark(bench, d2 + "/bench");
  const bool report_same =
      slurp(d1 + "/bench/report.json") == slurp(d2 + "/bench/report.json") &&
      slurp(d1 + "/bench/traj_sac_c1_seed0.csv") ==
          slurp(d2 + "/bench/traj_sac_c1_seed0.csv");

  std::string detail = std::string("train log ") + (log_same ? "ok" : "DIFFERS") +
                       ", checkpoint " +
                       (manifest_same && blob_same ? "ok" : "DIFFERS") + ", eval " +
                       (eval_same ? "ok" : "DIFFERS") + ", benchmark " +
                       (report_same ? "ok" : "DIFFERS");
  return {log_same && manifest_same && blob_same && eval_same && report_same, detail};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--workdir") == 0 && i + 1 < argc) {
      g_workdir = argv[++i];
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      std::string tok;
      while (std::getline(ss, tok, ',')) only.insert(std::stoi(tok));
    } else {
      std::fprintf(stderr, "usage: %s [--workdir DIR] [--only 1,2,...]\n", argv[0]);
      return 1;
    }
  }
  std::filesystem::create_directories(g_workdir);

  struct Entry {
    int id;
    const char* name;
    Outcome outcome;
    double wall_s;
  };
  std::vector<Entry> entries;
  std::vector<SeedResult> polar_seeds;
  std::string sac_manifest;

  auto run = [&](int id, const char* name, auto&& fn) {
    if (!only.empty() && !only.count(id)) return;
    const double t0 = now_s();
    Outcome out = fn();
    entries.push_back({id, name, std::move(out), now_s() - t0});
    const Entry& e = entries.back();
    std::printf("[%s] %2d. %s: %s (%.1f s)\n", e.outcome.pass ? "PASS" : "FAIL", e.id,
                e.name, e.outcome.detail.c_str(), e.wall_s);
    std::fflush(stdout);
  };

  run(1, "reward equation matches direct substitution", criterion_reward);
  run(2, "autodiff gradients match finite differences", criterion_gradcheck);
  run(3, "squashed policy density integrates to one", criterion_density);
  run(4, "targets: drq mean, terminal reward, ema sync", criterion_targets);
  run(5, "global and local planners match oracles", criterion_planners);
  run(6, "polar rendering bins and equivariance", criterion_polar);
  run(7, "desk-scale training beats the untrained baseline",
      [&] { return criterion_learning(polar_seeds); });
  run(8, "polar observations outperform cartesian-rotation", [&] {
    if (polar_seeds.empty())
      for (uint64_t s : {uint64_t(1), uint64_t(2), uint64_t(3)})
        polar_seeds.push_back(train_or_load("polar", s));
    return criterion_representation(polar_seeds);
  });
  run(9, "benchmark: sp clean on c1, sac beats dwa on c3", [&] {
    if (sac_manifest.empty()) sac_manifest = train_or_load("polar", 1).manifest;
    return criterion_benchmark(sac_manifest);
  });
  run(10, "end-to-end determinism", criterion_determinism);

  bool all = true;
  for (const auto& e : entries) all = all && e.outcome.pass;
  std::printf("%zu criteria run, %s\n", entries.size(), all ? "all passed" : "FAILURES");
  return all ? 0 : 2;
}
