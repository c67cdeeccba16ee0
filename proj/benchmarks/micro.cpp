#include <benchmark/benchmark.h>

#include "navrl/config.hpp"
#include "navrl/dwa.hpp"
#include "navrl/global_planner.hpp"
#include "navrl/inflation.hpp"
#include "navrl/observation.hpp"
#include "navrl/replay_buffer.hpp"
#include "navrl/rng.hpp"
#include "navrl/sac.hpp"

using namespace navrl;

namespace {

OccupancyGrid room_grid(int cells) {
  OccupancyGrid g(cells, cells, 0.05, {0.0, 0.0});
  Rng rng(99);
  for (int i = 0; i < cells; ++i) {
    g.at(0, i) = g.at(cells - 1, i) = kCostObstacle;
    g.at(i, 0) = g.at(i, cells - 1) = kCostObstacle;
  }
  for (int i = 0; i < cells / 4; ++i)
    g.at(rng.uniform_int(1, cells - 2), rng.uniform_int(1, cells - 2)) = kCostObstacle;
  return g;
}

void BM_Inflate(benchmark::State& state) {
  const OccupancyGrid g = room_grid(160);
  const InflationParams p{0.2, 0.8, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(inflate(g, p));
}
BENCHMARK(BM_Inflate);

void BM_RenderPolar(benchmark::State& state) {
  const OccupancyGrid g = inflate(room_grid(160), {0.2, 0.8, 2.0});
  const RobotState robot{4.0, 4.0, 0.7};
  const Point2 wp{6.5, 5.5};
  for (auto _ : state)
    benchmark::DoNotOptimize(render_polar(g, robot, wp, {40, 40}, 4.0));
}
BENCHMARK(BM_RenderPolar);

void BM_PlanGlobal(benchmark::State& state) {
  const OccupancyGrid g = inflate(room_grid(160), {0.2, 0.8, 2.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(plan_global(g, {0.5, 0.5}, {7.5, 7.5}, 3.0));
}
BENCHMARK(BM_PlanGlobal);

void BM_DwaPlan(benchmark::State& state) {
  const OccupancyGrid g = inflate(room_grid(160), {0.2, 0.8, 2.0});
  const RobotState robot{4.0, 4.0, 0.3};
  const Action current{0.4, 0.1};
  const Point2 wp{5.5, 4.8};
  const DwaConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(dwa_plan(robot, current, wp, g, cfg));
}
BENCHMARK(BM_DwaPlan);

void BM_EncoderForward(benchmark::State& state) {
  const NetworkConfig nc = desk_network();
  Rng rng(7);
  SacNets<float> nets;
  nets.init(nc, rng, 0.1f);
  const size_t n = static_cast<size_t>(32) * nc.obs_channels * nc.obs_rows * nc.obs_cols;
  std::vector<float> data(n);
  for (auto& v : data) v = rng.uniform_int(0, 254) / 254.0f;
  NoGradGuard ng;
  for (auto _ : state) {
    Tensor<float> obs = Tensor<float>::from_data(
        {32, nc.obs_channels, nc.obs_rows, nc.obs_cols}, data);
    benchmark::DoNotOptimize(nets.encoder.forward(obs));
  }
}
BENCHMARK(BM_EncoderForward);

void BM_AgentUpdate(benchmark::State& state) {
  TrainConfig cfg = desk_train_config();
  SacAgent agent(cfg.net, cfg.sac, cfg.env.bounds, 11);
  ReplayBuffer buffer(512, cfg.net.obs_channels, cfg.net.obs_rows, cfg.net.obs_cols);
  Rng rng(13);
  Image obs(cfg.net.obs_channels, cfg.net.obs_rows, cfg.net.obs_cols);
  for (int i = 0; i < 128; ++i) {
    for (auto& v : obs.data) v = rng.uniform_int(0, 254) / 254.0f;
    Image next = obs;
    for (auto& v : next.data) v = rng.uniform_int(0, 254) / 254.0f;
    buffer.push(obs, {static_cast<float>(rng.uniform(-1.0, 1.0)),
                      static_cast<float>(rng.uniform(-1.0, 1.0))},
                static_cast<float>(rng.uniform(-1.0, 1.0)), next,
                rng.uniform() < 0.05);
  }
  for (auto _ : state) benchmark::DoNotOptimize(agent.update(buffer));
}
BENCHMARK(BM_AgentUpdate);

}  // namespace

BENCHMARK_MAIN();
