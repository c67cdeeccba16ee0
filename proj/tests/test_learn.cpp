#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "navrl/augment.hpp"
#include "navrl/checkpoint.hpp"
#include "navrl/nn.hpp"
#include "navrl/replay_buffer.hpp"
#include "navrl/rng.hpp"
#include "navrl/sac.hpp"
#include "navrl/tensor.hpp"
#include "oracles.hpp"

using namespace navrl;

namespace {

NetworkConfig tiny_net() {
  NetworkConfig nc;
  nc.obs_channels = 3;
  nc.obs_rows = 8;
  nc.obs_cols = 8;
  nc.conv_layers = 2;
  nc.conv_filters = 4;
  nc.latent_dim = 8;
  nc.mlp_hidden_layers = 1;
  nc.mlp_hidden_dim = 16;
  return nc;
}

SacConfig tiny_cfg() {
  SacConfig cfg;
  cfg.batch_size = 4;
  cfg.capacity = 64;
  cfg.shift_radius_px = 1;
  return cfg;
}

Image random_obs(Rng& rng, const NetworkConfig& nc) {
  Image img(nc.obs_channels, nc.obs_rows, nc.obs_cols);
  for (auto& v : img.data)
    v = static_cast<float>(rng.uniform_int(0, 254)) / 254.0f;
  return img;
}

template <typename T>
Batch<T> random_batch(Rng& rng, const NetworkConfig& nc, int b) {
  Batch<T> batch;
  batch.b = b;
  batch.c = nc.obs_channels;
  batch.h = nc.obs_rows;
  batch.w = nc.obs_cols;
  const size_t per = static_cast<size_t>(batch.c) * batch.h * batch.w;
  batch.obs.resize(b * per);
  batch.next_obs.resize(b * per);
  for (auto& v : batch.obs) v = static_cast<T>(rng.uniform_int(0, 254)) / T(254);
  for (auto& v : batch.next_obs) v = static_cast<T>(rng.uniform_int(0, 254)) / T(254);
  batch.action.resize(static_cast<size_t>(b) * 2);
  for (auto& v : batch.action) v = static_cast<T>(rng.uniform(-0.95, 0.95));
  batch.reward.resize(b);
  batch.not_done.assign(b, T(1));
  for (auto& v : batch.reward) v = static_cast<T>(rng.uniform(-1.0, 1.0));
  batch.not_done[1] = T(0);
  return batch;
}

std::vector<float> snapshot(const ParamSet<float>& ps) {
  std::vector<float> out;
  for (const auto& p : ps)
    out.insert(out.end(), p.tensor.values().begin(), p.tensor.values().end());
  return out;
}

}  // namespace

TEST_CASE("adam first step follows the bias-corrected closed form") {
  AdamHyper hyper;
  hyper.lr = 0.01;
  std::vector<double> p = {1.0, -2.0, 0.5};
  const std::vector<double> g = {0.3, -0.2, 0.0};
  AdamParamState<double> state;
  state.m.assign(3, 0.0);
  state.v.assign(3, 0.0);
  adam_step(p, g, state, hyper, 1);
  // With zero state and t = 1, m_hat = g and v_hat = g^2, so the update is
  // lr * g / (|g| + eps).
  CHECK(p[0] == doctest::Approx(1.0 - 0.01 * 0.3 / (0.3 + 1e-8)).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(-2.0 + 0.01 * 0.2 / (0.2 + 1e-8)).epsilon(1e-12));
  CHECK(p[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("orthogonal init produces orthonormal rows scaled by the gain") {
  Rng rng(3);
  const int rows = 8, cols = 20;
  std::vector<double> w(rows * cols);
  orthogonal_fill(w, rows, cols, rng, 2.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < rows; ++j) {
      double dot = 0.0;
      for (int k = 0; k < cols; ++k) dot += w[i * cols + k] * w[j * cols + k];
      CHECK(std::abs(dot - (i == j ? 4.0 : 0.0)) < 1e-9);
    }
}

TEST_CASE("checkpoints round-trip bit exactly") {
  Rng rng(9);
  ParamSet<float> params;
  std::vector<float> a(12), b(5);
  for (auto& v : a) v = static_cast<float>(rng.normal());
  for (auto& v : b) v = static_cast<float>(rng.normal());
  params.push_back({"enc.w", Tensor<float>::from_data({3, 4}, a, true)});
  params.push_back({"enc.b", Tensor<float>::from_data({5}, b, true)});
  nlohmann::ordered_json echo = {{"purpose", "round-trip"}, {"value", 7}};

  const std::string dir = "ckpt_roundtrip_tmp";
  std::filesystem::create_directories(dir);
  save_checkpoint(params, dir + "/m.json", dir + "/m.bin", echo);
  LoadedCheckpoint loaded = load_checkpoint(dir + "/m.json");
  REQUIRE(loaded.params.size() == 2);
  CHECK(loaded.config == echo);

  ParamSet<float> restored;
  restored.push_back({"enc.w", Tensor<float>::zeros({3, 4}, true)});
  restored.push_back({"enc.b", Tensor<float>::zeros({5}, true)});
  restore_params(restored, loaded.params);
  CHECK(restored[0].tensor.values() == a);
  CHECK(restored[1].tensor.values() == b);

  ParamSet<float> wrong;
  wrong.push_back({"enc.w", Tensor<float>::zeros({4, 3}, true)});
  wrong.push_back({"enc.b", Tensor<float>::zeros({5}, true)});
  CHECK_THROWS(restore_params(wrong, loaded.params));
  std::filesystem::remove_all(dir);
}

TEST_CASE("replay buffer is a FIFO ring with exact uint8 round-trips") {
  ReplayBuffer buf(4, 1, 2, 2);
  CHECK(buf.obs_size() == 4);
  auto make = [](int k) {
    Image img(1, 2, 2);
    for (int i = 0; i < 4; ++i) img.data[i] = static_cast<float>(k) / 254.0f;
    return img;
  };
  for (int k = 0; k < 6; ++k)
    buf.push(make(k), {0.1f * k, -0.1f * k}, static_cast<float>(k), make(k + 100),
             k % 2 == 1);
  CHECK(buf.size() == 4);
  // Slots hold pushes {4, 5, 2, 3} after wrapping twice.
  const std::vector<int> want = {4, 5, 2, 3};
  for (int slot = 0; slot < 4; ++slot) {
    float obs[4], nxt[4];
    buf.decode_obs(slot, false, obs);
    buf.decode_obs(slot, true, nxt);
    for (int i = 0; i < 4; ++i) {
      CHECK(obs[i] == static_cast<float>(want[slot]) / 254.0f);
      CHECK(nxt[i] == static_cast<float>(want[slot] + 100) / 254.0f);
    }
    CHECK(buf.reward(slot) == static_cast<float>(want[slot]));
    CHECK(buf.terminal(slot) == (want[slot] % 2 == 1));
    CHECK(buf.action(slot)[0] == 0.1f * want[slot]);
  }

  Image bad(1, 3, 2);
  CHECK_THROWS_AS(buf.push(bad, {0, 0}, 0, make(0), false), std::invalid_argument);
  Rng rng(1);
  CHECK_THROWS_AS(ReplayBuffer(4, 1, 2, 2).sample_indices(rng, 2), std::logic_error);
}

TEST_CASE("random shift replicates edges and moves content") {
  // 1x3x3 image with distinct values 0..8 laid out row-major.
  std::vector<float> in(9);
  for (int i = 0; i < 9; ++i) in[i] = static_cast<float>(i);
  std::vector<float> out(9);

  SUBCASE("shift +1 column") {
    shift_chw(in.data(), 1, 3, 3, 1, 0, out.data());
    // out(r, c) = in(r, clamp(c - 1)): left column duplicated.
    const std::vector<float> want = {0, 0, 1, 3, 3, 4, 6, 6, 7};
    CHECK(out == want);
  }
  SUBCASE("shift -1 row") {
    shift_chw(in.data(), 1, 3, 3, 0, -1, out.data());
    const std::vector<float> want = {3, 4, 5, 6, 7, 8, 6, 7, 8};
    CHECK(out == want);
  }
  SUBCASE("zero radius never shifts") {
    Rng rng(4);
    for (int i = 0; i < 5; ++i) {
      auto s = draw_shift(rng, 0);
      CHECK(s.first == 0);
      CHECK(s.second == 0);
    }
  }
  SUBCASE("draws stay within the radius") {
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      auto s = draw_shift(rng, 4);
      CHECK(std::abs(s.first) <= 4);
      CHECK(std::abs(s.second) <= 4);
    }
  }
}

TEST_CASE("frame stacking repeats the oldest frame for short histories") {
  Image a(1, 2, 2), b(1, 2, 2);
  a.data = {1, 1, 1, 1};
  b.data = {2, 2, 2, 2};
  Image stacked = stack_frames({a, b}, 3);
  CHECK(stacked.channels == 3);
  CHECK(stacked.data == std::vector<float>{1, 1, 1, 1, 1, 1, 1, 1, 2, 2, 2, 2});
  CHECK_THROWS_AS(stack_frames({}, 2), std::invalid_argument);
}

TEST_CASE("squashed policy density integrates to one") {
  ActionBounds bounds;
  CHECK(oracles::squashed_density_integral({0.3, -0.5}, {-0.5, 0.2}, bounds, 400) ==
        doctest::Approx(1.0).epsilon(5e-3));
  CHECK(oracles::squashed_density_integral({-1.2, 0.8}, {0.0, -1.0}, bounds, 400) ==
        doctest::Approx(1.0).epsilon(5e-3));
}

TEST_CASE("sample_policy log density matches the closed-form evaluation") {
  ActionBounds bounds;
  ActionMapper mapper(bounds);
  Rng rng(21);
  const int b = 3;
  std::vector<double> mu_v(b * 2), ls_v(b * 2), noise_v(b * 2);
  for (auto& v : mu_v) v = rng.uniform(-1.0, 1.0);
  for (auto& v : ls_v) v = rng.uniform(-1.5, 0.5);
  for (auto& v : noise_v) v = rng.normal();
  auto mu = Tensor<double>::from_data({b, 2}, mu_v);
  auto ls = Tensor<double>::from_data({b, 2}, ls_v);
  auto noise = Tensor<double>::from_data({b, 2}, noise_v);
  PolicySample<double> s = sample_policy(mu, ls, noise, mapper, 1e-6);
  for (int i = 0; i < b; ++i) {
    const Action a = mapper.to_env(s.a_norm.values()[i * 2], s.a_norm.values()[i * 2 + 1]);
    const double direct = squashed_log_prob({mu_v[i * 2], mu_v[i * 2 + 1]},
                                            {ls_v[i * 2], ls_v[i * 2 + 1]}, a, mapper);
    CHECK(s.log_pi.values()[i] == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("drq target is the bitwise mean of per-augmentation targets") {
  NetworkConfig nc = tiny_net();
  SacConfig cfg = tiny_cfg();
  ActionMapper mapper((ActionBounds()));
  Rng root(555);
  SacNets<double> nets;
  Rng init = root.stream(1);
  nets.init(nc, init, 0.1);
  Rng data = root.stream(2);
  Batch<double> batch = random_batch<double>(data, nc, 4);

  Rng draws = root.stream(3);
  std::vector<std::vector<Shift>> nxt(cfg.drq_k);
  for (int k = 0; k < cfg.drq_k; ++k) nxt[k] = draw_shifts(draws, batch.b, 1);
  std::vector<std::vector<double>> noise(cfg.drq_k);
  for (int k = 0; k < cfg.drq_k; ++k) noise[k] = draw_noise<double>(draws, batch.b, 2);

  const std::vector<double> y = compute_drq_targets(nets, batch, cfg, mapper, nxt, noise);

  // Reference: each augmentation's target computed on its own, then averaged.
  const double alpha = std::exp(nets.log_alpha.values()[0]);
  std::vector<std::vector<double>> yk(cfg.drq_k, std::vector<double>(batch.b));
  {
    NoGradGuard ng;
    for (int k = 0; k < cfg.drq_k; ++k) {
      Tensor<double> obs = shifted_obs_tensor(batch, batch.next_obs, nxt[k]);
      Tensor<double> lat = nets.encoder.forward(obs);
      PolicyHead<double> head = policy_head(nets, lat, cfg);
      Tensor<double> nt = Tensor<double>::from_data({batch.b, 2}, noise[k]);
      PolicySample<double> ps = sample_policy(head.mu, head.log_sigma, nt, mapper, 1e-6);
      Tensor<double> q1 = q_forward(nets, nets.q1_target, lat, ps.a_norm);
      Tensor<double> q2 = q_forward(nets, nets.q2_target, lat, ps.a_norm);
      for (int i = 0; i < batch.b; ++i) {
        const double v =
            std::min(q1.values()[i], q2.values()[i]) - alpha * ps.log_pi.values()[i];
        yk[k][i] = batch.reward[i] + cfg.gamma * batch.not_done[i] * v;
      }
    }
  }
  for (int i = 0; i < batch.b; ++i) {
    const double mean = (yk[0][i] + yk[1][i]) / 2.0;
    CHECK(y[i] == mean);  // bitwise: same accumulation order, exact halving
  }
  // Terminal rows bootstrap nothing: y collapses to the raw reward.
  CHECK(y[1] == batch.reward[1]);
}

TEST_CASE("ema sync matches the closed form") {
  Rng rng(31);
  ParamSet<float> dst, src;
  std::vector<float> d(6), s(6);
  for (auto& v : d) v = static_cast<float>(rng.normal());
  for (auto& v : s) v = static_cast<float>(rng.normal());
  dst.push_back({"w", Tensor<float>::from_data({6}, d)});
  src.push_back({"w", Tensor<float>::from_data({6}, s)});
  ema_update(dst, src, 0.01f);
  for (int i = 0; i < 6; ++i)
    CHECK(dst[0].tensor.values()[i] == (1.0f - 0.01f) * d[i] + 0.01f * s[i]);
}

TEST_CASE("no-grad mode produces constant, parentless results") {
  auto a = Tensor<double>::from_data({2}, {1.0, 2.0}, true);
  auto b = Tensor<double>::from_data({2}, {3.0, 4.0}, true);
  {
    NoGradGuard ng;
    CHECK(!grad_mode_enabled());
    Tensor<double> c = mul(a, b);
    CHECK(!c.requires_grad());
    CHECK(c.node->parents.empty());
  }
  CHECK(grad_mode_enabled());
  Tensor<double> c = mul(a, b);
  CHECK(c.requires_grad());
  CHECK(c.node->parents.size() == 2);
}

TEST_CASE("each optimizer touches only its own parameters") {
  NetworkConfig nc = tiny_net();
  SacConfig cfg = tiny_cfg();
  SacAgent agent(nc, cfg, ActionBounds{}, 77);
  Rng data(88);
  Batch<float> batch = random_batch<float>(data, nc, cfg.batch_size);

  auto enc0 = snapshot(agent.nets().encoder_params());
  auto act0 = snapshot(agent.nets().actor_params());
  auto q0 = snapshot(agent.nets().q_params());
  auto t0 = snapshot(agent.nets().q_target_params());
  const float alpha0 = agent.alpha();

  agent.critic_update(batch);
  CHECK(snapshot(agent.nets().encoder_params()) != enc0);
  CHECK(snapshot(agent.nets().q_params()) != q0);
  CHECK(snapshot(agent.nets().actor_params()) == act0);
  CHECK(snapshot(agent.nets().q_target_params()) == t0);
  CHECK(agent.alpha() == alpha0);

  auto enc1 = snapshot(agent.nets().encoder_params());
  auto q1s = snapshot(agent.nets().q_params());
  agent.actor_update(batch);
  CHECK(snapshot(agent.nets().encoder_params()) == enc1);  // encoder detached
  CHECK(snapshot(agent.nets().q_params()) == q1s);         // critics not stepped
  CHECK(snapshot(agent.nets().actor_params()) != act0);

  agent.alpha_update(batch);
  CHECK(agent.alpha() != alpha0);
  CHECK(snapshot(agent.nets().encoder_params()) == enc1);

  auto live = snapshot(agent.nets().q_params());
  auto tgt = snapshot(agent.nets().q_target_params());
  agent.target_sync();
  auto synced = snapshot(agent.nets().q_target_params());
  for (size_t i = 0; i < tgt.size(); ++i)
    CHECK(synced[i] == (1.0f - 0.01f) * tgt[i] + 0.01f * live[i]);
}

TEST_CASE("update schedule: critic every step, actor and sync every second") {
  NetworkConfig nc = tiny_net();
  SacConfig cfg = tiny_cfg();
  SacAgent agent(nc, cfg, ActionBounds{}, 5);
  ReplayBuffer buf(cfg.capacity, nc.obs_channels, nc.obs_rows, nc.obs_cols);
  Rng rng(6);
  for (int i = 0; i < 8; ++i) {
    Image obs = random_obs(rng, nc), nxt = random_obs(rng, nc);
    buf.push(obs, {0.1f, -0.2f}, 0.5f, nxt, i == 7);
  }
  auto t0 = snapshot(agent.nets().q_target_params());
  UpdateStats s1 = agent.update(buf);
  CHECK(!s1.actor_stepped);
  CHECK(snapshot(agent.nets().q_target_params()) == t0);
  UpdateStats s2 = agent.update(buf);
  CHECK(s2.actor_stepped);
  CHECK(snapshot(agent.nets().q_target_params()) != t0);
  CHECK(agent.update_count() == 2);
}

TEST_CASE("act stays inside the action bounds and is repeatable when deterministic") {
  NetworkConfig nc = tiny_net();
  SacConfig cfg = tiny_cfg();
  ActionBounds bounds;
  SacAgent agent(nc, cfg, bounds, 11);
  Rng rng(12);
  Image obs = random_obs(rng, nc);
  for (int i = 0; i < 50; ++i) {
    const Action a = agent.act(obs, false);
    CHECK(a.v >= bounds.v_min);
    CHECK(a.v <= bounds.v_max);
    CHECK(std::abs(a.omega) <= bounds.omega_max);
  }
  const Action d1 = agent.act(obs, true);
  const Action d2 = agent.act(obs, true);
  CHECK(d1.v == d2.v);
  CHECK(d1.omega == d2.omega);

  Image wrong(nc.obs_channels, nc.obs_rows + 1, nc.obs_cols);
  CHECK_THROWS_AS(agent.act(wrong, true), std::invalid_argument);
}

TEST_CASE("agents with the same seed act identically, different seeds differ") {
  NetworkConfig nc = tiny_net();
  SacConfig cfg = tiny_cfg();
  SacAgent a(nc, cfg, ActionBounds{}, 42), b(nc, cfg, ActionBounds{}, 42);
  SacAgent c(nc, cfg, ActionBounds{}, 43);
  Rng rng(13);
  Image obs = random_obs(rng, nc);
  const Action aa = a.act(obs, false), bb = b.act(obs, false);
  CHECK(aa.v == bb.v);
  CHECK(aa.omega == bb.omega);
  const Action cc = c.act(obs, true), dd = a.act(obs, true);
  CHECK((cc.v != dd.v || cc.omega != dd.omega));
}
