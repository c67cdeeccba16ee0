#include "navrl/sac.hpp"

#include <cmath>
#include <stdexcept>

namespace navrl {

NetworkConfig paper_network() {
  return NetworkConfig{};
}

NetworkConfig desk_network() {
  NetworkConfig nc;
  nc.obs_channels = 3;
  nc.obs_rows = 40;
  nc.obs_cols = 40;
  nc.conv_layers = 2;
  nc.conv_filters = 16;
  nc.latent_dim = 32;
  nc.mlp_hidden_layers = 2;
  nc.mlp_hidden_dim = 256;
  return nc;
}

double squashed_log_prob(const std::array<double, 2>& mu,
                         const std::array<double, 2>& log_sigma, const Action& a,
                         const ActionMapper& mapper, double squash_eps) {
  std::array<double, 2> norm = mapper.to_norm(a);
  double lp = 0.0;
  for (int j = 0; j < 2; ++j) {
    double t = norm[j];
    double lim = 1.0 - squash_eps;
    if (t > lim) t = lim;
    if (t < -lim) t = -lim;
    double u = std::atanh(t);
    double sigma = std::exp(log_sigma[j]);
    double xi = (u - mu[j]) / sigma;
    lp += -0.5 * xi * xi - log_sigma[j] - 0.5 * std::log(2.0 * M_PI);
    lp += -std::log(1.0 - t * t + squash_eps);
    lp += -std::log(mapper.half[j]);
  }
  return lp;
}

std::vector<Shift> draw_shifts(Rng& rng, int batch, int radius) {
  std::vector<Shift> out(batch);
  for (int i = 0; i < batch; ++i) out[i] = draw_shift(rng, radius);
  return out;
}

SacAgent::SacAgent(const NetworkConfig& net, const SacConfig& cfg,
                   const ActionBounds& bounds, uint64_t seed)
    : net_(net),
      cfg_(cfg),
      mapper_(bounds),
      update_rng_(0),
      policy_rng_(0) {
  Rng root(seed);
  Rng init_rng = root.stream(1);
  update_rng_ = root.stream(2);
  policy_rng_ = root.stream(3);
  nets_.init(net_, init_rng, static_cast<float>(cfg_.init_alpha));
  critic_params_ = nets_.critic_params();
  actor_params_ = nets_.actor_params();
  alpha_params_ = ParamSet<float>{{"log_alpha", nets_.log_alpha}};
  AdamHyper hyper;
  hyper.lr = cfg_.lr;
  critic_opt_ = Adam<float>(hyper);
  actor_opt_ = Adam<float>(hyper);
  alpha_opt_ = Adam<float>(hyper);
  critic_opt_.attach(critic_params_);
  actor_opt_.attach(actor_params_);
  alpha_opt_.attach(alpha_params_);
}

Action SacAgent::act(const Image& obs, bool deterministic) {
  if (obs.channels != net_.obs_channels || obs.rows != net_.obs_rows ||
      obs.cols != net_.obs_cols) {
    throw std::invalid_argument("act: observation shape mismatch");
  }
  std::array<double, 2> mu{}, log_sigma{};
  {
    NoGradGuard ng;
    Tensor<float> t_obs =
        Tensor<float>::from_data({1, obs.channels, obs.rows, obs.cols}, obs.data);
    Tensor<float> lat = nets_.encoder.forward(t_obs);
    PolicyHead<float> head = policy_head(nets_, lat, cfg_);
    const auto& mv = head.mu.values();
    const auto& sv = head.log_sigma.values();
    mu = {mv[0], mv[1]};
    log_sigma = {sv[0], sv[1]};
  }
  std::array<double, 2> t{};
  for (int j = 0; j < 2; ++j) {
    double u = mu[j];
    if (!deterministic) u += std::exp(log_sigma[j]) * policy_rng_.normal();
    t[j] = std::tanh(u);
  }
  return mapper_.to_env(t[0], t[1]);
}

Batch<float> SacAgent::assemble_batch(const ReplayBuffer& buffer,
                                      const std::vector<int64_t>& indices) const {
  Batch<float> batch;
  batch.b = static_cast<int>(indices.size());
  batch.c = buffer.channels();
  batch.h = buffer.rows();
  batch.w = buffer.cols();
  int64_t per = buffer.obs_size();
  batch.obs.resize(batch.b * per);
  batch.next_obs.resize(batch.b * per);
  batch.action.resize(static_cast<size_t>(batch.b) * 2);
  batch.reward.resize(batch.b);
  batch.not_done.resize(batch.b);
  for (int i = 0; i < batch.b; ++i) {
    int64_t idx = indices[i];
    buffer.decode_obs(idx, false, batch.obs.data() + i * per);
    buffer.decode_obs(idx, true, batch.next_obs.data() + i * per);
    batch.action[i * 2 + 0] = buffer.action(idx)[0];
    batch.action[i * 2 + 1] = buffer.action(idx)[1];
    batch.reward[i] = buffer.reward(idx);
    batch.not_done[i] = buffer.terminal(idx) ? 0.0f : 1.0f;
  }
  return batch;
}

float SacAgent::critic_update(const Batch<float>& batch) {
  // Draw order per update: current shifts, then per-k next shifts, then
  // per-k policy noise. Fixed so reruns consume the stream identically.
  std::vector<Shift> cur = draw_shifts(update_rng_, batch.b, cfg_.shift_radius_px);
  std::vector<std::vector<Shift>> nxt(cfg_.drq_k);
  for (int k = 0; k < cfg_.drq_k; ++k)
    nxt[k] = draw_shifts(update_rng_, batch.b, cfg_.shift_radius_px);
  std::vector<std::vector<float>> noise(cfg_.drq_k);
  for (int k = 0; k < cfg_.drq_k; ++k)
    noise[k] = draw_noise<float>(update_rng_, batch.b, net_.action_dim);
  Tensor<float> loss = build_critic_loss(nets_, batch, cfg_, mapper_, cur, nxt, noise);
  loss.backward();
  critic_opt_.step(critic_params_);
  return loss.item();
}

float SacAgent::actor_update(const Batch<float>& batch) {
  std::vector<Shift> shifts = draw_shifts(update_rng_, batch.b, cfg_.shift_radius_px);
  std::vector<float> noise = draw_noise<float>(update_rng_, batch.b, net_.action_dim);
  Tensor<float> loss =
      build_actor_loss(nets_, batch, cfg_, mapper_, shifts, noise, alpha());
  loss.backward();
  actor_opt_.step(actor_params_);
  return loss.item();
}

float SacAgent::alpha_update(const Batch<float>& batch) {
  std::vector<Shift> shifts = draw_shifts(update_rng_, batch.b, cfg_.shift_radius_px);
  std::vector<float> noise = draw_noise<float>(update_rng_, batch.b, net_.action_dim);
  Tensor<float> loss = build_alpha_loss(nets_, batch, cfg_, mapper_, shifts, noise);
  loss.backward();
  alpha_opt_.step(alpha_params_);
  return loss.item();
}

void SacAgent::target_sync() {
  ParamSet<float> targets = nets_.q_target_params();
  ParamSet<float> live = nets_.q_params();
  ema_update(targets, live, static_cast<float>(cfg_.tau));
}

UpdateStats SacAgent::update(ReplayBuffer& buffer) {
  std::vector<int64_t> indices = buffer.sample_indices(update_rng_, cfg_.batch_size);
  Batch<float> batch = assemble_batch(buffer, indices);
  UpdateStats stats;
  stats.critic_loss = critic_update(batch);
  ++updates_;
  if (updates_ % cfg_.actor_update_freq == 0) {
    stats.actor_loss = actor_update(batch);
    stats.alpha_loss = alpha_update(batch);
    stats.actor_stepped = true;
  }
  if (updates_ % cfg_.target_update_freq == 0) target_sync();
  stats.alpha = alpha();
  return stats;
}

void SacAgent::restore(const LoadedCheckpoint& ckpt) {
  ParamSet<float> params = checkpoint_params();
  restore_params(params, ckpt.params);
}

}  // namespace navrl
