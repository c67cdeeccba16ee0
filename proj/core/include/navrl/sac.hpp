#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "navrl/augment.hpp"
#include "navrl/checkpoint.hpp"
#include "navrl/nn.hpp"
#include "navrl/observation.hpp"
#include "navrl/replay_buffer.hpp"
#include "navrl/rng.hpp"
#include "navrl/tensor.hpp"
#include "navrl/types.hpp"

namespace navrl {

// ---- architecture ----

struct NetworkConfig {
  // Stacked channel count: base observation channels times frame stack.
  int obs_channels = 3;
  int obs_rows = 64;
  int obs_cols = 64;
  int conv_layers = 4;
  int conv_filters = 32;
  int kernel_size = 3;
  int latent_dim = 50;
  int mlp_hidden_layers = 4;
  int mlp_hidden_dim = 1024;
  int action_dim = 2;

  // Valid convolutions at stride 1 shrink each spatial dim by kernel-1 per layer.
  int conv_out_rows() const { return obs_rows - conv_layers * (kernel_size - 1); }
  int conv_out_cols() const { return obs_cols - conv_layers * (kernel_size - 1); }
  int flatten_dim() const { return conv_filters * conv_out_rows() * conv_out_cols(); }
};

NetworkConfig paper_network();
NetworkConfig desk_network();

struct SacConfig {
  double gamma = 0.99;
  double lr = 1e-3;
  int batch_size = 128;
  int64_t capacity = 1000000;
  double tau = 0.01;
  int target_update_freq = 2;
  int actor_update_freq = 2;
  int explore_episodes = 10;
  int drq_k = 2;
  int shift_radius_px = 4;
  int frame_stack = 1;
  double target_entropy = -2.0;
  double init_alpha = 0.1;
  double log_sigma_min = -10.0;
  double log_sigma_max = 2.0;
  // Floor inside log(1 - tanh^2 + eps) and the pre-image clamp margin.
  double squash_eps = 1e-6;
};

// Affine map between normalized actions in [-1, 1] (network side) and the
// environment's action box.
struct ActionMapper {
  std::array<double, 2> center{};
  std::array<double, 2> half{};

  ActionMapper() = default;
  explicit ActionMapper(const ActionBounds& b) {
    center[0] = 0.5 * (b.v_min + b.v_max);
    half[0] = 0.5 * (b.v_max - b.v_min);
    center[1] = 0.0;
    half[1] = b.omega_max;
  }
  Action to_env(double t0, double t1) const {
    return Action{center[0] + half[0] * t0, center[1] + half[1] * t1};
  }
  std::array<double, 2> to_norm(const Action& a) const {
    return {(a.v - center[0]) / half[0], (a.omega - center[1]) / half[1]};
  }
  double log_half_sum() const { return std::log(half[0]) + std::log(half[1]); }
};

// Log-density of the squashed policy at an in-bounds environment action:
// Gaussian density of the atanh pre-image, minus the tanh change-of-variables
// term, minus log of the affine half-widths. Actions at the exact bound are
// pulled in by squash_eps before atanh.
double squashed_log_prob(const std::array<double, 2>& mu,
                         const std::array<double, 2>& log_sigma, const Action& a,
                         const ActionMapper& mapper, double squash_eps = 1e-6);

// ---- networks ----

template <typename T>
struct Encoder {
  std::vector<Conv2dLayer<T>> convs;
  LinearLayer<T> fc;
  LayerNormLayer<T> ln;

  void init(const NetworkConfig& nc, Rng& rng) {
    convs.resize(nc.conv_layers);
    int in_ch = nc.obs_channels;
    for (int i = 0; i < nc.conv_layers; ++i) {
      convs[i].init(nc.conv_filters, in_ch, nc.kernel_size, nc.kernel_size, rng);
      in_ch = nc.conv_filters;
    }
    fc.init(nc.latent_dim, nc.flatten_dim(), rng);
    ln.init(nc.latent_dim);
  }

  Tensor<T> forward(const Tensor<T>& obs) const {
    Tensor<T> x = obs;
    for (const auto& c : convs) x = relu(c.forward(x));
    int b = x.shape()[0];
    int flat = static_cast<int>(x.numel() / b);
    x = reshape(x, {b, flat});
    return tanh_op(ln.forward(fc.forward(x)));
  }

  void register_params(ParamSet<T>& ps, const std::string& prefix) {
    for (size_t i = 0; i < convs.size(); ++i)
      convs[i].register_params(ps, prefix + ".conv" + std::to_string(i));
    fc.register_params(ps, prefix + ".fc");
    ln.register_params(ps, prefix + ".ln");
  }
};

template <typename T>
struct Mlp {
  std::vector<LinearLayer<T>> layers;  // hidden layers then the output head

  void init(int in_dim, int hidden_dim, int hidden_layers, int out_dim, Rng& rng) {
    layers.resize(hidden_layers + 1);
    int d = in_dim;
    for (int i = 0; i < hidden_layers; ++i) {
      layers[i].init(hidden_dim, d, rng);
      d = hidden_dim;
    }
    layers.back().init(out_dim, d, rng);
  }

  Tensor<T> forward(const Tensor<T>& x) const {
    Tensor<T> h = x;
    for (size_t i = 0; i + 1 < layers.size(); ++i) h = relu(layers[i].forward(h));
    return layers.back().forward(h);
  }

  void register_params(ParamSet<T>& ps, const std::string& prefix) {
    for (size_t i = 0; i < layers.size(); ++i)
      layers[i].register_params(ps, prefix + ".l" + std::to_string(i));
  }
};

// Actor outputs (mu, log sigma); critics score (latent, normalized action)
// pairs. Targets mirror the critic MLPs and share the live encoder.
template <typename T>
struct SacNets {
  NetworkConfig nc;
  Encoder<T> encoder;
  Mlp<T> actor;
  Mlp<T> q1, q2;
  Mlp<T> q1_target, q2_target;
  Tensor<T> log_alpha;

  void init(const NetworkConfig& net, Rng& root, T init_alpha) {
    nc = net;
    Rng enc_rng = root.stream(1), act_rng = root.stream(2);
    Rng q1_rng = root.stream(3), q2_rng = root.stream(4);
    encoder.init(net, enc_rng);
    actor.init(net.latent_dim, net.mlp_hidden_dim, net.mlp_hidden_layers,
               2 * net.action_dim, act_rng);
    q1.init(net.latent_dim + net.action_dim, net.mlp_hidden_dim, net.mlp_hidden_layers, 1,
            q1_rng);
    q2.init(net.latent_dim + net.action_dim, net.mlp_hidden_dim, net.mlp_hidden_layers, 1,
            q2_rng);
    q1_target = q1;
    q2_target = q2;
    // Deep-copy the target weights so syncs do not write through to the live
    // critics; detach() also drops requires_grad.
    detach_mlp(q1_target);
    detach_mlp(q2_target);
    log_alpha = Tensor<T>::full({1}, std::log(init_alpha));
    log_alpha.node->requires_grad = true;
  }

  static void detach_mlp(Mlp<T>& m) {
    for (auto& l : m.layers) {
      l.w = l.w.detach();
      l.b = l.b.detach();
    }
  }

  ParamSet<T> encoder_params() {
    ParamSet<T> ps;
    encoder.register_params(ps, "encoder");
    return ps;
  }
  ParamSet<T> actor_params() {
    ParamSet<T> ps;
    actor.register_params(ps, "actor");
    return ps;
  }
  // Everything the critic loss trains: encoder plus both critic MLPs.
  ParamSet<T> critic_params() {
    ParamSet<T> ps;
    encoder.register_params(ps, "encoder");
    q1.register_params(ps, "q1");
    q2.register_params(ps, "q2");
    return ps;
  }
  ParamSet<T> q_params() {
    ParamSet<T> ps;
    q1.register_params(ps, "q1");
    q2.register_params(ps, "q2");
    return ps;
  }
  ParamSet<T> q_target_params() {
    ParamSet<T> ps;
    q1_target.register_params(ps, "q1_target");
    q2_target.register_params(ps, "q2_target");
    return ps;
  }
  ParamSet<T> all_params() {
    ParamSet<T> ps;
    encoder.register_params(ps, "encoder");
    actor.register_params(ps, "actor");
    q1.register_params(ps, "q1");
    q2.register_params(ps, "q2");
    q1_target.register_params(ps, "q1_target");
    q2_target.register_params(ps, "q2_target");
    ps.push_back({"log_alpha", log_alpha});
    return ps;
  }
};

// ---- graph builders (shared between the float agent and gradient checks) ----

template <typename T>
struct PolicyHead {
  Tensor<T> mu, log_sigma;
};

template <typename T>
PolicyHead<T> policy_head(const SacNets<T>& nets, const Tensor<T>& latent,
                          const SacConfig& cfg) {
  int a = nets.nc.action_dim;
  Tensor<T> out = nets.actor.forward(latent);
  PolicyHead<T> h;
  h.mu = slice_cols(out, 0, a);
  h.log_sigma = clamp_op(slice_cols(out, a, 2 * a), static_cast<T>(cfg.log_sigma_min),
                         static_cast<T>(cfg.log_sigma_max));
  return h;
}

template <typename T>
struct PolicySample {
  Tensor<T> a_norm;  // tanh(u), [B, A]
  Tensor<T> log_pi;  // [B]
};

// Reparameterized sample plus its log-density. With the noise held constant,
// the Gaussian term's pre-squash quadratic is identically -xi^2/2, so only
// -log sigma carries gradient there; the tanh correction flows through u.
template <typename T>
PolicySample<T> sample_policy(const Tensor<T>& mu, const Tensor<T>& log_sigma,
                              const Tensor<T>& noise, const ActionMapper& mapper,
                              T squash_eps) {
  const auto& shape = mu.shape();
  int b = shape[0], a = shape[1];
  Tensor<T> u = reparam_gaussian_sample(mu, log_sigma, noise);
  Tensor<T> t = tanh_op(u);
  Tensor<T> one_minus_t2 = add_scalar(neg(mul(t, t)), T(1) + squash_eps);
  Tensor<T> corr = log_op(one_minus_t2);

  const T half_log_2pi = T(0.5) * std::log(T(2) * T(M_PI));
  std::vector<T> cval(static_cast<size_t>(b) * a);
  const std::vector<T>& nv = noise.values();
  for (int i = 0; i < b; ++i)
    for (int j = 0; j < a; ++j) {
      T xi = nv[static_cast<size_t>(i) * a + j];
      cval[static_cast<size_t>(i) * a + j] =
          -T(0.5) * xi * xi - half_log_2pi - static_cast<T>(std::log(mapper.half[j]));
    }
  Tensor<T> cterm = Tensor<T>::from_data({b, a}, cval);

  Tensor<T> elem = sub(add(neg(log_sigma), cterm), corr);
  PolicySample<T> s;
  s.a_norm = t;
  s.log_pi = sum_last(elem);
  return s;
}

template <typename T>
Tensor<T> q_forward(const SacNets<T>& nets, const Mlp<T>& q, const Tensor<T>& latent,
                    const Tensor<T>& a_norm) {
  Tensor<T> out = q.forward(concat_cols(latent, a_norm));
  return reshape(out, {latent.shape()[0]});
}

// Decoded minibatch. Observations stay in raw planar form so per-sample
// shifts can be applied before tensor construction.
template <typename T>
struct Batch {
  int b = 0, c = 0, h = 0, w = 0;
  std::vector<T> obs, next_obs;  // b*c*h*w each
  std::vector<T> action;         // b*action_dim, normalized
  std::vector<T> reward;
  std::vector<T> not_done;
};

using Shift = std::pair<int, int>;

// One shift per sample; draw order is (x, y) per sample, samples in order.
std::vector<Shift> draw_shifts(Rng& rng, int batch, int radius);

template <typename T>
std::vector<T> draw_noise(Rng& rng, int batch, int dim) {
  std::vector<T> out(static_cast<size_t>(batch) * dim);
  for (auto& v : out) v = static_cast<T>(rng.normal());
  return out;
}

template <typename T>
Tensor<T> shifted_obs_tensor(const Batch<T>& batch, const std::vector<T>& raw,
                             const std::vector<Shift>& shifts) {
  std::vector<T> out(raw.size());
  int64_t per = static_cast<int64_t>(batch.c) * batch.h * batch.w;
  for (int i = 0; i < batch.b; ++i)
    shift_chw(raw.data() + i * per, batch.c, batch.h, batch.w, shifts[i].first,
              shifts[i].second, out.data() + i * per);
  return Tensor<T>::from_data({batch.b, batch.c, batch.h, batch.w}, out);
}

// Clipped-double DrQ targets, forward-only. Per augmentation k of the next
// observation, V_k = min of the target critics at a fresh policy sample
// minus alpha * log pi; per-sample targets are accumulated in k order and
// divided by K, i.e. exactly the arithmetic mean of the per-augmentation
// targets y_k = r + gamma * (1 - d) * V_k.
template <typename T>
std::vector<T> compute_drq_targets(SacNets<T>& nets, const Batch<T>& batch,
                                   const SacConfig& cfg, const ActionMapper& mapper,
                                   const std::vector<std::vector<Shift>>& next_shifts,
                                   const std::vector<std::vector<T>>& next_noise) {
  const int b = batch.b;
  const int k = cfg.drq_k;
  std::vector<T> y(b, T(0));
  NoGradGuard ng;
  T alpha = std::exp(nets.log_alpha.values()[0]);
  for (int ki = 0; ki < k; ++ki) {
    Tensor<T> obs_k = shifted_obs_tensor(batch, batch.next_obs, next_shifts[ki]);
    Tensor<T> lat = nets.encoder.forward(obs_k);
    PolicyHead<T> head = policy_head(nets, lat, cfg);
    Tensor<T> noise = Tensor<T>::from_data({b, nets.nc.action_dim}, next_noise[ki]);
    PolicySample<T> ps = sample_policy(head.mu, head.log_sigma, noise, mapper,
                                       static_cast<T>(cfg.squash_eps));
    Tensor<T> qt1 = q_forward(nets, nets.q1_target, lat, ps.a_norm);
    Tensor<T> qt2 = q_forward(nets, nets.q2_target, lat, ps.a_norm);
    const auto& v1 = qt1.values();
    const auto& v2 = qt2.values();
    const auto& lp = ps.log_pi.values();
    for (int i = 0; i < b; ++i) {
      T v = std::min(v1[i], v2[i]) - alpha * lp[i];
      y[i] += batch.reward[i] + static_cast<T>(cfg.gamma) * batch.not_done[i] * v;
    }
  }
  for (int i = 0; i < b; ++i) y[i] /= static_cast<T>(k);
  return y;
}

// Soft Bellman residual against fixed targets y: mean over the batch and
// both critics of (Q_i(aug(s), a) - y)^2. The current observation gets one
// shift shared by both critics; gradients reach the encoder and critics.
template <typename T>
Tensor<T> build_critic_loss_from_targets(SacNets<T>& nets, const Batch<T>& batch,
                                         const SacConfig& cfg,
                                         const std::vector<Shift>& current_shift,
                                         const std::vector<T>& y) {
  const int b = batch.b;
  Tensor<T> obs_aug = shifted_obs_tensor(batch, batch.obs, current_shift);
  Tensor<T> lat = nets.encoder.forward(obs_aug);
  Tensor<T> act = Tensor<T>::from_data({b, nets.nc.action_dim}, batch.action);
  Tensor<T> q1 = q_forward(nets, nets.q1, lat, act);
  Tensor<T> q2 = q_forward(nets, nets.q2, lat, act);
  Tensor<T> yt = Tensor<T>::from_data({b}, y);
  Tensor<T> d1 = sub(q1, yt);
  Tensor<T> d2 = sub(q2, yt);
  Tensor<T> total = add(sum(mul(d1, d1)), sum(mul(d2, d2)));
  return mul_scalar(total, T(1) / static_cast<T>(2 * b));
}

template <typename T>
Tensor<T> build_critic_loss(SacNets<T>& nets, const Batch<T>& batch, const SacConfig& cfg,
                            const ActionMapper& mapper,
                            const std::vector<Shift>& current_shift,
                            const std::vector<std::vector<Shift>>& next_shifts,
                            const std::vector<std::vector<T>>& next_noise,
                            std::vector<T>* targets_out = nullptr) {
  std::vector<T> y = compute_drq_targets(nets, batch, cfg, mapper, next_shifts, next_noise);
  if (targets_out) *targets_out = y;
  return build_critic_loss_from_targets(nets, batch, cfg, current_shift, y);
}

// mean(alpha * log pi - min(Q1, Q2)) at a reparameterized sample, with the
// encoder output detached (computed forward-only and re-wrapped as a
// constant) and alpha treated as a constant. Only the actor feeds gradient.
template <typename T>
Tensor<T> build_actor_loss(SacNets<T>& nets, const Batch<T>& batch, const SacConfig& cfg,
                           const ActionMapper& mapper, const std::vector<Shift>& shifts,
                           const std::vector<T>& noise, T alpha_value) {
  const int b = batch.b;
  std::vector<T> latent_values;
  int latent_dim = nets.nc.latent_dim;
  {
    NoGradGuard ng;
    Tensor<T> obs_aug = shifted_obs_tensor(batch, batch.obs, shifts);
    latent_values = nets.encoder.forward(obs_aug).values();
  }
  Tensor<T> lat = Tensor<T>::from_data({b, latent_dim}, latent_values);
  PolicyHead<T> head = policy_head(nets, lat, cfg);
  Tensor<T> nt = Tensor<T>::from_data({b, nets.nc.action_dim}, noise);
  PolicySample<T> ps =
      sample_policy(head.mu, head.log_sigma, nt, mapper, static_cast<T>(cfg.squash_eps));
  Tensor<T> q1 = q_forward(nets, nets.q1, lat, ps.a_norm);
  Tensor<T> q2 = q_forward(nets, nets.q2, lat, ps.a_norm);
  Tensor<T> qmin = minimum(q1, q2);
  Tensor<T> obj = sub(mul_scalar(ps.log_pi, alpha_value), qmin);
  return mul_scalar(sum(obj), T(1) / static_cast<T>(b));
}

// mean(-alpha * (log pi + target entropy)); log pi is evaluated forward-only
// so the gradient reaches log_alpha alone.
template <typename T>
Tensor<T> build_alpha_loss(SacNets<T>& nets, const Batch<T>& batch, const SacConfig& cfg,
                           const ActionMapper& mapper, const std::vector<Shift>& shifts,
                           const std::vector<T>& noise) {
  const int b = batch.b;
  std::vector<T> logpi(b);
  {
    NoGradGuard ng;
    Tensor<T> obs_aug = shifted_obs_tensor(batch, batch.obs, shifts);
    Tensor<T> lat = nets.encoder.forward(obs_aug);
    PolicyHead<T> head = policy_head(nets, lat, cfg);
    Tensor<T> nt = Tensor<T>::from_data({b, nets.nc.action_dim}, noise);
    PolicySample<T> ps = sample_policy(head.mu, head.log_sigma, nt, mapper,
                                       static_cast<T>(cfg.squash_eps));
    logpi = ps.log_pi.values();
  }
  std::vector<T> coef(b);
  for (int i = 0; i < b; ++i) coef[i] = -(logpi[i] + static_cast<T>(cfg.target_entropy));
  Tensor<T> alpha = exp_op(nets.log_alpha);
  Tensor<T> term = scalar_mul(alpha, Tensor<T>::from_data({b}, coef));
  return mul_scalar(sum(term), T(1) / static_cast<T>(b));
}

// ---- runtime agent ----

struct UpdateStats {
  float critic_loss = 0.0f;
  bool actor_stepped = false;
  float actor_loss = 0.0f;
  float alpha_loss = 0.0f;
  float alpha = 0.0f;
};

class SacAgent {
 public:
  SacAgent(const NetworkConfig& net, const SacConfig& cfg, const ActionBounds& bounds,
           uint64_t seed);

  // Stacked observation -> environment action. Sampling consumes the policy
  // RNG stream; deterministic mode uses tanh(mu).
  Action act(const Image& obs, bool deterministic);

  // One full update cycle: critic step, then actor/alpha and target sync on
  // their schedules. Samples its own minibatch.
  UpdateStats update(ReplayBuffer& buffer);

  float critic_update(const Batch<float>& batch);
  float actor_update(const Batch<float>& batch);
  float alpha_update(const Batch<float>& batch);
  void target_sync();

  Batch<float> assemble_batch(const ReplayBuffer& buffer,
                              const std::vector<int64_t>& indices) const;

  float alpha() const { return std::exp(nets_.log_alpha.values()[0]); }
  int64_t update_count() const { return updates_; }
  SacNets<float>& nets() { return nets_; }
  const NetworkConfig& net_config() const { return net_; }
  const SacConfig& config() const { return cfg_; }
  const ActionMapper& mapper() const { return mapper_; }
  Rng& update_rng() { return update_rng_; }

  ParamSet<float> checkpoint_params() { return nets_.all_params(); }
  void restore(const LoadedCheckpoint& ckpt);

 private:
  NetworkConfig net_;
  SacConfig cfg_;
  ActionMapper mapper_;
  SacNets<float> nets_;
  ParamSet<float> critic_params_, actor_params_, alpha_params_;
  Adam<float> critic_opt_, actor_opt_, alpha_opt_;
  Rng update_rng_, policy_rng_;
  int64_t updates_ = 0;
};

}  // namespace navrl
