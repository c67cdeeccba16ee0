#include "navrl/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>

#include "navrl/sac.hpp"
#include "navrl/tensor.hpp"

namespace navrl {

namespace {

constexpr double kTol = 1e-4;
// Small enough that kink crossings (relu, min, clamp) under perturbation are
// vanishingly rare; central-difference roundoff stays ~1e-9.
constexpr double kH = 1e-6;

double rel_err(double a, double n) {
  double denom = std::max({std::abs(a), std::abs(n), 1e-6});
  return std::abs(a - n) / denom;
}

Tensor<double> leaf(const std::vector<int>& shape, Rng& rng, double lo, double hi) {
  std::vector<double> v(Tensor<double>::shape_numel(shape));
  for (auto& x : v) x = rng.uniform(lo, hi);
  Tensor<double> t = Tensor<double>::from_data(shape, v);
  t.node->requires_grad = true;
  return t;
}

// Values with |x| in [margin, span]; random sign. Keeps relu-style kinks
// farther from the perturbation than kH by orders of magnitude.
Tensor<double> leaf_off_zero(const std::vector<int>& shape, Rng& rng, double margin,
                             double span) {
  std::vector<double> v(Tensor<double>::shape_numel(shape));
  for (auto& x : v) {
    double mag = rng.uniform(margin, span);
    x = rng.uniform() < 0.5 ? -mag : mag;
  }
  Tensor<double> t = Tensor<double>::from_data(shape, v);
  t.node->requires_grad = true;
  return t;
}

Tensor<double> const_weights(const std::vector<int>& shape, Rng& rng) {
  std::vector<double> v(Tensor<double>::shape_numel(shape));
  for (auto& x : v) {
    double mag = rng.uniform(0.5, 1.5);
    x = rng.uniform() < 0.5 ? -mag : mag;
  }
  return Tensor<double>::from_data(shape, v);
}

// Dots the op output with fixed weights so the scalar loss is sensitive to
// every output element.
Tensor<double> scalarize(const Tensor<double>& out, const Tensor<double>& w) {
  return sum(mul(out, w));
}

using OpFn = std::function<Tensor<double>(std::vector<Tensor<double>>&)>;

GradCheckCase check_inputs(const std::string& name, std::vector<Tensor<double>> inputs,
                           const OpFn& fn) {
  GradCheckCase c{name, 0.0, false};
  Tensor<double> loss = fn(inputs);
  loss.backward();
  std::vector<std::vector<double>> analytic;
  analytic.reserve(inputs.size());
  for (auto& in : inputs) analytic.push_back(in.grads());
  for (size_t p = 0; p < inputs.size(); ++p) {
    auto& vals = inputs[p].values();
    for (size_t j = 0; j < vals.size(); ++j) {
      double orig = vals[j];
      vals[j] = orig + kH;
      double fp = fn(inputs).item();
      vals[j] = orig - kH;
      double fm = fn(inputs).item();
      vals[j] = orig;
      double num = (fp - fm) / (2.0 * kH);
      c.max_rel_err = std::max(c.max_rel_err, rel_err(analytic[p][j], num));
    }
  }
  c.pass = c.max_rel_err <= kTol;
  return c;
}

// FD over a named parameter set against grads captured from one backward().
template <typename ValueFn>
GradCheckCase check_params(const std::string& name, ParamSet<double>& params,
                           const std::vector<std::vector<double>>& analytic,
                           const ValueFn& value_fn) {
  GradCheckCase c{name, 0.0, false};
  for (size_t p = 0; p < params.size(); ++p) {
    auto& vals = params[p].tensor.values();
    for (size_t j = 0; j < vals.size(); ++j) {
      double orig = vals[j];
      vals[j] = orig + kH;
      double fp = value_fn();
      vals[j] = orig - kH;
      double fm = value_fn();
      vals[j] = orig;
      double num = (fp - fm) / (2.0 * kH);
      c.max_rel_err = std::max(c.max_rel_err, rel_err(analytic[p][j], num));
    }
  }
  c.pass = c.max_rel_err <= kTol;
  return c;
}

std::vector<std::vector<double>> snapshot_grads(ParamSet<double>& params) {
  std::vector<std::vector<double>> out;
  out.reserve(params.size());
  for (auto& p : params) out.push_back(p.tensor.grads());
  return out;
}

struct TinySetup {
  NetworkConfig nc;
  SacConfig cfg;
  ActionMapper mapper;
  SacNets<double> nets;
  Batch<double> batch;
  std::vector<Shift> cur_shift, actor_shift;
  std::vector<std::vector<Shift>> next_shifts;
  std::vector<std::vector<double>> next_noise;
  std::vector<double> actor_noise;
};

TinySetup make_tiny(Rng& rng) {
  TinySetup s;
  s.nc.obs_channels = 3;
  s.nc.obs_rows = 8;
  s.nc.obs_cols = 8;
  s.nc.conv_layers = 2;
  s.nc.conv_filters = 4;
  s.nc.latent_dim = 8;
  s.nc.mlp_hidden_layers = 1;
  s.nc.mlp_hidden_dim = 16;
  s.cfg.batch_size = 4;
  s.cfg.drq_k = 2;
  s.cfg.shift_radius_px = 1;
  s.cfg.init_alpha = 0.1;
  s.mapper = ActionMapper(ActionBounds{});
  Rng init = rng.stream(1);
  s.nets.init(s.nc, init, 0.1);

  const int b = s.cfg.batch_size;
  s.batch.b = b;
  s.batch.c = s.nc.obs_channels;
  s.batch.h = s.nc.obs_rows;
  s.batch.w = s.nc.obs_cols;
  int64_t per = static_cast<int64_t>(s.batch.c) * s.batch.h * s.batch.w;
  s.batch.obs.resize(b * per);
  s.batch.next_obs.resize(b * per);
  for (auto& v : s.batch.obs) v = rng.uniform();
  for (auto& v : s.batch.next_obs) v = rng.uniform();
  s.batch.action.resize(b * 2);
  for (auto& v : s.batch.action) v = rng.uniform(-0.8, 0.8);
  s.batch.reward = {0.5, -1.0, 0.25, 2.0};
  s.batch.not_done = {1.0, 0.0, 1.0, 1.0};

  s.cur_shift = draw_shifts(rng, b, s.cfg.shift_radius_px);
  s.next_shifts.resize(s.cfg.drq_k);
  s.next_noise.resize(s.cfg.drq_k);
  for (int k = 0; k < s.cfg.drq_k; ++k) {
    s.next_shifts[k] = draw_shifts(rng, b, s.cfg.shift_radius_px);
    s.next_noise[k] = draw_noise<double>(rng, b, 2);
  }
  s.actor_shift = draw_shifts(rng, b, s.cfg.shift_radius_px);
  s.actor_noise = draw_noise<double>(rng, b, 2);
  return s;
}

}  // namespace

GradCheckReport run_gradcheck(uint64_t seed, bool verbose) {
  Rng root(seed);
  GradCheckReport report;
  auto record = [&](GradCheckCase c) {
    if (verbose)
      std::fprintf(stderr, "  %-28s max rel err %.3e %s\n", c.name.c_str(), c.max_rel_err,
                   c.pass ? "ok" : "FAIL");
    report.cases.push_back(std::move(c));
  };

  {
    Rng r = root.stream(10);
    Tensor<double> w = const_weights({3, 4}, r);
    record(check_inputs("add", {leaf({3, 4}, r, -2, 2), leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(add(in[0], in[1]), w); }));
    record(check_inputs("sub", {leaf({3, 4}, r, -2, 2), leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(sub(in[0], in[1]), w); }));
    record(check_inputs("mul", {leaf({3, 4}, r, -2, 2), leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(mul(in[0], in[1]), w); }));
  }
  {
    // Well-separated arguments keep the min() kink away from the FD step.
    Rng r = root.stream(11);
    Tensor<double> a = leaf({3, 4}, r, -2, 2);
    std::vector<double> bv = a.values();
    for (auto& x : bv) x += (r.uniform() < 0.5 ? -1.0 : 1.0) * r.uniform(0.3, 1.0);
    Tensor<double> b = Tensor<double>::from_data({3, 4}, bv);
    b.node->requires_grad = true;
    Tensor<double> w = const_weights({3, 4}, r);
    record(check_inputs("minimum", {a, b},
                     [&](auto& in) { return scalarize(minimum(in[0], in[1]), w); }));
  }
  {
    Rng r = root.stream(12);
    Tensor<double> w = const_weights({3, 4}, r);
    record(check_inputs("add_scalar", {leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(add_scalar(in[0], 0.7), w); }));
    record(check_inputs("mul_scalar", {leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(mul_scalar(in[0], -1.3), w); }));
    record(check_inputs("relu", {leaf_off_zero({3, 4}, r, 0.2, 1.5)},
                     [&](auto& in) { return scalarize(relu(in[0]), w); }));
    record(check_inputs("tanh", {leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(tanh_op(in[0]), w); }));
    record(check_inputs("exp", {leaf({3, 4}, r, -1, 1)},
                     [&](auto& in) { return scalarize(exp_op(in[0]), w); }));
    record(check_inputs("log", {leaf({3, 4}, r, 0.5, 2.0)},
                     [&](auto& in) { return scalarize(log_op(in[0]), w); }));
  }
  {
    // Clamp bounds at +/-0.5; inputs stay 0.1 clear of both bounds.
    Rng r = root.stream(13);
    std::vector<double> v(12);
    for (auto& x : v) {
      do {
        x = r.uniform(-1.5, 1.5);
      } while (std::abs(std::abs(x) - 0.5) < 0.1);
    }
    Tensor<double> a = Tensor<double>::from_data({3, 4}, v);
    a.node->requires_grad = true;
    Tensor<double> w = const_weights({3, 4}, r);
    record(check_inputs("clamp", {a},
                     [&](auto& in) { return scalarize(clamp_op(in[0], -0.5, 0.5), w); }));
  }
  {
    Rng r = root.stream(14);
    Tensor<double> w = const_weights({3, 4}, r);
    record(check_inputs("scalar_mul", {leaf({1}, r, 0.5, 1.5), leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(scalar_mul(in[0], in[1]), w); }));
    record(check_inputs("reshape", {leaf({2, 6}, r, -2, 2)}, [&](auto& in) {
      return scalarize(reshape(in[0], {3, 4}), w);
    }));
    Tensor<double> ws = const_weights({3, 3}, r);
    record(check_inputs("slice_cols", {leaf({3, 6}, r, -2, 2)}, [&](auto& in) {
      return scalarize(slice_cols(in[0], 1, 4), ws);
    }));
    Tensor<double> wc = const_weights({3, 5}, r);
    record(check_inputs("concat_cols", {leaf({3, 2}, r, -2, 2), leaf({3, 3}, r, -2, 2)},
                     [&](auto& in) { return scalarize(concat_cols(in[0], in[1]), wc); }));
  }
  {
    Rng r = root.stream(15);
    record(check_inputs("sum", {leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return sum(in[0]); }));
    record(check_inputs("mean", {leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return mean(in[0]); }));
    Tensor<double> wb = const_weights({3}, r);
    record(check_inputs("sum_last", {leaf({3, 4}, r, -2, 2)},
                     [&](auto& in) { return scalarize(sum_last(in[0]), wb); }));
  }
  {
    Rng r = root.stream(16);
    Tensor<double> w = const_weights({3, 4}, r);
    record(check_inputs(
        "linear", {leaf({3, 5}, r, -1, 1), leaf({4, 5}, r, -1, 1), leaf({4}, r, -1, 1)},
        [&](auto& in) { return scalarize(linear(in[0], in[1], in[2]), w); }));
  }
  {
    Rng r = root.stream(17);
    Tensor<double> w = const_weights({2, 3, 3, 3}, r);
    record(check_inputs("conv2d",
                     {leaf({2, 2, 5, 5}, r, -1, 1), leaf({3, 2, 3, 3}, r, -1, 1),
                      leaf({3}, r, -1, 1)},
                     [&](auto& in) { return scalarize(conv2d(in[0], in[1], in[2]), w); }));
  }
  {
    Rng r = root.stream(18);
    Tensor<double> w = const_weights({3, 6}, r);
    record(check_inputs("layer_norm",
                     {leaf({3, 6}, r, -2, 2), leaf({6}, r, 0.5, 1.5), leaf({6}, r, -1, 1)},
                     [&](auto& in) {
                       return scalarize(layer_norm(in[0], in[1], in[2]), w);
                     }));
  }
  {
    Rng r = root.stream(19);
    Tensor<double> noise = const_weights({3, 2}, r);
    Tensor<double> w = const_weights({3, 2}, r);
    record(check_inputs("reparam_sample",
                     {leaf({3, 2}, r, -1, 1), leaf({3, 2}, r, -1, 0.5)}, [&](auto& in) {
                       return scalarize(reparam_gaussian_sample(in[0], in[1], noise), w);
                     }));
    // Squashed log-density as a graph: gradients through mu and log sigma,
    // including the tanh change-of-variables term.
    ActionMapper mapper{ActionBounds{}};
    Tensor<double> wb = const_weights({3}, r);
    Tensor<double> noise2 = const_weights({3, 2}, r);
    record(check_inputs("policy_log_prob",
                     {leaf({3, 2}, r, -1, 1), leaf({3, 2}, r, -1, 0.5)}, [&](auto& in) {
                       PolicySample<double> ps =
                           sample_policy(in[0], in[1], noise2, mapper, 1e-6);
                       return scalarize(ps.log_pi, wb);
                     }));
  }

  // Composed losses on a tiny network, all widths <= 16.
  {
    Rng r = root.stream(20);
    TinySetup s = make_tiny(r);
    std::vector<double> y;
    Tensor<double> loss = build_critic_loss(s.nets, s.batch, s.cfg, s.mapper, s.cur_shift,
                                            s.next_shifts, s.next_noise, &y);
    loss.backward();
    ParamSet<double> params = s.nets.critic_params();
    auto analytic = snapshot_grads(params);
    // Targets stay frozen under perturbation: the loss differentiates y as a
    // constant (semi-gradient), so the FD oracle must hold it fixed too.
    record(check_params("critic_loss", params, analytic, [&]() {
      return build_critic_loss_from_targets(s.nets, s.batch, s.cfg, s.cur_shift, y).item();
    }));
  }
  {
    Rng r = root.stream(21);
    TinySetup s = make_tiny(r);
    const double alpha = 0.1;
    Tensor<double> loss = build_actor_loss(s.nets, s.batch, s.cfg, s.mapper, s.actor_shift,
                                           s.actor_noise, alpha);
    loss.backward();
    ParamSet<double> params = s.nets.actor_params();
    auto analytic = snapshot_grads(params);
    record(check_params("actor_loss", params, analytic, [&]() {
      return build_actor_loss(s.nets, s.batch, s.cfg, s.mapper, s.actor_shift,
                              s.actor_noise, alpha)
          .item();
    }));
    // Detachment contract: the same backward leaves every encoder gradient
    // identically zero.
    GradCheckCase enc{"actor_loss/encoder_detached", 0.0, false};
    ParamSet<double> eps = s.nets.encoder_params();
    for (auto& p : eps)
      for (double g : p.tensor.grads()) enc.max_rel_err = std::max(enc.max_rel_err, std::abs(g));
    enc.pass = enc.max_rel_err == 0.0;
    record(enc);
  }
  {
    Rng r = root.stream(22);
    TinySetup s = make_tiny(r);
    Tensor<double> loss =
        build_alpha_loss(s.nets, s.batch, s.cfg, s.mapper, s.actor_shift, s.actor_noise);
    loss.backward();
    ParamSet<double> params{{"log_alpha", s.nets.log_alpha}};
    auto analytic = snapshot_grads(params);
    record(check_params("alpha_loss", params, analytic, [&]() {
      return build_alpha_loss(s.nets, s.batch, s.cfg, s.mapper, s.actor_shift,
                              s.actor_noise)
          .item();
    }));
  }

  report.worst = 0.0;
  report.all_pass = true;
  for (const auto& c : report.cases) {
    report.worst = std::max(report.worst, c.max_rel_err);
    report.all_pass = report.all_pass && c.pass;
  }
  return report;
}

}  // namespace navrl
