#pragma once

#include <string>
#include <vector>

#include "navrl/rng.hpp"
#include "navrl/tensor.hpp"

namespace navrl {

template <typename T>
struct NamedParam {
  std::string name;
  Tensor<T> tensor;
};

template <typename T>
using ParamSet = std::vector<NamedParam<T>>;

// Fills a [rows, cols] row-major weight matrix with a (semi-)orthogonal
// matrix scaled by gain: Gaussian fill, QR, sign fix by diag(R). The draw
// order from rng is row-major, so results are reproducible.
template <typename T>
void orthogonal_fill(std::vector<T>& w, int rows, int cols, Rng& rng, T gain = T(1));

template <typename T>
struct LinearLayer {
  Tensor<T> w, b;

  void init(int out_dim, int in_dim, Rng& rng, T gain = T(1)) {
    std::vector<T> wd(static_cast<size_t>(out_dim) * in_dim);
    orthogonal_fill(wd, out_dim, in_dim, rng, gain);
    w = Tensor<T>::from_data({out_dim, in_dim}, std::move(wd), true);
    b = Tensor<T>::zeros({out_dim}, true);
  }
  Tensor<T> forward(const Tensor<T>& x) const { return linear(x, w, b); }
  void register_params(ParamSet<T>& ps, const std::string& prefix) {
    ps.push_back({prefix + ".w", w});
    ps.push_back({prefix + ".b", b});
  }
};

template <typename T>
struct Conv2dLayer {
  Tensor<T> w, b;

  void init(int filters, int in_channels, int kh, int kw, Rng& rng, T gain = T(1)) {
    const int fan_in = in_channels * kh * kw;
    std::vector<T> wd(static_cast<size_t>(filters) * fan_in);
    orthogonal_fill(wd, filters, fan_in, rng, gain);
    w = Tensor<T>::from_data({filters, in_channels, kh, kw}, std::move(wd), true);
    b = Tensor<T>::zeros({filters}, true);
  }
  Tensor<T> forward(const Tensor<T>& x) const { return conv2d(x, w, b); }
  void register_params(ParamSet<T>& ps, const std::string& prefix) {
    ps.push_back({prefix + ".w", w});
    ps.push_back({prefix + ".b", b});
  }
};

template <typename T>
struct LayerNormLayer {
  Tensor<T> gamma, beta;

  void init(int dim) {
    gamma = Tensor<T>::full({dim}, T(1), true);
    beta = Tensor<T>::zeros({dim}, true);
  }
  Tensor<T> forward(const Tensor<T>& x) const { return layer_norm(x, gamma, beta); }
  void register_params(ParamSet<T>& ps, const std::string& prefix) {
    ps.push_back({prefix + ".gamma", gamma});
    ps.push_back({prefix + ".beta", beta});
  }
};

struct AdamHyper {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <typename T>
struct AdamParamState {
  std::vector<T> m, v;
};

// One Adam update with bias correction; t is the 1-based step count.
template <typename T>
void adam_step(std::vector<T>& param, const std::vector<T>& grad,
               AdamParamState<T>& state, const AdamHyper& hyper, int64_t t);

// Optimizer over a fixed parameter set. step() reads each tensor's
// current gradient buffer.
template <typename T>
class Adam {
 public:
  explicit Adam(AdamHyper hyper = {}) : hyper_(hyper) {}

  void attach(const ParamSet<T>& params) {
    states_.clear();
    states_.resize(params.size());
    for (size_t i = 0; i < params.size(); ++i) {
      const size_t n = params[i].tensor.values().size();
      states_[i].m.assign(n, T(0));
      states_[i].v.assign(n, T(0));
    }
  }

  void step(ParamSet<T>& params) {
    ++t_;
    for (size_t i = 0; i < params.size(); ++i) {
      adam_step(params[i].tensor.values(), params[i].tensor.grads(), states_[i],
                hyper_, t_);
    }
  }

  int64_t step_count() const { return t_; }
  const AdamHyper& hyper() const { return hyper_; }

 private:
  AdamHyper hyper_;
  int64_t t_ = 0;
  std::vector<AdamParamState<T>> states_;
};

// dst <- (1 - tau) * dst + tau * src, elementwise over aligned sets.
template <typename T>
void ema_update(ParamSet<T>& dst, const ParamSet<T>& src, T tau);

// Copies values by position (shapes must match).
template <typename T>
void copy_params(ParamSet<T>& dst, const ParamSet<T>& src);

extern template void orthogonal_fill<float>(std::vector<float>&, int, int, Rng&, float);
extern template void orthogonal_fill<double>(std::vector<double>&, int, int, Rng&, double);
extern template void adam_step<float>(std::vector<float>&, const std::vector<float>&,
                                      AdamParamState<float>&, const AdamHyper&, int64_t);
extern template void adam_step<double>(std::vector<double>&, const std::vector<double>&,
                                       AdamParamState<double>&, const AdamHyper&, int64_t);
extern template void ema_update<float>(ParamSet<float>&, const ParamSet<float>&, float);
extern template void ema_update<double>(ParamSet<double>&, const ParamSet<double>&, double);
extern template void copy_params<float>(ParamSet<float>&, const ParamSet<float>&);
extern template void copy_params<double>(ParamSet<double>&, const ParamSet<double>&);

}  // namespace navrl
