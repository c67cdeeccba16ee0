#include "navrl/nn.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

namespace navrl {

template <typename T>
void orthogonal_fill(std::vector<T>& w, int rows, int cols, Rng& rng, T gain) {
  if (static_cast<size_t>(rows) * cols != w.size())
    throw std::invalid_argument("orthogonal_fill: size mismatch");
  // QR of a tall Gaussian matrix; for wide targets initialize the
  // transpose so Q still has orthonormal columns.
  const bool wide = cols > rows;
  const int r = wide ? cols : rows;
  const int c = wide ? rows : cols;
  RowMat<T> a(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a(i, j) = static_cast<T>(rng.normal());
  Eigen::HouseholderQR<RowMat<T>> qr(a);
  RowMat<T> q = qr.householderQ() * RowMat<T>::Identity(r, c);
  const RowMat<T> rmat = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int j = 0; j < c; ++j) {
    if (rmat(j, j) < T(0)) q.col(j) = -q.col(j);
  }
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      w[static_cast<size_t>(i) * cols + j] = gain * (wide ? q(j, i) : q(i, j));
}

template <typename T>
void adam_step(std::vector<T>& param, const std::vector<T>& grad,
               AdamParamState<T>& state, const AdamHyper& hyper, int64_t t) {
  if (param.size() != grad.size() || param.size() != state.m.size())
    throw std::invalid_argument("adam_step: size mismatch");
  const T b1 = static_cast<T>(hyper.beta1);
  const T b2 = static_cast<T>(hyper.beta2);
  const T lr = static_cast<T>(hyper.lr);
  const T eps = static_cast<T>(hyper.eps);
  const T bc1 = T(1) - static_cast<T>(std::pow(hyper.beta1, static_cast<double>(t)));
  const T bc2 = T(1) - static_cast<T>(std::pow(hyper.beta2, static_cast<double>(t)));
  for (size_t i = 0; i < param.size(); ++i) {
    const T g = grad[i];
    state.m[i] = b1 * state.m[i] + (T(1) - b1) * g;
    state.v[i] = b2 * state.v[i] + (T(1) - b2) * g * g;
    const T mhat = state.m[i] / bc1;
    const T vhat = state.v[i] / bc2;
    param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

template <typename T>
void ema_update(ParamSet<T>& dst, const ParamSet<T>& src, T tau) {
  if (dst.size() != src.size())
    throw std::invalid_argument("ema_update: parameter count mismatch");
  for (size_t i = 0; i < dst.size(); ++i) {
    auto& d = dst[i].tensor.values();
    const auto& s = src[i].tensor.values();
    if (d.size() != s.size()) throw std::invalid_argument("ema_update: shape mismatch");
    for (size_t j = 0; j < d.size(); ++j)
      d[j] = (T(1) - tau) * d[j] + tau * s[j];
  }
}

template <typename T>
void copy_params(ParamSet<T>& dst, const ParamSet<T>& src) {
  if (dst.size() != src.size())
    throw std::invalid_argument("copy_params: parameter count mismatch");
  for (size_t i = 0; i < dst.size(); ++i) {
    auto& d = dst[i].tensor.values();
    const auto& s = src[i].tensor.values();
    if (d.size() != s.size()) throw std::invalid_argument("copy_params: shape mismatch");
    d = s;
  }
}

template void orthogonal_fill<float>(std::vector<float>&, int, int, Rng&, float);
template void orthogonal_fill<double>(std::vector<double>&, int, int, Rng&, double);
template void adam_step<float>(std::vector<float>&, const std::vector<float>&,
                               AdamParamState<float>&, const AdamHyper&, int64_t);
template void adam_step<double>(std::vector<double>&, const std::vector<double>&,
                                AdamParamState<double>&, const AdamHyper&, int64_t);
template void ema_update<float>(ParamSet<float>&, const ParamSet<float>&, float);
template void ema_update<double>(ParamSet<double>&, const ParamSet<double>&, double);
template void copy_params<float>(ParamSet<float>&, const ParamSet<float>&);
template void copy_params<double>(ParamSet<double>&, const ParamSet<double>&);

}  // namespace navrl
