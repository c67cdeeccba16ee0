// Implementation detail of tensor.hpp; do not include directly.
#pragma once

namespace navrl {

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
  detail::check_same_shape("add", a, b);
  auto out = detail::make_node<T>(a.shape(), {a.node, b.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = a.node->value[i] + b.node->value[i];
  if (out->requires_grad) {
    auto pa = a.node.get();
    auto pb = b.node.get();
    out->backward_fn = [pa, pb](TensorNode<T>& self) {
      if (pa->requires_grad) {
        pa->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
      }
      if (pb->requires_grad) {
        pb->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i) pb->grad[i] += self.grad[i];
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
  detail::check_same_shape("sub", a, b);
  auto out = detail::make_node<T>(a.shape(), {a.node, b.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = a.node->value[i] - b.node->value[i];
  if (out->requires_grad) {
    auto pa = a.node.get();
    auto pb = b.node.get();
    out->backward_fn = [pa, pb](TensorNode<T>& self) {
      if (pa->requires_grad) {
        pa->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
      }
      if (pb->requires_grad) {
        pb->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i) pb->grad[i] -= self.grad[i];
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
  detail::check_same_shape("mul", a, b);
  auto out = detail::make_node<T>(a.shape(), {a.node, b.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = a.node->value[i] * b.node->value[i];
  if (out->requires_grad) {
    auto pa = a.node.get();
    auto pb = b.node.get();
    out->backward_fn = [pa, pb](TensorNode<T>& self) {
      if (pa->requires_grad) {
        pa->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i)
          pa->grad[i] += self.grad[i] * pb->value[i];
      }
      if (pb->requires_grad) {
        pb->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i)
          pb->grad[i] += self.grad[i] * pa->value[i];
      }
    };
  }
  return Tensor<T>(out);
}

// Ties route the gradient to the first argument.
template <typename T>
Tensor<T> minimum(const Tensor<T>& a, const Tensor<T>& b) {
  detail::check_same_shape("minimum", a, b);
  auto out = detail::make_node<T>(a.shape(), {a.node, b.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = std::min(a.node->value[i], b.node->value[i]);
  if (out->requires_grad) {
    auto pa = a.node.get();
    auto pb = b.node.get();
    out->backward_fn = [pa, pb](TensorNode<T>& self) {
      if (pa->requires_grad) pa->ensure_grad();
      if (pb->requires_grad) pb->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i) {
        if (pa->value[i] <= pb->value[i]) {
          if (pa->requires_grad) pa->grad[i] += self.grad[i];
        } else if (pb->requires_grad) {
          pb->grad[i] += self.grad[i];
        }
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> add_scalar(const Tensor<T>& a, T c) {
  auto out = detail::make_node<T>(a.shape(), {a.node});
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a.node->value[i] + c;
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> mul_scalar(const Tensor<T>& a, T c) {
  auto out = detail::make_node<T>(a.shape(), {a.node});
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = a.node->value[i] * c;
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa, c](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += c * self.grad[i];
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> relu(const Tensor<T>& a) {
  auto out = detail::make_node<T>(a.shape(), {a.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = std::max(a.node->value[i], T(0));
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i)
        if (pa->value[i] > T(0)) pa->grad[i] += self.grad[i];
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> tanh_op(const Tensor<T>& a) {
  auto out = detail::make_node<T>(a.shape(), {a.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = std::tanh(a.node->value[i]);
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i) {
        const T y = self.value[i];
        pa->grad[i] += self.grad[i] * (T(1) - y * y);
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> exp_op(const Tensor<T>& a) {
  auto out = detail::make_node<T>(a.shape(), {a.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = std::exp(a.node->value[i]);
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i)
        pa->grad[i] += self.grad[i] * self.value[i];
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> log_op(const Tensor<T>& a) {
  auto out = detail::make_node<T>(a.shape(), {a.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = std::log(a.node->value[i]);
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i)
        pa->grad[i] += self.grad[i] / pa->value[i];
    };
  }
  return Tensor<T>(out);
}

// Gradient passes only strictly inside (lo, hi).
template <typename T>
Tensor<T> clamp_op(const Tensor<T>& a, T lo, T hi) {
  auto out = detail::make_node<T>(a.shape(), {a.node});
  for (size_t i = 0; i < out->value.size(); ++i)
    out->value[i] = std::min(std::max(a.node->value[i], lo), hi);
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa, lo, hi](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i) {
        const T x = pa->value[i];
        if (x > lo && x < hi) pa->grad[i] += self.grad[i];
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> scalar_mul(const Tensor<T>& s, const Tensor<T>& x) {
  if (s.numel() != 1)
    throw std::invalid_argument("scalar_mul: scalar operand has shape " +
                                shape_to_string(s.shape()));
  auto out = detail::make_node<T>(x.shape(), {s.node, x.node});
  const T sv = s.node->value[0];
  for (size_t i = 0; i < out->value.size(); ++i) out->value[i] = sv * x.node->value[i];
  if (out->requires_grad) {
    auto ps = s.node.get();
    auto px = x.node.get();
    out->backward_fn = [ps, px](TensorNode<T>& self) {
      if (ps->requires_grad) {
        ps->ensure_grad();
        T acc = T(0);
        for (size_t i = 0; i < self.grad.size(); ++i)
          acc += self.grad[i] * px->value[i];
        ps->grad[0] += acc;
      }
      if (px->requires_grad) {
        px->ensure_grad();
        const T sv2 = ps->value[0];
        for (size_t i = 0; i < self.grad.size(); ++i)
          px->grad[i] += sv2 * self.grad[i];
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> reshape(const Tensor<T>& a, std::vector<int> shape) {
  if (Tensor<T>::shape_numel(shape) != a.numel())
    throw std::invalid_argument("reshape: " + shape_to_string(a.shape()) + " to " +
                                shape_to_string(shape));
  auto out = detail::make_node<T>(std::move(shape), {a.node});
  out->value = a.node->value;
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa](TensorNode<T>& self) {
      pa->ensure_grad();
      for (size_t i = 0; i < self.grad.size(); ++i) pa->grad[i] += self.grad[i];
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> slice_cols(const Tensor<T>& a, int c0, int c1) {
  if (a.shape().size() != 2 || c0 < 0 || c1 > a.shape()[1] || c0 >= c1)
    throw std::invalid_argument("slice_cols: cols [" + std::to_string(c0) + ", " +
                                std::to_string(c1) + ") of " + shape_to_string(a.shape()));
  const int rows = a.shape()[0];
  const int cols = a.shape()[1];
  const int width = c1 - c0;
  auto out = detail::make_node<T>({rows, width}, {a.node});
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < width; ++c)
      out->value[static_cast<size_t>(r) * width + c] =
          a.node->value[static_cast<size_t>(r) * cols + c0 + c];
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa, rows, cols, width, c0](TensorNode<T>& self) {
      pa->ensure_grad();
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < width; ++c)
          pa->grad[static_cast<size_t>(r) * cols + c0 + c] +=
              self.grad[static_cast<size_t>(r) * width + c];
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> concat_cols(const Tensor<T>& a, const Tensor<T>& b) {
  if (a.shape().size() != 2 || b.shape().size() != 2 || a.shape()[0] != b.shape()[0])
    throw std::invalid_argument("concat_cols: " + shape_to_string(a.shape()) + " with " +
                                shape_to_string(b.shape()));
  const int rows = a.shape()[0];
  const int ca = a.shape()[1];
  const int cb = b.shape()[1];
  auto out = detail::make_node<T>({rows, ca + cb}, {a.node, b.node});
  for (int r = 0; r < rows; ++r) {
    std::copy_n(&a.node->value[static_cast<size_t>(r) * ca], ca,
                &out->value[static_cast<size_t>(r) * (ca + cb)]);
    std::copy_n(&b.node->value[static_cast<size_t>(r) * cb], cb,
                &out->value[static_cast<size_t>(r) * (ca + cb) + ca]);
  }
  if (out->requires_grad) {
    auto pa = a.node.get();
    auto pb = b.node.get();
    out->backward_fn = [pa, pb, rows, ca, cb](TensorNode<T>& self) {
      if (pa->requires_grad) pa->ensure_grad();
      if (pb->requires_grad) pb->ensure_grad();
      for (int r = 0; r < rows; ++r) {
        const size_t base = static_cast<size_t>(r) * (ca + cb);
        if (pa->requires_grad)
          for (int c = 0; c < ca; ++c)
            pa->grad[static_cast<size_t>(r) * ca + c] += self.grad[base + c];
        if (pb->requires_grad)
          for (int c = 0; c < cb; ++c)
            pb->grad[static_cast<size_t>(r) * cb + c] += self.grad[base + ca + c];
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
  auto out = detail::make_node<T>({1}, {a.node});
  T acc = T(0);
  for (const T v : a.node->value) acc += v;
  out->value[0] = acc;
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa](TensorNode<T>& self) {
      pa->ensure_grad();
      const T g = self.grad[0];
      for (auto& gi : pa->grad) gi += g;
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> mean(const Tensor<T>& a) {
  const T inv = T(1) / static_cast<T>(a.numel());
  return mul_scalar(sum(a), inv);
}

template <typename T>
Tensor<T> sum_last(const Tensor<T>& a) {
  if (a.shape().size() != 2)
    throw std::invalid_argument("sum_last expects a 2-D tensor, got " +
                                shape_to_string(a.shape()));
  const int rows = a.shape()[0];
  const int cols = a.shape()[1];
  auto out = detail::make_node<T>({rows}, {a.node});
  for (int r = 0; r < rows; ++r) {
    T acc = T(0);
    for (int c = 0; c < cols; ++c) acc += a.node->value[static_cast<size_t>(r) * cols + c];
    out->value[r] = acc;
  }
  if (out->requires_grad) {
    auto pa = a.node.get();
    out->backward_fn = [pa, rows, cols](TensorNode<T>& self) {
      pa->ensure_grad();
      for (int r = 0; r < rows; ++r) {
        const T g = self.grad[r];
        for (int c = 0; c < cols; ++c)
          pa->grad[static_cast<size_t>(r) * cols + c] += g;
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> linear(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  if (x.shape().size() != 2 || w.shape().size() != 2 || b.shape().size() != 1 ||
      x.shape()[1] != w.shape()[1] || w.shape()[0] != b.shape()[0])
    throw std::invalid_argument("linear: x " + shape_to_string(x.shape()) + ", w " +
                                shape_to_string(w.shape()) + ", b " +
                                shape_to_string(b.shape()));
  const int B = x.shape()[0];
  const int I = x.shape()[1];
  const int O = w.shape()[0];
  auto out = detail::make_node<T>({B, O}, {x.node, w.node, b.node});
  {
    Eigen::Map<const RowMat<T>> xm(x.node->value.data(), B, I);
    Eigen::Map<const RowMat<T>> wm(w.node->value.data(), O, I);
    Eigen::Map<RowMat<T>> ym(out->value.data(), B, O);
    ym.noalias() = xm * wm.transpose();
    for (int r = 0; r < B; ++r)
      for (int c = 0; c < O; ++c) out->value[static_cast<size_t>(r) * O + c] += b.node->value[c];
  }
  if (out->requires_grad) {
    auto px = x.node.get();
    auto pw = w.node.get();
    auto pb = b.node.get();
    out->backward_fn = [px, pw, pb, B, I, O](TensorNode<T>& self) {
      Eigen::Map<const RowMat<T>> g(self.grad.data(), B, O);
      Eigen::Map<const RowMat<T>> xm(px->value.data(), B, I);
      Eigen::Map<const RowMat<T>> wm(pw->value.data(), O, I);
      if (px->requires_grad) {
        px->ensure_grad();
        Eigen::Map<RowMat<T>> gx(px->grad.data(), B, I);
        gx.noalias() += g * wm;
      }
      if (pw->requires_grad) {
        pw->ensure_grad();
        Eigen::Map<RowMat<T>> gw(pw->grad.data(), O, I);
        gw.noalias() += g.transpose() * xm;
      }
      if (pb->requires_grad) {
        pb->ensure_grad();
        for (int r = 0; r < B; ++r)
          for (int c = 0; c < O; ++c) pb->grad[c] += self.grad[static_cast<size_t>(r) * O + c];
      }
    };
  }
  return Tensor<T>(out);
}

namespace detail {

// col layout: rows = C*KH*KW, cols = B*OH*OW (row-major), sample-major
// columns. Contiguous memcpy runs of length OW.
template <typename T>
void im2col(const T* x, int B, int C, int H, int W, int KH, int KW,
            std::vector<T>& col) {
  const int OH = H - KH + 1;
  const int OW = W - KW + 1;
  const size_t col_stride = static_cast<size_t>(B) * OH * OW;
  for (int c = 0; c < C; ++c) {
    for (int ki = 0; ki < KH; ++ki) {
      for (int kj = 0; kj < KW; ++kj) {
        const size_t row = (static_cast<size_t>(c) * KH + ki) * KW + kj;
        T* dst_row = col.data() + row * col_stride;
        for (int s = 0; s < B; ++s) {
          const T* src_img = x + (static_cast<size_t>(s) * C + c) * H * W;
          T* dst = dst_row + static_cast<size_t>(s) * OH * OW;
          for (int oy = 0; oy < OH; ++oy) {
            std::copy_n(src_img + static_cast<size_t>(oy + ki) * W + kj, OW,
                        dst + static_cast<size_t>(oy) * OW);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const std::vector<T>& col, int B, int C, int H, int W, int KH,
                int KW, T* gx) {
  const int OH = H - KH + 1;
  const int OW = W - KW + 1;
  const size_t col_stride = static_cast<size_t>(B) * OH * OW;
  for (int c = 0; c < C; ++c) {
    for (int ki = 0; ki < KH; ++ki) {
      for (int kj = 0; kj < KW; ++kj) {
        const size_t row = (static_cast<size_t>(c) * KH + ki) * KW + kj;
        const T* src_row = col.data() + row * col_stride;
        for (int s = 0; s < B; ++s) {
          T* dst_img = gx + (static_cast<size_t>(s) * C + c) * H * W;
          const T* src = src_row + static_cast<size_t>(s) * OH * OW;
          for (int oy = 0; oy < OH; ++oy) {
            T* dst = dst_img + static_cast<size_t>(oy + ki) * W + kj;
            const T* s_run = src + static_cast<size_t>(oy) * OW;
            for (int ox = 0; ox < OW; ++ox) dst[ox] += s_run[ox];
          }
        }
      }
    }
  }
}

}  // namespace detail

template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& w, const Tensor<T>& b) {
  if (x.shape().size() != 4 || w.shape().size() != 4 || b.shape().size() != 1 ||
      x.shape()[1] != w.shape()[1] || w.shape()[0] != b.shape()[0] ||
      x.shape()[2] < w.shape()[2] || x.shape()[3] < w.shape()[3])
    throw std::invalid_argument("conv2d: x " + shape_to_string(x.shape()) + ", w " +
                                shape_to_string(w.shape()) + ", b " +
                                shape_to_string(b.shape()));
  const int B = x.shape()[0], C = x.shape()[1], H = x.shape()[2], W = x.shape()[3];
  const int F = w.shape()[0], KH = w.shape()[2], KW = w.shape()[3];
  const int OH = H - KH + 1, OW = W - KW + 1;
  const int CKK = C * KH * KW;
  const size_t cols = static_cast<size_t>(B) * OH * OW;

  auto out = detail::make_node<T>({B, F, OH, OW}, {x.node, w.node, b.node});
  std::vector<T> col(static_cast<size_t>(CKK) * cols);
  detail::im2col(x.node->value.data(), B, C, H, W, KH, KW, col);
  {
    std::vector<T> y(static_cast<size_t>(F) * cols);
    Eigen::Map<const RowMat<T>> wm(w.node->value.data(), F, CKK);
    Eigen::Map<const RowMat<T>> cm(col.data(), CKK, static_cast<Eigen::Index>(cols));
    Eigen::Map<RowMat<T>> ym(y.data(), F, static_cast<Eigen::Index>(cols));
    ym.noalias() = wm * cm;
    // y[f, s*OH*OW + ...] -> out[s, f, ...], adding the bias per filter
    for (int s = 0; s < B; ++s) {
      for (int f = 0; f < F; ++f) {
        const T* src = y.data() + static_cast<size_t>(f) * cols +
                       static_cast<size_t>(s) * OH * OW;
        T* dst = out->value.data() + (static_cast<size_t>(s) * F + f) * OH * OW;
        const T bias = b.node->value[f];
        for (int i = 0; i < OH * OW; ++i) dst[i] = src[i] + bias;
      }
    }
  }

  if (out->requires_grad) {
    auto px = x.node.get();
    auto pw = w.node.get();
    auto pb = b.node.get();
    // The col matrix is reused for the weight gradient.
    auto saved_col = std::make_shared<std::vector<T>>(std::move(col));
    out->backward_fn = [px, pw, pb, saved_col, B, C, H, W, F, KH, KW, OH, OW,
                        CKK, cols](TensorNode<T>& self) {
      // Regroup grad into dY [F, B*OH*OW]
      std::vector<T> dy(static_cast<size_t>(F) * cols);
      for (int s = 0; s < B; ++s) {
        for (int f = 0; f < F; ++f) {
          const T* src = self.grad.data() + (static_cast<size_t>(s) * F + f) * OH * OW;
          T* dst = dy.data() + static_cast<size_t>(f) * cols +
                   static_cast<size_t>(s) * OH * OW;
          std::copy_n(src, OH * OW, dst);
        }
      }
      Eigen::Map<const RowMat<T>> dym(dy.data(), F, static_cast<Eigen::Index>(cols));
      if (pb->requires_grad) {
        pb->ensure_grad();
        for (int f = 0; f < F; ++f) {
          T acc = T(0);
          const T* row = dy.data() + static_cast<size_t>(f) * cols;
          for (size_t i = 0; i < cols; ++i) acc += row[i];
          pb->grad[f] += acc;
        }
      }
      if (pw->requires_grad) {
        pw->ensure_grad();
        Eigen::Map<const RowMat<T>> cm(saved_col->data(), CKK,
                                       static_cast<Eigen::Index>(cols));
        Eigen::Map<RowMat<T>> gw(pw->grad.data(), F, CKK);
        gw.noalias() += dym * cm.transpose();
      }
      if (px->requires_grad) {
        px->ensure_grad();
        std::vector<T> dcol(static_cast<size_t>(CKK) * cols);
        Eigen::Map<const RowMat<T>> wm(pw->value.data(), F, CKK);
        Eigen::Map<RowMat<T>> dcm(dcol.data(), CKK, static_cast<Eigen::Index>(cols));
        dcm.noalias() = wm.transpose() * dym;
        detail::col2im_add(dcol, B, C, H, W, KH, KW, px->grad.data());
      }
    };
  }
  return Tensor<T>(out);
}

template <typename T>
Tensor<T> layer_norm(const Tensor<T>& x, const Tensor<T>& gamma, const Tensor<T>& beta,
                     T eps) {
  if (x.shape().size() != 2 || gamma.shape().size() != 1 || beta.shape().size() != 1 ||
      gamma.shape()[0] != x.shape()[1] || beta.shape()[0] != x.shape()[1])
    throw std::invalid_argument("layer_norm: x " + shape_to_string(x.shape()) +
                                ", gamma " + shape_to_string(gamma.shape()) + ", beta " +
                                shape_to_string(beta.shape()));
  const int B = x.shape()[0];
  const int D = x.shape()[1];
  auto out = detail::make_node<T>({B, D}, {x.node, gamma.node, beta.node});
  auto xhat = std::make_shared<std::vector<T>>(static_cast<size_t>(B) * D);
  auto inv_std = std::make_shared<std::vector<T>>(B);
  for (int r = 0; r < B; ++r) {
    const T* row = x.node->value.data() + static_cast<size_t>(r) * D;
    T mu = T(0);
    for (int c = 0; c < D; ++c) mu += row[c];
    mu /= static_cast<T>(D);
    T var = T(0);
    for (int c = 0; c < D; ++c) {
      const T d = row[c] - mu;
      var += d * d;
    }
    var /= static_cast<T>(D);
    const T is = T(1) / std::sqrt(var + eps);
    (*inv_std)[r] = is;
    for (int c = 0; c < D; ++c) {
      const T xh = (row[c] - mu) * is;
      (*xhat)[static_cast<size_t>(r) * D + c] = xh;
      out->value[static_cast<size_t>(r) * D + c] =
          xh * gamma.node->value[c] + beta.node->value[c];
    }
  }
  if (out->requires_grad) {
    auto px = x.node.get();
    auto pg = gamma.node.get();
    auto pb = beta.node.get();
    out->backward_fn = [px, pg, pb, xhat, inv_std, B, D](TensorNode<T>& self) {
      if (pg->requires_grad) pg->ensure_grad();
      if (pb->requires_grad) pb->ensure_grad();
      if (px->requires_grad) px->ensure_grad();
      for (int r = 0; r < B; ++r) {
        const size_t base = static_cast<size_t>(r) * D;
        const T* g = self.grad.data() + base;
        const T* xh = xhat->data() + base;
        if (pg->requires_grad)
          for (int c = 0; c < D; ++c) pg->grad[c] += g[c] * xh[c];
        if (pb->requires_grad)
          for (int c = 0; c < D; ++c) pb->grad[c] += g[c];
        if (px->requires_grad) {
          // dxhat = g * gamma; dx = inv_std/D * (D*dxhat - sum(dxhat)
          //                                       - xhat * sum(dxhat*xhat))
          T sum_dxh = T(0), sum_dxh_xh = T(0);
          for (int c = 0; c < D; ++c) {
            const T dxh = g[c] * pg->value[c];
            sum_dxh += dxh;
            sum_dxh_xh += dxh * xh[c];
          }
          const T scale = (*inv_std)[r] / static_cast<T>(D);
          for (int c = 0; c < D; ++c) {
            const T dxh = g[c] * pg->value[c];
            px->grad[base + c] +=
                scale * (static_cast<T>(D) * dxh - sum_dxh - xh[c] * sum_dxh_xh);
          }
        }
      }
    };
  }
  return Tensor<T>(out);
}

}  // namespace navrl
