#pragma once

#include <utility>
#include <vector>

#include "navrl/observation.hpp"
#include "navrl/rng.hpp"

namespace navrl {

// Random-shift augmentation: pad each spatial edge by `radius` pixels with
// edge replication, then crop a random window of the original size. A shift
// of (sx, sy) moves image content by +sx columns and +sy rows; pixels pulled
// from outside the source replicate the nearest edge.
//
// Radius 0 is the identity.

// Raw planar form, usable on both float and double buffers. in/out must not
// alias and each hold channels*rows*cols values in CHW order.
template <typename T>
void shift_chw(const T* in, int channels, int rows, int cols, int shift_x, int shift_y,
               T* out) {
  for (int c = 0; c < channels; ++c) {
    const T* plane = in + static_cast<int64_t>(c) * rows * cols;
    T* dst = out + static_cast<int64_t>(c) * rows * cols;
    for (int r = 0; r < rows; ++r) {
      int sr = r - shift_y;
      if (sr < 0) sr = 0;
      if (sr >= rows) sr = rows - 1;
      for (int col = 0; col < cols; ++col) {
        int sc = col - shift_x;
        if (sc < 0) sc = 0;
        if (sc >= cols) sc = cols - 1;
        dst[static_cast<int64_t>(r) * cols + col] = plane[static_cast<int64_t>(sr) * cols + sc];
      }
    }
  }
}

Image shift_image(const Image& img, int shift_x, int shift_y);

// Draws shift_x then shift_y, each uniform on [-radius, radius].
std::pair<int, int> draw_shift(Rng& rng, int radius);

Image rad_shift(const Image& img, int radius, Rng& rng);

}  // namespace navrl
