#include "navrl/augment.hpp"

namespace navrl {

Image shift_image(const Image& img, int shift_x, int shift_y) {
  Image out(img.channels, img.rows, img.cols);
  shift_chw(img.data.data(), img.channels, img.rows, img.cols, shift_x, shift_y,
            out.data.data());
  return out;
}

std::pair<int, int> draw_shift(Rng& rng, int radius) {
  if (radius <= 0) return {0, 0};
  int sx = static_cast<int>(rng.uniform_int(-radius, radius));
  int sy = static_cast<int>(rng.uniform_int(-radius, radius));
  return {sx, sy};
}

Image rad_shift(const Image& img, int radius, Rng& rng) {
  auto [sx, sy] = draw_shift(rng, radius);
  return shift_image(img, sx, sy);
}

}  // namespace navrl
