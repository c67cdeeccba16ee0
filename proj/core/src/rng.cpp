#include "navrl/rng.hpp"

#include <bit>
#include <cmath>

namespace navrl {

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

int64_t Rng::uniform_int(int64_t lo, int64_t hi) {
  const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;  // hi >= lo
  if (range == 0) return static_cast<int64_t>(next_u64());    // full 64-bit span
  const uint64_t mask = std::bit_ceil(range) - 1;
  uint64_t draw;
  do {
    draw = next_u64() & mask;
  } while (draw >= range);
  return lo + static_cast<int64_t>(draw);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

uint64_t Rng::derive_seed(uint64_t root, uint64_t stream_id) {
  // SplitMix64 finalizer over the combined state.
  uint64_t z = root + 0x9E3779B97F4A7C15ull * (stream_id + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace navrl
