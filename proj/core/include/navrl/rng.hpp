#pragma once

#include <cstdint>
#include <random>

namespace navrl {

// Deterministic random source. All draws go through explicit bit
// manipulation on mt19937_64 output so sequences are identical across
// platforms and standard library versions (std::*_distribution is not
// portable).
class Rng {
 public:
  explicit Rng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const { return seed_; }
  uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer in [lo, hi], both ends inclusive. Rejection sampled,
  // no modulo bias.
  int64_t uniform_int(int64_t lo, int64_t hi);

  // Standard normal via Box-Muller. The second value of each pair is
  // cached, so draw order matters for reproducibility.
  double normal();

  // Independent child generator. Derivation is a SplitMix64 hash of
  // (seed, stream_id), so children of the same parent with distinct ids
  // have unrelated sequences.
  Rng stream(uint64_t stream_id) const { return Rng(derive_seed(seed_, stream_id)); }

  static uint64_t derive_seed(uint64_t root, uint64_t stream_id);

 private:
  uint64_t seed_ = 0;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace navrl
