#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "navrl/observation.hpp"
#include "navrl/rng.hpp"

namespace navrl {

// FIFO ring of transitions. Observations are stored quantized to uint8
// (round(v * 254)); obstacle-channel values are exact multiples of 1/254,
// so they round-trip losslessly. Actions are kept in normalized [-1, 1]
// form (the critics' input convention).
class ReplayBuffer {
 public:
  ReplayBuffer(int64_t capacity, int channels, int rows, int cols);

  void push(const Image& obs, const std::array<float, 2>& action_norm, float reward,
            const Image& next_obs, bool terminal);

  int64_t size() const { return size_; }
  int64_t capacity() const { return capacity_; }
  int64_t obs_size() const { return obs_size_; }
  int channels() const { return channels_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  // Uniform with replacement.
  std::vector<int64_t> sample_indices(Rng& rng, int batch) const;

  // Dequantized observation, written to out (length obs_size).
  template <typename T>
  void decode_obs(int64_t index, bool next, T* out) const {
    const uint8_t* src =
        (next ? next_store_.data() : obs_store_.data()) + index * obs_size_;
    for (int64_t i = 0; i < obs_size_; ++i) out[i] = static_cast<T>(src[i]) / T(254);
  }

  const std::array<float, 2>& action(int64_t i) const { return actions_[i]; }
  float reward(int64_t i) const { return rewards_[i]; }
  bool terminal(int64_t i) const { return terminals_[i] != 0; }

  // Insertion-order index of the oldest live transition (for tests).
  int64_t cursor() const { return cursor_; }

 private:
  int64_t capacity_;
  int channels_, rows_, cols_;
  int64_t obs_size_;
  int64_t size_ = 0;
  int64_t cursor_ = 0;
  std::vector<uint8_t> obs_store_, next_store_;
  std::vector<std::array<float, 2>> actions_;
  std::vector<float> rewards_;
  std::vector<uint8_t> terminals_;
};

}  // namespace navrl
