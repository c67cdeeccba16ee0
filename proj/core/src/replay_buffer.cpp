#include "navrl/replay_buffer.hpp"

#include <cmath>
#include <stdexcept>

namespace navrl {

namespace {

uint8_t quantize(float v) {
  float q = std::round(v * 254.0f);
  if (q < 0.0f) q = 0.0f;
  if (q > 254.0f) q = 254.0f;
  return static_cast<uint8_t>(q);
}

}  // namespace

ReplayBuffer::ReplayBuffer(int64_t capacity, int channels, int rows, int cols)
    : capacity_(capacity),
      channels_(channels),
      rows_(rows),
      cols_(cols),
      obs_size_(static_cast<int64_t>(channels) * rows * cols) {
  if (capacity <= 0) throw std::invalid_argument("replay: capacity must be positive");
  obs_store_.resize(capacity_ * obs_size_);
  next_store_.resize(capacity_ * obs_size_);
  actions_.resize(capacity_);
  rewards_.resize(capacity_);
  terminals_.resize(capacity_);
}

void ReplayBuffer::push(const Image& obs, const std::array<float, 2>& action_norm,
                        float reward, const Image& next_obs, bool terminal) {
  if (static_cast<int64_t>(obs.data.size()) != obs_size_ ||
      static_cast<int64_t>(next_obs.data.size()) != obs_size_) {
    throw std::invalid_argument("replay: observation size mismatch");
  }
  uint8_t* o = obs_store_.data() + cursor_ * obs_size_;
  uint8_t* n = next_store_.data() + cursor_ * obs_size_;
  for (int64_t i = 0; i < obs_size_; ++i) {
    o[i] = quantize(obs.data[i]);
    n[i] = quantize(next_obs.data[i]);
  }
  actions_[cursor_] = action_norm;
  rewards_[cursor_] = reward;
  terminals_[cursor_] = terminal ? 1 : 0;
  cursor_ = (cursor_ + 1) % capacity_;
  if (size_ < capacity_) ++size_;
}

std::vector<int64_t> ReplayBuffer::sample_indices(Rng& rng, int batch) const {
  if (size_ == 0) throw std::logic_error("replay: sample from empty buffer");
  std::vector<int64_t> out(batch);
  for (int i = 0; i < batch; ++i) out[i] = rng.uniform_int(0, size_ - 1);
  return out;
}

}  // namespace navrl
