#include "ddqn/replay.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ddqn::replay {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayMemory: capacity must be positive");
}

void ReplayMemory::push(Transition t) {
  if (t.action < 0) throw std::invalid_argument("ReplayMemory::push: negative action index");
  if (!std::isfinite(t.reward))
    throw std::invalid_argument("ReplayMemory::push: non-finite reward");
  if (buffer_.size() < capacity_) {
    buffer_.push_back(std::move(t));
  } else {
    buffer_[next_] = std::move(t);
    next_ = (next_ + 1) % capacity_;
  }
}

std::vector<Transition> ReplayMemory::sample_uniform(std::size_t batch, Rng& rng) const {
  if (batch == 0) throw std::invalid_argument("sample_uniform: batch must be positive");
  if (batch > buffer_.size())
    throw std::invalid_argument("sample_uniform: batch exceeds stored transitions");
  std::vector<Transition> out;
  out.reserve(batch);
  for (std::size_t i = 0; i < batch; ++i)
    out.push_back(buffer_[rng.uniform_int(buffer_.size())]);
  return out;
}

const Transition& ReplayMemory::at(std::size_t i) const {
  if (i >= buffer_.size()) throw std::out_of_range("ReplayMemory::at");
  if (buffer_.size() < capacity_) return buffer_[i];
  return buffer_[(next_ + i) % capacity_];
}

}  // namespace ddqn::replay
