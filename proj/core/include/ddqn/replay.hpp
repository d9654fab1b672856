#pragma once

#include <cstddef>
#include <vector>

#include "ddqn/rng.hpp"

namespace ddqn::replay {

/// One experience record: (s, a, r, s', done).
struct Transition {
  std::vector<double> state;
  int action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  bool done = false;
};

/// Bounded FIFO store with uniform random sampling (with replacement).
/// Ring-buffer semantics: pushing at capacity evicts the oldest record.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(Transition t);

  /// `batch` items drawn uniformly with replacement; deterministic per seed.
  /// Rejects batch == 0 or batch > size.
  std::vector<Transition> sample_uniform(std::size_t batch, Rng& rng) const;

  std::size_t size() const { return buffer_.size(); }
  std::size_t capacity() const { return capacity_; }

  /// i-th stored transition in insertion order (0 = oldest surviving).
  const Transition& at(std::size_t i) const;

 private:
  std::size_t capacity_;
  std::vector<Transition> buffer_;
  std::size_t next_ = 0;  // overwrite position once full
};

}  // namespace ddqn::replay
