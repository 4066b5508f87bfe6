#pragma once

#include <cstddef>
#include <vector>

#include "uavaoi/neural.hpp"
#include "uavaoi/rng.hpp"

namespace uavaoi {

struct TransitionRecord {
    std::vector<double> state;
    int action = 0;
    double reward = 0.0;
    std::vector<double> next_state;
    bool done = false;
};

/// Fixed-capacity FIFO ring of transitions.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(TransitionRecord record);

    std::size_t size() const { return records_.size(); }
    std::size_t capacity() const { return capacity_; }
    /// i-th oldest record still held.
    const TransitionRecord& at(std::size_t i) const;

    /// `count` distinct positions (oldest-first numbering), uniform without replacement.
    std::vector<std::size_t> sample_indices(std::size_t count, Rng& rng) const;
    Minibatch sample(std::size_t count, Rng& rng) const;

private:
    std::size_t capacity_;
    std::size_t cursor_ = 0;  ///< slot that the next push overwrites once full
    std::vector<TransitionRecord> records_;
};

} // namespace uavaoi
