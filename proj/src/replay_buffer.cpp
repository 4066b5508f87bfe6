#include "uavaoi/replay_buffer.hpp"

#include <algorithm>
#include <cmath>

#include "uavaoi/errors.hpp"

namespace uavaoi {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw ConfigError("replay buffer capacity must be >= 1");
}

void ReplayBuffer::push(TransitionRecord record) {
    if (!std::isfinite(record.reward)) throw NumericError("non-finite reward pushed to replay buffer");
    if (record.state.size() != record.next_state.size())
        throw ContractError("transition state encodings differ in length");
    if (records_.size() < capacity_) {
        records_.push_back(std::move(record));
        return;
    }
    records_[cursor_] = std::move(record);
    cursor_ = (cursor_ + 1) % capacity_;
}

const TransitionRecord& ReplayBuffer::at(std::size_t i) const {
    if (i >= records_.size()) throw ContractError("replay index out of range");
    return records_[(cursor_ + i) % records_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t count, Rng& rng) const {
    const std::size_t n = records_.size();
    if (count > n) throw ContractError("cannot sample more transitions than the buffer holds");
    // Floyd's algorithm: exactly `count` draws, each subset equally likely.
    std::vector<std::size_t> picked;
    picked.reserve(count);
    for (std::size_t j = n - count; j < n; ++j) {
        const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
        if (std::find(picked.begin(), picked.end(), t) == picked.end())
            picked.push_back(t);
        else
            picked.push_back(j);
    }
    return picked;
}

Minibatch ReplayBuffer::sample(std::size_t count, Rng& rng) const {
    const auto idx = sample_indices(count, rng);
    Minibatch b;
    if (idx.empty()) return b;
    const auto width = static_cast<Eigen::Index>(at(idx.front()).state.size());
    const auto rows = static_cast<Eigen::Index>(idx.size());
    b.states.resize(rows, width);
    b.next_states.resize(rows, width);
    b.rewards.resize(rows);
    b.actions.reserve(idx.size());
    b.done.reserve(idx.size());
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& rec = at(idx[static_cast<std::size_t>(r)]);
        for (Eigen::Index c = 0; c < width; ++c) {
            b.states(r, c) = rec.state[static_cast<std::size_t>(c)];
            b.next_states(r, c) = rec.next_state[static_cast<std::size_t>(c)];
        }
        b.rewards(r) = rec.reward;
        b.actions.push_back(rec.action);
        b.done.push_back(rec.done ? 1 : 0);
    }
    return b;
}

} // namespace uavaoi
