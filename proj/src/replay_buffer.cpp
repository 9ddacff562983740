#include "apsel/replay_buffer.hpp"

#include "apsel/errors.hpp"

namespace apsel {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity)
{
    if (capacity == 0)
        throw DomainError("ReplayBuffer: capacity must be positive");
}

void ReplayBuffer::push(Transition t)
{
    if (storage_.size() < capacity_) {
        storage_.push_back(std::move(t));
        return;
    }
    storage_[head_] = std::move(t);
    head_ = (head_ + 1) % capacity_;
}

const Transition& ReplayBuffer::at(std::size_t i) const
{
    if (i >= storage_.size())
        throw UsageError("ReplayBuffer::at: index out of range");
    return storage_[(head_ + i) % storage_.size()];
}

std::vector<std::size_t> ReplayBuffer::sample_indices(std::size_t n, RandomStream& rng) const
{
    if (storage_.empty())
        throw UsageError("ReplayBuffer::sample: buffer is empty");
    std::vector<std::size_t> idx(n);
    for (auto& i : idx)
        i = rng.index(storage_.size());
    return idx;
}

TransitionBatch ReplayBuffer::sample(std::size_t n, RandomStream& rng) const
{
    return gather(sample_indices(n, rng));
}

TransitionBatch ReplayBuffer::gather(const std::vector<std::size_t>& indices) const
{
    if (storage_.empty())
        throw UsageError("ReplayBuffer::gather: buffer is empty");
    const auto n = static_cast<Eigen::Index>(indices.size());
    const Transition& first = storage_.front();
    TransitionBatch b;
    b.obs.resize(first.obs.size(), n);
    b.actions.resize(first.action_scores.size(), n);
    b.rewards.resize(n);
    b.next_obs.resize(first.next_obs.size(), n);
    b.not_done.resize(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Transition& t = storage_.at(indices[static_cast<std::size_t>(k)]);
        b.obs.col(k) = t.obs;
        b.actions.col(k) = t.action_scores;
        b.rewards(k) = t.reward;
        b.next_obs.col(k) = t.next_obs;
        b.not_done(k) = t.done ? 0.0 : 1.0;
    }
    return b;
}

}  // namespace apsel
