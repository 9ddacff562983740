#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "apsel/random.hpp"

namespace apsel {

struct Transition {
    Eigen::VectorXd obs;
    Eigen::VectorXd action_scores;
    double reward = 0.0;
    Eigen::VectorXd next_obs;
    bool done = false;
};

/// Column-stacked minibatch.
struct TransitionBatch {
    Eigen::MatrixXd obs;            // obs_dim x n
    Eigen::MatrixXd actions;        // action_dim x n
    Eigen::RowVectorXd rewards;     // 1 x n
    Eigen::MatrixXd next_obs;       // obs_dim x n
    Eigen::RowVectorXd not_done;    // 1 x n, 0 for terminal transitions
};

/// Fixed-capacity ring; once full, each push evicts the oldest transition.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity = 1'000'000);

    void push(Transition t);
    std::size_t size() const { return storage_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return storage_.empty(); }

    /// Age-ordered access: 0 is the oldest stored transition.
    const Transition& at(std::size_t i) const;

    /// Uniform draw with replacement over stored slots.
    std::vector<std::size_t> sample_indices(std::size_t n, RandomStream& rng) const;
    TransitionBatch sample(std::size_t n, RandomStream& rng) const;
    TransitionBatch gather(const std::vector<std::size_t>& indices) const;

private:
    std::size_t capacity_;
    std::size_t head_ = 0;  // next slot to overwrite once full
    std::vector<Transition> storage_;
};

}  // namespace apsel
