#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "apsel/random.hpp"

namespace apsel {

enum class Activation { ReLU, Sigmoid, Identity };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& text);

struct DenseLayer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;     // out
    Activation activation = Activation::Identity;
};

/// Gradients of a scalar objective with respect to every parameter and to the
/// network input, laid out like the layers they belong to.
struct MlpGradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;
    Eigen::MatrixXd input;  // in x batch
};

/// Fully connected network operating on column batches (features x samples).
class Mlp {
public:
    Mlp() = default;
    /// `layer_dims` has one more entry than `activations`.
    Mlp(std::vector<std::size_t> layer_dims, std::vector<Activation> activations);

    /// Hidden layers: uniform in +-1/sqrt(fan_in). Output layer: uniform in
    /// +-final_range.
    void initialize(RandomStream& rng, double final_range = 3e-3);

    /// Forward pass that caches layer outputs for backward().
    Eigen::MatrixXd forward(const Eigen::MatrixXd& input);
    /// Forward pass without touching the cache.
    Eigen::MatrixXd predict(const Eigen::MatrixXd& input) const;

    /// Reverse-mode pass for the batch seen by the last forward(). `upstream`
    /// is dObjective/dOutput (out x batch).
    MlpGradients backward(const Eigen::MatrixXd& upstream) const;

    std::size_t input_dim() const;
    std::size_t output_dim() const;
    std::vector<std::size_t> layer_dims() const;
    std::size_t parameter_count() const;
    bool same_architecture(const Mlp& other) const;
    bool all_finite() const;

    const std::vector<DenseLayer>& layers() const { return layers_; }
    std::vector<DenseLayer>& layers() { return layers_; }

private:
    std::vector<DenseLayer> layers_;
    std::vector<Eigen::MatrixXd> cache_;  // cache_[0] = input, cache_[l+1] = output of layer l
};

/// Actor: ReLU hidden layers and a sigmoid output.
Mlp make_actor(std::size_t obs_dim, std::size_t action_dim, const std::vector<std::size_t>& hidden);
/// Critic over obs ++ action: ReLU hidden layers and a linear scalar output.
Mlp make_critic(std::size_t obs_dim, std::size_t action_dim, const std::vector<std::size_t>& hidden);

/// Actor scores in (0,1) for one observation; checks the input dimension.
Eigen::VectorXd actor_forward(const Mlp& actor, const Eigen::VectorXd& obs);
/// Critic value for one (observation, action) pair; checks dimensions.
double critic_forward(const Mlp& critic, const Eigen::VectorXd& obs, const Eigen::VectorXd& action_scores);

/// target <- tau * online + (1 - tau) * target, parameter by parameter.
void soft_update(Mlp& target, const Mlp& online, double tau);

/// Adaptive-moment optimizer state for one network.
class Adam {
public:
    Adam() = default;
    Adam(const Mlp& net, double learning_rate, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

    /// Descends along `grads` (pass negated gradients to ascend).
    void step(Mlp& net, const MlpGradients& grads);

    double learning_rate() const { return lr_; }
    long long steps() const { return t_; }

    // Moments are exposed for checkpointing.
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
    long long t_ = 0;

private:
    double lr_ = 1e-3;
    double beta1_ = 0.9;
    double beta2_ = 0.999;
    double eps_ = 1e-8;
};

}  // namespace apsel
