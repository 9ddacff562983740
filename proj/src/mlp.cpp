#include "apsel/mlp.hpp"

#include <cmath>

#include "apsel/errors.hpp"

namespace apsel {

std::string to_string(Activation a)
{
    switch (a) {
    case Activation::ReLU: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Identity: return "identity";
    }
    return "identity";
}

Activation activation_from_string(const std::string& text)
{
    for (Activation a : {Activation::ReLU, Activation::Sigmoid, Activation::Identity})
        if (to_string(a) == text)
            return a;
    throw DomainError("unknown activation '" + text + "'");
}

namespace {

void apply(Activation a, Eigen::MatrixXd& z)
{
    switch (a) {
    case Activation::ReLU: z = z.cwiseMax(0.0); break;
    case Activation::Sigmoid: z = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); }); break;
    case Activation::Identity: break;
    }
}

// Derivative of the activation expressed through its output y.
Eigen::MatrixXd derivative(Activation a, const Eigen::MatrixXd& y)
{
    switch (a) {
    case Activation::ReLU: return (y.array() > 0.0).cast<double>().matrix();
    case Activation::Sigmoid: return (y.array() * (1.0 - y.array())).matrix();
    case Activation::Identity: break;
    }
    return Eigen::MatrixXd::Ones(y.rows(), y.cols());
}

Eigen::MatrixXd layer_forward(const DenseLayer& layer, const Eigen::MatrixXd& x)
{
    Eigen::MatrixXd z = layer.weights * x;
    z.colwise() += layer.bias;
    apply(layer.activation, z);
    return z;
}

}  // namespace

Mlp::Mlp(std::vector<std::size_t> layer_dims, std::vector<Activation> activations)
{
    if (layer_dims.size() < 2 || activations.size() + 1 != layer_dims.size())
        throw UsageError("Mlp: need one activation per layer and at least one layer");
    for (std::size_t l = 0; l < activations.size(); ++l) {
        if (layer_dims[l] == 0 || layer_dims[l + 1] == 0)
            throw UsageError("Mlp: layer widths must be positive");
        DenseLayer layer;
        layer.weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(layer_dims[l + 1]),
                                              static_cast<Eigen::Index>(layer_dims[l]));
        layer.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(layer_dims[l + 1]));
        layer.activation = activations[l];
        layers_.push_back(std::move(layer));
    }
}

void Mlp::initialize(RandomStream& rng, double final_range)
{
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        DenseLayer& layer = layers_[l];
        double range = l + 1 == layers_.size() ? final_range : 1.0 / std::sqrt(static_cast<double>(layer.weights.cols()));
        for (Eigen::Index j = 0; j < layer.weights.cols(); ++j)
            for (Eigen::Index i = 0; i < layer.weights.rows(); ++i)
                layer.weights(i, j) = rng.uniform(-range, range);
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i)
            layer.bias(i) = rng.uniform(-range, range);
    }
    cache_.clear();
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input)
{
    if (static_cast<std::size_t>(input.rows()) != input_dim())
        throw UsageError("Mlp::forward: input dimension mismatch");
    cache_.clear();
    cache_.push_back(input);
    for (const DenseLayer& layer : layers_)
        cache_.push_back(layer_forward(layer, cache_.back()));
    return cache_.back();
}

Eigen::MatrixXd Mlp::predict(const Eigen::MatrixXd& input) const
{
    if (static_cast<std::size_t>(input.rows()) != input_dim())
        throw UsageError("Mlp::predict: input dimension mismatch");
    Eigen::MatrixXd x = input;
    for (const DenseLayer& layer : layers_)
        x = layer_forward(layer, x);
    return x;
}

MlpGradients Mlp::backward(const Eigen::MatrixXd& upstream) const
{
    if (cache_.size() != layers_.size() + 1)
        throw UsageError("Mlp::backward: no cached forward pass");
    if (upstream.rows() != cache_.back().rows() || upstream.cols() != cache_.back().cols())
        throw UsageError("Mlp::backward: upstream shape does not match the cached output");
    MlpGradients g;
    g.weights.resize(layers_.size());
    g.biases.resize(layers_.size());
    Eigen::MatrixXd delta = upstream;
    for (std::size_t l = layers_.size(); l-- > 0;) {
        delta = delta.cwiseProduct(derivative(layers_[l].activation, cache_[l + 1]));
        g.weights[l] = delta * cache_[l].transpose();
        g.biases[l] = delta.rowwise().sum();
        delta = layers_[l].weights.transpose() * delta;
    }
    g.input = std::move(delta);
    return g;
}

std::size_t Mlp::input_dim() const
{
    return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.front().weights.cols());
}

std::size_t Mlp::output_dim() const
{
    return layers_.empty() ? 0 : static_cast<std::size_t>(layers_.back().weights.rows());
}

std::vector<std::size_t> Mlp::layer_dims() const
{
    std::vector<std::size_t> dims;
    if (layers_.empty())
        return dims;
    dims.push_back(input_dim());
    for (const DenseLayer& layer : layers_)
        dims.push_back(static_cast<std::size_t>(layer.weights.rows()));
    return dims;
}

std::size_t Mlp::parameter_count() const
{
    std::size_t n = 0;
    for (const DenseLayer& layer : layers_)
        n += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
    return n;
}

bool Mlp::same_architecture(const Mlp& other) const
{
    if (layers_.size() != other.layers_.size() || layer_dims() != other.layer_dims())
        return false;
    for (std::size_t l = 0; l < layers_.size(); ++l)
        if (layers_[l].activation != other.layers_[l].activation)
            return false;
    return true;
}

bool Mlp::all_finite() const
{
    for (const DenseLayer& layer : layers_)
        if (!layer.weights.allFinite() || !layer.bias.allFinite())
            return false;
    return true;
}

namespace {

std::vector<std::size_t> chain(std::size_t in, const std::vector<std::size_t>& hidden, std::size_t out)
{
    std::vector<std::size_t> dims{in};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(out);
    return dims;
}

}  // namespace

Mlp make_actor(std::size_t obs_dim, std::size_t action_dim, const std::vector<std::size_t>& hidden)
{
    std::vector<Activation> acts(hidden.size(), Activation::ReLU);
    acts.push_back(Activation::Sigmoid);
    return Mlp(chain(obs_dim, hidden, action_dim), std::move(acts));
}

Mlp make_critic(std::size_t obs_dim, std::size_t action_dim, const std::vector<std::size_t>& hidden)
{
    std::vector<Activation> acts(hidden.size(), Activation::ReLU);
    acts.push_back(Activation::Identity);
    return Mlp(chain(obs_dim + action_dim, hidden, 1), std::move(acts));
}

Eigen::VectorXd actor_forward(const Mlp& actor, const Eigen::VectorXd& obs)
{
    if (static_cast<std::size_t>(obs.size()) != actor.input_dim())
        throw UsageError("actor_forward: observation dimension mismatch");
    return actor.predict(obs);
}

double critic_forward(const Mlp& critic, const Eigen::VectorXd& obs, const Eigen::VectorXd& action_scores)
{
    if (static_cast<std::size_t>(obs.size() + action_scores.size()) != critic.input_dim())
        throw UsageError("critic_forward: observation + action dimension mismatch");
    Eigen::VectorXd x(obs.size() + action_scores.size());
    x << obs, action_scores;
    return critic.predict(x)(0, 0);
}

void soft_update(Mlp& target, const Mlp& online, double tau)
{
    if (!target.same_architecture(online))
        throw UsageError("soft_update: architecture mismatch");
    auto& dst = target.layers();
    const auto& src = online.layers();
    for (std::size_t l = 0; l < dst.size(); ++l) {
        dst[l].weights = tau * src[l].weights + (1.0 - tau) * dst[l].weights;
        dst[l].bias = tau * src[l].bias + (1.0 - tau) * dst[l].bias;
    }
}

Adam::Adam(const Mlp& net, double learning_rate, double beta1, double beta2, double eps)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps)
{
    for (const DenseLayer& layer : net.layers()) {
        m_w.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
        v_w.push_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
        m_b.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
        v_b.push_back(Eigen::VectorXd::Zero(layer.bias.size()));
    }
}

void Adam::step(Mlp& net, const MlpGradients& grads)
{
    auto& layers = net.layers();
    if (grads.weights.size() != layers.size() || m_w.size() != layers.size())
        throw UsageError("Adam::step: gradient layout does not match the network");
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto update = [&](auto& param, const auto& g, auto& m, auto& v) {
        m = beta1_ * m + (1.0 - beta1_) * g;
        v = beta2_ * v + (1.0 - beta2_) * g.cwiseProduct(g);
        param.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
    };
    for (std::size_t l = 0; l < layers.size(); ++l) {
        update(layers[l].weights, grads.weights[l], m_w[l], v_w[l]);
        update(layers[l].bias, grads.biases[l], m_b[l], v_b[l]);
    }
}

}  // namespace apsel
