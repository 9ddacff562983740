#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "apsel/mlp.hpp"

namespace apsel::gradcheck {

struct GradCheck {
    double max_rel_error = 0.0;
    std::size_t checked = 0;
    std::size_t skipped_kinks = 0;  // probes whose +-h straddle a ReLU switch
};

/// Sign pattern of every ReLU pre-activation for the given input.
inline std::vector<bool> relu_pattern(const Mlp& net, const Eigen::MatrixXd& input)
{
    std::vector<bool> out;
    Eigen::MatrixXd x = input;
    for (const DenseLayer& layer : net.layers()) {
        Eigen::MatrixXd z = (layer.weights * x).colwise() + layer.bias;
        if (layer.activation == Activation::ReLU) {
            for (Eigen::Index k = 0; k < z.size(); ++k)
                out.push_back(z(k) > 0.0);
            x = z.cwiseMax(0.0);
        } else if (layer.activation == Activation::Sigmoid) {
            x = 1.0 / (1.0 + (-z.array()).exp());
        } else {
            x = z;
        }
    }
    return out;
}

inline double rel_error(double a, double b)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-6});
    return std::abs(a - b) / scale;
}

/// Central differences of L = sum(upstream .* net(input)) against backward().
inline GradCheck check_gradients(Mlp& net, const Eigen::MatrixXd& input, const Eigen::MatrixXd& upstream,
                                 double h = 1e-5)
{
    auto objective = [&](const Mlp& n, const Eigen::MatrixXd& x) { return (upstream.array() * n.predict(x).array()).sum(); };
    net.forward(input);
    const MlpGradients g = net.backward(upstream);
    GradCheck out;
    auto probe = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = objective(net, input);
        const auto pattern_up = relu_pattern(net, input);
        param = saved - h;
        const double down = objective(net, input);
        const bool kink = pattern_up != relu_pattern(net, input);
        param = saved;
        if (kink) {
            ++out.skipped_kinks;
            return;
        }
        out.max_rel_error = std::max(out.max_rel_error, rel_error(analytic, (up - down) / (2.0 * h)));
        ++out.checked;
    };
    for (std::size_t l = 0; l < net.layers().size(); ++l) {
        DenseLayer& layer = net.layers()[l];
        for (Eigen::Index k = 0; k < layer.weights.size(); ++k)
            probe(layer.weights.data()[k], g.weights[l].data()[k]);
        for (Eigen::Index k = 0; k < layer.bias.size(); ++k)
            probe(layer.bias(k), g.biases[l](k));
    }
    Eigen::MatrixXd x = input;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        const double saved = x.data()[k];
        x.data()[k] = saved + h;
        const double up = objective(net, x);
        const auto pattern_up = relu_pattern(net, x);
        x.data()[k] = saved - h;
        const double down = objective(net, x);
        const bool kink = pattern_up != relu_pattern(net, x);
        x.data()[k] = saved;
        if (kink) {
            ++out.skipped_kinks;
            continue;
        }
        out.max_rel_error = std::max(out.max_rel_error, rel_error(g.input.data()[k], (up - down) / (2.0 * h)));
        ++out.checked;
    }
    return out;
}

}  // namespace apsel::gradcheck
