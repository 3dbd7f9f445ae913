#include "condense/network.hpp"

#include "condense/errors.hpp"

#include <cmath>
#include <random>
#include <string>

namespace condense {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd augment(const MatrixXd& h) {
    MatrixXd x(h.rows(), h.cols() + 1);
    x.leftCols(h.cols()) = h;
    x.col(h.cols()).setOnes();
    return x;
}

MatrixXd apply(const ActivationSpec& act, const MatrixXd& z) {
    return z.unaryExpr([&act](double v) { return eval(act, v); });
}

MatrixXd apply_deriv(const ActivationSpec& act, const MatrixXd& z, DerivativeMode mode) {
    if (mode == DerivativeMode::leading_order) {
        return z.unaryExpr([&act](double v) { return deriv_leading_order(act, v); });
    }
    return z.unaryExpr([&act](double v) { return deriv(act, v); });
}

bool has_skip(const NetworkConfig& config, std::size_t layer) {
    return config.residual && layer >= 2;
}

// Batched forward pass starting at hidden layer `first` from the augmented
// inputs x^[first-1]. pre[l - first] holds Z_l, aug[l - first] holds X_{l-1};
// the last entry of aug is X_L.
struct BatchTrace {
    std::vector<MatrixXd> pre;
    std::vector<MatrixXd> aug;
    MatrixXd output;
};

BatchTrace run_forward(const NetworkConfig& config, const NetworkParams& params,
                       std::size_t first, const MatrixXd& inputs_first) {
    BatchTrace t;
    t.aug.push_back(inputs_first);
    for (std::size_t l = first; l <= config.depth(); ++l) {
        const MatrixXd& x_prev = t.aug.back();
        MatrixXd z = x_prev * params.layers[l - 1].transpose();
        MatrixXd h = apply(config.activations[l - 1], z);
        if (has_skip(config, l)) {
            h += x_prev.leftCols(x_prev.cols() - 1);
        }
        t.pre.push_back(std::move(z));
        t.aug.push_back(augment(h));
    }
    t.output = t.aug.back() * params.output.transpose() / config.alpha;
    return t;
}

// Backpropagates d/dtheta of (1/n) sum_i e_i . f(x_i) for fixed residuals e
// through layers first..L. Derivatives at layers >= `mode_from` follow `mode`.
Gradients run_backward(const NetworkConfig& config, const NetworkParams& params,
                       std::size_t first, const BatchTrace& t, const MatrixXd& residuals,
                       DerivativeMode mode) {
    const double n = static_cast<double>(residuals.rows());
    const std::size_t depth = config.depth();
    Gradients g;
    g.layers.resize(depth);
    g.output = residuals.transpose() * t.aug.back() / (n * config.alpha);

    const MatrixXd& a = params.output;
    MatrixXd delta_h = residuals * a.leftCols(a.cols() - 1) / (n * config.alpha);
    for (std::size_t l = depth; l >= first; --l) {
        const std::size_t idx = l - first;
        MatrixXd delta_z =
            delta_h.cwiseProduct(apply_deriv(config.activations[l - 1], t.pre[idx], mode));
        g.layers[l - 1] = delta_z.transpose() * t.aug[idx];
        if (l == first) break;
        const MatrixXd& w = params.layers[l - 1];
        MatrixXd next = delta_z * w.leftCols(w.cols() - 1);
        if (has_skip(config, l)) next += delta_h;
        delta_h = std::move(next);
    }
    return g;
}

MatrixXd data_inputs(const MatrixXd& inputs) { return augment(inputs); }

}  // namespace

std::size_t NetworkConfig::fan_in(std::size_t layer) const {
    if (layer < 1 || layer > depth()) {
        throw ConfigError("hidden layer " + std::to_string(layer) + " out of range [1, " +
                          std::to_string(depth()) + "]");
    }
    return layer == 1 ? input_dim : hidden_widths[layer - 2];
}

void NetworkConfig::validate() const {
    if (input_dim == 0) throw ConfigError("input_dim must be positive");
    if (output_dim == 0) throw ConfigError("output_dim must be positive");
    if (hidden_widths.empty()) throw ConfigError("at least one hidden layer is required");
    for (std::size_t w : hidden_widths) {
        if (w == 0) throw ConfigError("hidden widths must be positive");
    }
    if (activations.size() != hidden_widths.size()) {
        throw ConfigError("expected " + std::to_string(hidden_widths.size()) +
                          " activations, got " + std::to_string(activations.size()));
    }
    if (residual) {
        for (std::size_t w : hidden_widths) {
            if (w != hidden_widths.front()) {
                throw ConfigError("residual networks require equal hidden widths");
            }
        }
    }
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
}

std::size_t ParamBlocks::size() const {
    std::size_t total = 0;
    for_each_block([&total](const MatrixXd& m) { total += static_cast<std::size_t>(m.size()); });
    return total;
}

void Batch::validate(const NetworkConfig& config) const {
    if (inputs.rows() < 1) throw ConfigError("batch must contain at least one sample");
    if (targets.rows() != inputs.rows()) {
        throw ConfigError("batch inputs and targets disagree on sample count");
    }
    if (static_cast<std::size_t>(inputs.cols()) != config.input_dim) {
        throw ConfigError("batch input dimension " + std::to_string(inputs.cols()) +
                          " does not match network input_dim " +
                          std::to_string(config.input_dim));
    }
    if (static_cast<std::size_t>(targets.cols()) != config.output_dim) {
        throw ConfigError("batch target dimension does not match network output_dim");
    }
    if (!inputs.allFinite() || !targets.allFinite()) {
        throw DomainError("batch contains non-finite entries");
    }
}

void validate_params(const NetworkConfig& config, const ParamBlocks& params) {
    if (params.layers.size() != config.depth()) {
        throw ConfigError("parameter depth " + std::to_string(params.layers.size()) +
                          " does not match config depth " + std::to_string(config.depth()));
    }
    for (std::size_t l = 1; l <= config.depth(); ++l) {
        const auto& w = params.layers[l - 1];
        if (static_cast<std::size_t>(w.rows()) != config.hidden_widths[l - 1] ||
            static_cast<std::size_t>(w.cols()) != config.fan_in(l) + 1) {
            throw ConfigError("W^[" + std::to_string(l) + "] has shape " +
                              std::to_string(w.rows()) + "x" + std::to_string(w.cols()) +
                              ", expected " + std::to_string(config.hidden_widths[l - 1]) + "x" +
                              std::to_string(config.fan_in(l) + 1));
        }
    }
    if (static_cast<std::size_t>(params.output.rows()) != config.output_dim ||
        static_cast<std::size_t>(params.output.cols()) != config.hidden_widths.back() + 1) {
        throw ConfigError("output block has the wrong shape");
    }
}

NetworkParams zero_params(const NetworkConfig& config) {
    config.validate();
    NetworkParams p;
    for (std::size_t l = 1; l <= config.depth(); ++l) {
        p.layers.push_back(MatrixXd::Zero(static_cast<Eigen::Index>(config.hidden_widths[l - 1]),
                                          static_cast<Eigen::Index>(config.fan_in(l) + 1)));
    }
    p.output = MatrixXd::Zero(static_cast<Eigen::Index>(config.output_dim),
                              static_cast<Eigen::Index>(config.hidden_widths.back() + 1));
    return p;
}

NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed, double std) {
    if (!(std > 0.0)) throw ConfigError("initialization std must be positive");
    NetworkParams p = zero_params(config);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std);
    p.for_each_block([&](MatrixXd& m) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = normal(rng);
        }
    });
    return p;
}

ForwardResult forward(const NetworkConfig& config, const NetworkParams& params,
                      const VectorXd& x) {
    if (static_cast<std::size_t>(x.size()) != config.input_dim) {
        throw ConfigError("input has length " + std::to_string(x.size()) + ", expected " +
                          std::to_string(config.input_dim));
    }
    validate_params(config, params);
    const BatchTrace t = run_forward(config, params, 1, data_inputs(x.transpose()));
    ForwardResult r;
    r.output = t.output.row(0).transpose();
    for (const auto& z : t.pre) r.cache.pre.push_back(z.row(0).transpose());
    for (const auto& a : t.aug) r.cache.augmented.push_back(a.row(0).transpose());
    return r;
}

MatrixXd predict(const NetworkConfig& config, const NetworkParams& params,
                 const MatrixXd& inputs) {
    validate_params(config, params);
    if (static_cast<std::size_t>(inputs.cols()) != config.input_dim) {
        throw ConfigError("input dimension does not match network input_dim");
    }
    return run_forward(config, params, 1, data_inputs(inputs)).output;
}

MatrixXd layer_inputs(const NetworkConfig& config, const NetworkParams& params,
                      const MatrixXd& inputs, std::size_t layer) {
    config.fan_in(layer);
    validate_params(config, params);
    const BatchTrace t = run_forward(config, params, 1, data_inputs(inputs));
    return t.aug[layer - 1];
}

double loss_mse(const NetworkConfig& config, const NetworkParams& params, const Batch& batch) {
    batch.validate(config);
    const MatrixXd f = predict(config, params, batch.inputs);
    return (f - batch.targets).squaredNorm() / (2.0 * static_cast<double>(batch.size()));
}

LossAndGradients loss_and_gradients(const NetworkConfig& config, const NetworkParams& params,
                                    const Batch& batch) {
    batch.validate(config);
    validate_params(config, params);
    const BatchTrace t = run_forward(config, params, 1, data_inputs(batch.inputs));
    const MatrixXd residuals = t.output - batch.targets;
    LossAndGradients r;
    r.loss = residuals.squaredNorm() / (2.0 * static_cast<double>(batch.size()));
    r.grads = run_backward(config, params, 1, t, residuals, DerivativeMode::exact);
    return r;
}

Gradients grad_closed_form(const NetworkConfig& config, const NetworkParams& params,
                           const Batch& batch) {
    return loss_and_gradients(config, params, batch).grads;
}

Gradients grad_finite_difference(const NetworkConfig& config, const NetworkParams& params,
                                 const Batch& batch, double h) {
    if (!(h >= 1e-7 && h <= 1e-3)) {
        throw PreconditionError("finite-difference step must lie in [1e-7, 1e-3]");
    }
    batch.validate(config);
    validate_params(config, params);
    Gradients g;
    NetworkParams probe = params;
    auto differentiate = [&](MatrixXd& block) {
        MatrixXd out(block.rows(), block.cols());
        for (Eigen::Index r = 0; r < block.rows(); ++r) {
            for (Eigen::Index c = 0; c < block.cols(); ++c) {
                const double orig = block(r, c);
                block(r, c) = orig + h;
                const double up = loss_mse(config, probe, batch);
                block(r, c) = orig - h;
                const double down = loss_mse(config, probe, batch);
                block(r, c) = orig;
                out(r, c) = (up - down) / (2.0 * h);
            }
        }
        return out;
    };
    for (auto& w : probe.layers) g.layers.push_back(differentiate(w));
    g.output = differentiate(probe.output);
    return g;
}

MatrixXd layer_velocity(const NetworkConfig& config, const NetworkParams& params,
                        std::size_t layer, const MatrixXd& inputs_k, const MatrixXd& residuals,
                        DerivativeMode mode) {
    const std::size_t fan = config.fan_in(layer);
    validate_params(config, params);
    if (static_cast<std::size_t>(inputs_k.cols()) != fan + 1) {
        throw ConfigError("layer inputs have the wrong width for layer " + std::to_string(layer));
    }
    if (residuals.rows() != inputs_k.rows() ||
        static_cast<std::size_t>(residuals.cols()) != config.output_dim) {
        throw ConfigError("residuals do not match layer inputs");
    }
    const BatchTrace t = run_forward(config, params, layer, inputs_k);
    const Gradients g = run_backward(config, params, layer, t, residuals, mode);
    return -g.layers[layer - 1];
}

VectorXd neuron_weight(const NetworkParams& params, std::size_t layer, std::size_t neuron) {
    if (layer < 1 || layer > params.layers.size()) {
        throw ConfigError("hidden layer " + std::to_string(layer) + " out of range");
    }
    const auto& w = params.layers[layer - 1];
    if (neuron >= static_cast<std::size_t>(w.rows())) {
        throw ConfigError("neuron " + std::to_string(neuron) + " out of range for layer " +
                          std::to_string(layer));
    }
    return w.row(static_cast<Eigen::Index>(neuron)).transpose();
}

std::vector<VectorXd> layer_weights(const NetworkParams& params, std::size_t layer) {
    if (layer < 1 || layer > params.layers.size()) {
        throw ConfigError("hidden layer " + std::to_string(layer) + " out of range");
    }
    const auto& w = params.layers[layer - 1];
    std::vector<VectorXd> out;
    out.reserve(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index j = 0; j < w.rows(); ++j) out.push_back(w.row(j).transpose());
    return out;
}

}  // namespace condense
