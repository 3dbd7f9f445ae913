#pragma once

#include "condense/activations.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace condense {

/// Topology of a fully-connected network d - m_1 - ... - m_L - d_out.
///
/// Hidden layers are numbered 1..L. Every layer input is augmented with a
/// trailing constant 1, so W^[l] has shape m_l x (m_{l-1} + 1) and its last
/// column is the bias. With `residual` set, hidden layers l >= 2 compute
/// h_l = sigma(W^[l] x^[l-1]) + h_{l-1}; the first hidden layer has no skip
/// because its input is the data.
struct NetworkConfig {
    std::size_t input_dim = 1;
    std::vector<std::size_t> hidden_widths;
    std::size_t output_dim = 1;
    std::vector<ActivationSpec> activations;
    bool residual = false;
    double alpha = 1.0;

    std::size_t depth() const noexcept { return hidden_widths.size(); }
    /// Width of layer l's input, without the bias slot (layer 1 -> d).
    std::size_t fan_in(std::size_t layer) const;
    /// Throws ConfigError when the invariants do not hold.
    void validate() const;
};

/// Parameter blocks shared by NetworkParams and Gradients.
struct ParamBlocks {
    std::vector<Eigen::MatrixXd> layers;  // W^[1..L], index 0 holds W^[1]
    Eigen::MatrixXd output;               // a, shape d_out x (m_L + 1)

    std::size_t size() const;

    template <typename F>
    void for_each_block(F&& f) {
        for (auto& w : layers) f(w);
        f(output);
    }
    template <typename F>
    void for_each_block(F&& f) const {
        for (const auto& w : layers) f(w);
        f(output);
    }
};

struct NetworkParams : ParamBlocks {};
struct Gradients : ParamBlocks {};

/// Training data: n x d inputs and n x d_out targets.
struct Batch {
    Eigen::MatrixXd inputs;
    Eigen::MatrixXd targets;

    std::size_t size() const noexcept { return static_cast<std::size_t>(inputs.rows()); }
    void validate(const NetworkConfig& config) const;
};

/// Pre-activations z^[l] and augmented activations x^[l] of one forward pass.
struct ForwardCache {
    std::vector<Eigen::VectorXd> pre;        // z^[1..L], index 0 holds z^[1]
    std::vector<Eigen::VectorXd> augmented;  // x^[0..L]
};

struct ForwardResult {
    Eigen::VectorXd output;
    ForwardCache cache;
};

/// Which derivative backpropagation uses at layers >= the analyzed one.
enum class DerivativeMode { exact, leading_order };

/// Throws ConfigError if the parameter shapes do not match `config`.
void validate_params(const NetworkConfig& config, const ParamBlocks& params);

/// Every entry i.i.d. N(0, std^2) from a seeded mt19937_64, filled layer by
/// layer in row-major order, output block last.
NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed, double std);

/// Zero-filled blocks with the shapes of `config`.
NetworkParams zero_params(const NetworkConfig& config);

ForwardResult forward(const NetworkConfig& config, const NetworkParams& params,
                      const Eigen::VectorXd& x);

/// Network outputs for every row of `inputs` (n x d_out).
Eigen::MatrixXd predict(const NetworkConfig& config, const NetworkParams& params,
                        const Eigen::MatrixXd& inputs);

/// Augmented inputs x_i^[k-1] feeding hidden layer k, one row per sample.
Eigen::MatrixXd layer_inputs(const NetworkConfig& config, const NetworkParams& params,
                             const Eigen::MatrixXd& inputs, std::size_t layer);

/// (1/2n) sum_i |f(x_i) - y_i|^2.
double loss_mse(const NetworkConfig& config, const NetworkParams& params, const Batch& batch);

struct LossAndGradients {
    double loss = 0.0;
    Gradients grads;
};

/// Loss and its gradient from the backward recursion
/// Lambda_L = a . sigma'(z^[L]), Lambda_l = (W^[l+1]^T Lambda_{l+1}) . sigma'(z^[l]),
/// dR/dW^[l] = (1/n) sum_i e_i Lambda_l x_i^[l-1]^T, plus the identity skip
/// term for residual layers.
LossAndGradients loss_and_gradients(const NetworkConfig& config, const NetworkParams& params,
                                    const Batch& batch);

Gradients grad_closed_form(const NetworkConfig& config, const NetworkParams& params,
                           const Batch& batch);

/// Central differences (R(theta + h e) - R(theta - h e)) / 2h for every
/// parameter; h in [1e-7, 1e-3].
Gradients grad_finite_difference(const NetworkConfig& config, const NetworkParams& params,
                                 const Batch& batch, double h);

/// Velocity -dR/dW^[k] of hidden layer k for fixed residuals.
///
/// `inputs_k` holds x_i^[k-1] row-wise and `residuals` holds e_i row-wise.
/// The layers from k upwards are re-evaluated from `inputs_k`. In
/// leading_order mode every sigma' at layers >= k is replaced by its leading
/// monomial at the origin.
Eigen::MatrixXd layer_velocity(const NetworkConfig& config, const NetworkParams& params,
                               std::size_t layer, const Eigen::MatrixXd& inputs_k,
                               const Eigen::MatrixXd& residuals, DerivativeMode mode);

/// Copy of row j of W^[k] (bias included). k is 1-based, j is 0-based.
Eigen::VectorXd neuron_weight(const NetworkParams& params, std::size_t layer, std::size_t neuron);

/// All input weights of hidden layer k, one vector per neuron.
std::vector<Eigen::VectorXd> layer_weights(const NetworkParams& params, std::size_t layer);

}  // namespace condense
