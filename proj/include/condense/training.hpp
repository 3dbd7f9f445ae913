#pragma once

#include "condense/network.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace condense {

enum class OptimizerKind { gd, adam };

struct OptimizerSpec {
    OptimizerKind kind = OptimizerKind::adam;
    double lr = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    void validate() const;
};

/// Adam moments, zero-initialized to the parameter shapes.
struct AdamState {
    ParamBlocks m;
    ParamBlocks v;
    std::size_t step = 0;

    static AdamState zeros_like(const ParamBlocks& params);
};

/// theta - lr * grad.
NetworkParams gd_step(const NetworkParams& params, const Gradients& grads, double lr);

/// One bias-corrected Adam update. `state` is advanced in place.
NetworkParams adam_step(AdamState& state, const NetworkParams& params, const Gradients& grads,
                        const OptimizerSpec& spec);

/// Fraction of the initial loss that ends the initial stage.
inline constexpr double kInitialStageFraction = 0.7;

struct StopRule {
    std::size_t max_epochs = 100;
    bool initial_stage = false;           // stop at the first epoch with loss <= 0.7 L0
    std::vector<std::size_t> snapshot_epochs;
};

struct Snapshot {
    std::size_t epoch = 0;
    NetworkParams params;
};

enum class StopReason { max_epochs, initial_stage };

struct TrainLog {
    /// loss_history[e] is the loss of the parameters after e steps;
    /// entry 0 is the untrained loss.
    std::vector<double> loss_history;
    std::vector<Snapshot> snapshots;
    /// First epoch e >= 1 with loss_history[e] <= 0.7 loss_history[0].
    std::optional<std::size_t> initial_stage_end;
    StopReason stop_reason = StopReason::max_epochs;

    std::size_t epochs_run() const noexcept {
        return loss_history.empty() ? 0 : loss_history.size() - 1;
    }
};

struct TrainResult {
    NetworkParams params;
    TrainLog log;
};

/// Full-batch training. Each epoch is one optimizer step on the whole batch.
///
/// The parameters of the epoch just before the initial-stage boundary are
/// always added to the snapshots; with `stop.initial_stage` set, training
/// also halts at the boundary. Throws DivergenceError on a non-finite loss.
TrainResult train(const NetworkConfig& config, const NetworkParams& params, const Batch& batch,
                  const OptimizerSpec& opt, const StopRule& stop);

/// Epoch of the last analysis snapshot inside the initial stage.
std::size_t analysis_epoch(const TrainLog& log);

struct RadialAngularRate {
    double r_dot = 0.0;
    Eigen::VectorXd u_dot;
};

/// r_dot = u . w_dot and u_dot = (w_dot - (w_dot . u) u) / |w| with u = w / |w|.
/// Throws SingularityError at w = 0.
RadialAngularRate radial_angular(const Eigen::VectorXd& w, const Eigen::VectorXd& w_dot);

std::string to_string(OptimizerKind kind);
std::string to_string(StopReason reason);

}  // namespace condense
