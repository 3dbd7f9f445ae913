#include "condense/training.hpp"

#include "condense/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace condense {

namespace {

void require_same_shapes(const ParamBlocks& a, const ParamBlocks& b) {
    bool ok = a.layers.size() == b.layers.size() && a.output.rows() == b.output.rows() &&
              a.output.cols() == b.output.cols();
    for (std::size_t l = 0; ok && l < a.layers.size(); ++l) {
        ok = a.layers[l].rows() == b.layers[l].rows() && a.layers[l].cols() == b.layers[l].cols();
    }
    if (!ok) throw ConfigError("parameter and gradient shapes differ");
}

}  // namespace

void OptimizerSpec::validate() const {
    if (!(lr >= 0.0) || !std::isfinite(lr)) throw ConfigError("learning rate must be non-negative");
    if (kind == OptimizerKind::adam) {
        if (!(adam_beta1 > 0.0 && adam_beta1 < 1.0)) throw ConfigError("adam beta1 must lie in (0,1)");
        if (!(adam_beta2 > 0.0 && adam_beta2 < 1.0)) throw ConfigError("adam beta2 must lie in (0,1)");
        if (!(adam_eps > 0.0)) throw ConfigError("adam eps must be positive");
    }
}

AdamState AdamState::zeros_like(const ParamBlocks& params) {
    AdamState s;
    for (const auto& w : params.layers) {
        s.m.layers.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        s.v.layers.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    s.m.output = Eigen::MatrixXd::Zero(params.output.rows(), params.output.cols());
    s.v.output = s.m.output;
    return s;
}

NetworkParams gd_step(const NetworkParams& params, const Gradients& grads, double lr) {
    require_same_shapes(params, grads);
    NetworkParams next = params;
    for (std::size_t l = 0; l < next.layers.size(); ++l) next.layers[l] -= lr * grads.layers[l];
    next.output -= lr * grads.output;
    return next;
}

NetworkParams adam_step(AdamState& state, const NetworkParams& params, const Gradients& grads,
                        const OptimizerSpec& spec) {
    require_same_shapes(params, grads);
    require_same_shapes(params, state.m);
    ++state.step;
    const double b1 = spec.adam_beta1;
    const double b2 = spec.adam_beta2;
    const double t = static_cast<double>(state.step);
    const double c1 = 1.0 - std::pow(b1, t);
    const double c2 = 1.0 - std::pow(b2, t);

    NetworkParams next = params;
    auto update = [&](Eigen::MatrixXd& theta, Eigen::MatrixXd& m, Eigen::MatrixXd& v,
                      const Eigen::MatrixXd& g) {
        m = b1 * m + (1.0 - b1) * g;
        v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
        const Eigen::ArrayXXd m_hat = m.array() / c1;
        const Eigen::ArrayXXd v_hat = v.array() / c2;
        theta.array() -= spec.lr * m_hat / (v_hat.sqrt() + spec.adam_eps);
    };
    for (std::size_t l = 0; l < next.layers.size(); ++l) {
        update(next.layers[l], state.m.layers[l], state.v.layers[l], grads.layers[l]);
    }
    update(next.output, state.m.output, state.v.output, grads.output);
    return next;
}

TrainResult train(const NetworkConfig& config, const NetworkParams& params, const Batch& batch,
                  const OptimizerSpec& opt, const StopRule& stop) {
    config.validate();
    opt.validate();
    batch.validate(config);
    validate_params(config, params);
    if (stop.max_epochs < 1) throw ConfigError("max_epochs must be at least 1");

    auto wants_snapshot = [&stop](std::size_t epoch) {
        return std::find(stop.snapshot_epochs.begin(), stop.snapshot_epochs.end(), epoch) !=
               stop.snapshot_epochs.end();
    };

    TrainResult result;
    TrainLog& log = result.log;
    NetworkParams theta = params;
    NetworkParams previous = params;
    AdamState adam = AdamState::zeros_like(params);

    for (std::size_t epoch = 0;; ++epoch) {
        LossAndGradients lg = loss_and_gradients(config, theta, batch);
        if (!std::isfinite(lg.loss)) {
            throw DivergenceError(epoch, "loss became non-finite at epoch " + std::to_string(epoch));
        }
        log.loss_history.push_back(lg.loss);
        if (wants_snapshot(epoch)) log.snapshots.push_back({epoch, theta});

        if (epoch >= 1 && !log.initial_stage_end &&
            lg.loss <= kInitialStageFraction * log.loss_history.front()) {
            log.initial_stage_end = epoch;
            if (!wants_snapshot(epoch - 1)) log.snapshots.push_back({epoch - 1, previous});
            if (stop.initial_stage) {
                log.stop_reason = StopReason::initial_stage;
                break;
            }
        }
        if (epoch == stop.max_epochs) break;

        previous = theta;
        if (opt.kind == OptimizerKind::gd) {
            theta = gd_step(theta, lg.grads, opt.lr);
        } else {
            theta = adam_step(adam, theta, lg.grads, opt);
        }
    }
    std::sort(log.snapshots.begin(), log.snapshots.end(),
              [](const Snapshot& a, const Snapshot& b) { return a.epoch < b.epoch; });
    result.params = std::move(theta);
    return result;
}

std::size_t analysis_epoch(const TrainLog& log) {
    if (log.initial_stage_end) return *log.initial_stage_end - 1;
    return log.epochs_run();
}

RadialAngularRate radial_angular(const Eigen::VectorXd& w, const Eigen::VectorXd& w_dot) {
    if (w.size() != w_dot.size()) throw ConfigError("weight and velocity lengths differ");
    const double r = w.norm();
    if (r == 0.0) throw SingularityError("direction undefined at the origin");
    const Eigen::VectorXd u = w / r;
    RadialAngularRate out;
    out.r_dot = u.dot(w_dot);
    out.u_dot = (w_dot - out.r_dot * u) / r;
    return out;
}

std::string to_string(OptimizerKind kind) {
    return kind == OptimizerKind::gd ? "gd" : "adam";
}

std::string to_string(StopReason reason) {
    return reason == StopReason::initial_stage ? "initial_stage" : "max_epochs";
}

}  // namespace condense
