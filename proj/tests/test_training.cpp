#include "condense/config.hpp"
#include "condense/errors.hpp"
#include "condense/presets.hpp"
#include "condense/training.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace condense;

namespace {

NetworkConfig small_config(const ActivationSpec& act = ActivationSpec::tanh()) {
    NetworkConfig c;
    c.input_dim = 2;
    c.hidden_widths = {6};
    c.activations = {act};
    return c;
}

Batch small_batch(std::uint64_t seed, std::size_t n = 12) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Batch b;
    b.inputs.resize(static_cast<Eigen::Index>(n), 2);
    b.targets.resize(static_cast<Eigen::Index>(n), 1);
    for (Eigen::Index i = 0; i < b.inputs.size(); ++i) b.inputs.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < b.targets.rows(); ++i) {
        b.targets(i, 0) = std::sin(2 * b.inputs(i, 0)) + 0.5 * b.inputs(i, 1) + 1.0;
    }
    return b;
}

NetworkParams scalar_params(double v) {
    NetworkParams p;
    p.output = Eigen::MatrixXd::Constant(1, 1, v);
    return p;
}

Gradients scalar_grad(double g) {
    Gradients out;
    out.output = Eigen::MatrixXd::Constant(1, 1, g);
    return out;
}

}  // namespace

TEST(Training, GdStepExamples) {
    const auto c = small_config();
    const NetworkParams p = init_params(c, 1, 0.3);
    Gradients zero;
    zero.layers = {Eigen::MatrixXd::Zero(6, 3)};
    zero.output = Eigen::MatrixXd::Zero(1, 7);
    const NetworkParams same = gd_step(p, zero, 0.5);
    EXPECT_EQ(same.layers[0], p.layers[0]);
    EXPECT_EQ(same.output, p.output);

    Gradients g;
    g.layers = {Eigen::MatrixXd::Constant(6, 3, 0.25)};
    g.output = Eigen::MatrixXd::Constant(1, 7, -1.5);
    const NetworkParams one = gd_step(p, g, 1.0);
    EXPECT_EQ(one.layers[0], (p.layers[0].array() - 0.25).matrix());
    EXPECT_EQ(one.output, (p.output.array() + 1.5).matrix());

    const NetworkParams twice = gd_step(gd_step(p, g, 0.1), g, 0.1);
    const NetworkParams doubled = gd_step(p, g, 0.2);
    EXPECT_LT((twice.layers[0] - doubled.layers[0]).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((twice.output - doubled.output).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Training, AdamFirstStepMovesByLearningRate) {
    OptimizerSpec spec;
    spec.lr = 0.01;
    NetworkParams p;
    p.output = Eigen::RowVector3d(1.0, 2.0, 3.0);
    Gradients g;
    g.output = Eigen::RowVector3d(0.3, -40.0, 1e-3);
    AdamState state = AdamState::zeros_like(p);
    const NetworkParams next = adam_step(state, p, g, spec);
    const Eigen::RowVector3d delta = next.output - p.output;
    EXPECT_NEAR(delta[0], -0.01, 1e-8);
    EXPECT_NEAR(delta[1], 0.01, 1e-8);
    EXPECT_NEAR(delta[2], -0.01, 1e-6);
    EXPECT_EQ(state.step, 1u);
}

TEST(Training, AdamZeroGradientKeepsParams) {
    OptimizerSpec spec;
    NetworkParams p = scalar_params(0.7);
    AdamState state = AdamState::zeros_like(p);
    for (int i = 0; i < 50; ++i) p = adam_step(state, p, scalar_grad(0.0), spec);
    EXPECT_EQ(p.output(0, 0), 0.7);
}

TEST(Training, AdamTwoStepsByHand) {
    OptimizerSpec spec;
    spec.lr = 0.1;
    const double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    double theta = 1.0, m = 0.0, v = 0.0;
    const double grads[] = {0.5, -0.2};
    for (int t = 1; t <= 2; ++t) {
        const double gt = grads[t - 1];
        m = b1 * m + (1 - b1) * gt;
        v = b2 * v + (1 - b2) * gt * gt;
        const double mhat = m / (1 - std::pow(b1, t));
        const double vhat = v / (1 - std::pow(b2, t));
        theta -= 0.1 * mhat / (std::sqrt(vhat) + eps);
    }
    NetworkParams p = scalar_params(1.0);
    AdamState state = AdamState::zeros_like(p);
    p = adam_step(state, p, scalar_grad(0.5), spec);
    p = adam_step(state, p, scalar_grad(-0.2), spec);
    EXPECT_NEAR(p.output(0, 0), theta, 1e-15);
}

TEST(Training, StepsAreDeterministicAndShapePreserving) {
    const auto c = small_config();
    const Batch b = small_batch(3);
    const NetworkParams p = init_params(c, 3, 0.2);
    const Gradients g = grad_closed_form(c, p, b);
    OptimizerSpec spec;
    AdamState s1 = AdamState::zeros_like(p), s2 = AdamState::zeros_like(p);
    const NetworkParams a = adam_step(s1, p, g, spec);
    const NetworkParams a2 = adam_step(s2, p, g, spec);
    EXPECT_EQ(a.layers[0], a2.layers[0]);
    EXPECT_EQ(a.output, a2.output);
    EXPECT_NO_THROW(validate_params(c, a));
    EXPECT_NO_THROW(validate_params(c, gd_step(p, g, 0.1)));
}

TEST(Training, ZeroLearningRateKeepsLossConstant) {
    const auto c = small_config();
    const Batch b = small_batch(4);
    OptimizerSpec opt;
    opt.lr = 0.0;
    StopRule stop;
    stop.max_epochs = 30;
    stop.initial_stage = true;
    const TrainResult r = train(c, init_params(c, 4, 0.1), b, opt, stop);
    ASSERT_EQ(r.log.loss_history.size(), 31u);
    for (double l : r.log.loss_history) EXPECT_EQ(l, r.log.loss_history[0]);
    EXPECT_FALSE(r.log.initial_stage_end.has_value());
    EXPECT_EQ(r.log.stop_reason, StopReason::max_epochs);
    EXPECT_EQ(analysis_epoch(r.log), 30u);
}

TEST(Training, Fig2aStaysInInitialStage) {
    const ExperimentConfig cfg = parse_config(*preset_text("fig2a"));
    const Batch b = load_data(cfg);
    const NetworkConfig net = network_config(cfg, b);
    const TrainResult r =
        train(net, init_params(net, split_seed(cfg.seed).init, cfg.network.init_std), b, cfg.optimizer, cfg.run);
    ASSERT_EQ(r.log.epochs_run(), 100u);
    EXPECT_GE(r.log.loss_history[100], 0.7 * r.log.loss_history[0]);
    EXPECT_FALSE(r.log.initial_stage_end.has_value());
}

TEST(Training, LargeLearningRateLeavesInitialStageEarly) {
    ExperimentConfig cfg = parse_config(*preset_text("fig2a"));
    cfg.optimizer.lr = 0.05;
    cfg.run.initial_stage = true;
    const Batch b = load_data(cfg);
    const NetworkConfig net = network_config(cfg, b);
    const TrainResult r =
        train(net, init_params(net, split_seed(cfg.seed).init, cfg.network.init_std), b, cfg.optimizer, cfg.run);
    ASSERT_TRUE(r.log.initial_stage_end.has_value());
    EXPECT_LT(*r.log.initial_stage_end, 100u);
    EXPECT_EQ(r.log.stop_reason, StopReason::initial_stage);
    EXPECT_EQ(r.log.epochs_run(), *r.log.initial_stage_end);
}

TEST(Training, InitialStageEndIsFirstCrossing) {
    const auto c = small_config();
    const Batch b = small_batch(5);
    OptimizerSpec opt;
    opt.lr = 0.02;
    StopRule stop;
    stop.max_epochs = 200;
    stop.snapshot_epochs = {10, 50};
    const TrainResult r = train(c, init_params(c, 5, 0.05), b, opt, stop);
    const auto& h = r.log.loss_history;
    std::optional<std::size_t> first;
    for (std::size_t e = 1; e < h.size() && !first; ++e) {
        if (h[e] <= 0.7 * h[0]) first = e;
    }
    ASSERT_TRUE(first.has_value());
    EXPECT_EQ(r.log.initial_stage_end, first);
    // training continues past the boundary when not asked to stop
    EXPECT_EQ(r.log.epochs_run(), 200u);
    std::vector<std::size_t> epochs;
    for (const auto& s : r.log.snapshots) epochs.push_back(s.epoch);
    EXPECT_TRUE(std::is_sorted(epochs.begin(), epochs.end()));
    EXPECT_NE(std::find(epochs.begin(), epochs.end(), *first - 1), epochs.end());
    EXPECT_NE(std::find(epochs.begin(), epochs.end(), 50u), epochs.end());
    EXPECT_EQ(analysis_epoch(r.log), *first - 1);
}

TEST(Training, InitialStageAbsentIffLossStaysAbove) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto c = small_config();
        const Batch b = small_batch(seed);
        OptimizerSpec opt;
        opt.lr = 0.002 * static_cast<double>(seed);
        StopRule stop;
        stop.max_epochs = 40;
        const TrainLog log = train(c, init_params(c, seed, 0.05), b, opt, stop).log;
        const double lowest = *std::min_element(log.loss_history.begin(), log.loss_history.end());
        EXPECT_EQ(!log.initial_stage_end.has_value(), lowest > 0.7 * log.loss_history[0]) << seed;
    }
}

TEST(Training, SnapshotsAtRequestedEpochs) {
    const auto c = small_config();
    const Batch b = small_batch(6);
    OptimizerSpec opt;
    opt.lr = 1e-4;
    StopRule stop;
    stop.max_epochs = 20;
    stop.snapshot_epochs = {0, 5, 20};
    const NetworkParams init = init_params(c, 6, 0.01);
    const TrainResult r = train(c, init, b, opt, stop);
    ASSERT_EQ(r.log.snapshots.size(), 3u);
    EXPECT_EQ(r.log.snapshots[0].epoch, 0u);
    EXPECT_EQ(r.log.snapshots[0].params.output, init.output);
    EXPECT_EQ(r.log.snapshots[2].params.output, r.params.output);
}

TEST(Training, GradientDescentIsMonotoneForSmallSteps) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto c = small_config(seed % 2 ? ActivationSpec::xtanh() : ActivationSpec::tanh());
        const Batch b = small_batch(seed + 10);
        OptimizerSpec opt;
        opt.kind = OptimizerKind::gd;
        StopRule stop;
        stop.max_epochs = 100;
        bool monotone = false;
        for (double lr = 0.5; lr > 1e-6 && !monotone; lr /= 2) {
            opt.lr = lr;
            const TrainLog log = train(c, init_params(c, seed, 0.3), b, opt, stop).log;
            monotone = std::is_sorted(log.loss_history.rbegin(), log.loss_history.rend());
        }
        EXPECT_TRUE(monotone) << seed;
    }
}

TEST(Training, DivergenceReportsEpoch) {
    const auto c = small_config(ActivationSpec::softplus());
    const Batch b = small_batch(7);
    OptimizerSpec opt;
    opt.kind = OptimizerKind::gd;
    opt.lr = 1e6;
    StopRule stop;
    stop.max_epochs = 100;
    try {
        train(c, init_params(c, 7, 1.0), b, opt, stop);
        FAIL() << "expected divergence";
    } catch (const DivergenceError& e) {
        EXPECT_GT(e.epoch(), 0u);
        EXPECT_LE(e.epoch(), 100u);
    }
}

TEST(Training, RejectsInvalidSettings) {
    const auto c = small_config();
    const Batch b = small_batch(8);
    OptimizerSpec opt;
    StopRule stop;
    stop.max_epochs = 0;
    EXPECT_THROW(train(c, init_params(c, 1, 0.1), b, opt, stop), ConfigError);
    stop.max_epochs = 1;
    opt.lr = -1.0;
    EXPECT_THROW(train(c, init_params(c, 1, 0.1), b, opt, stop), ConfigError);
    opt.lr = 0.1;
    opt.adam_beta1 = 1.0;
    EXPECT_THROW(opt.validate(), ConfigError);
}

TEST(Training, RadialAngularExamples) {
    const Eigen::Vector3d w(1.0, 2.0, 2.0);
    const RadialAngularRate par = radial_angular(w, -2.0 * w);
    EXPECT_LT(par.u_dot.norm(), 1e-15);
    EXPECT_NEAR(par.r_dot, -6.0, 1e-14);

    const Eigen::Vector3d perp(2.0, -1.0, 0.0);
    const RadialAngularRate rot = radial_angular(w, perp);
    EXPECT_NEAR(rot.r_dot, 0.0, 1e-15);
    EXPECT_NEAR(rot.u_dot.norm(), perp.norm() / 3.0, 1e-15);

    EXPECT_THROW(radial_angular(Eigen::Vector3d::Zero(), perp), SingularityError);
}

TEST(Training, RadialAngularReconstructs) {
    std::mt19937_64 rng(16);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        Eigen::VectorXd w(5), wd(5);
        for (int i = 0; i < 5; ++i) {
            w[i] = g(rng);
            wd[i] = g(rng);
        }
        const RadialAngularRate ra = radial_angular(w, wd);
        const Eigen::VectorXd u = w.normalized();
        EXPECT_LT((ra.r_dot * u + w.norm() * ra.u_dot - wd).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT(std::abs(ra.u_dot.dot(u)), 1e-10);
    }
}

TEST(Training, AngularRateScalesInverselyWithRadius) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (double eps : {1e-1, 1e-3, 1e-6}) {
        Eigen::VectorXd w(4), wd(4);
        for (int i = 0; i < 4; ++i) {
            w[i] = g(rng);
            wd[i] = g(rng);
        }
        w = eps * w.normalized();
        const RadialAngularRate ra = radial_angular(w, wd);
        const double ratio = ra.u_dot.norm() * eps / wd.norm();
        EXPECT_GT(ratio, 1e-3);
        EXPECT_LE(ratio, 1.0 + 1e-12);
    }
}
