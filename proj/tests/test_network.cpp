#include "condense/errors.hpp"
#include "condense/network.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace condense;

namespace {

NetworkConfig make_config(std::size_t d, std::vector<std::size_t> widths, std::size_t d_out,
                          const ActivationSpec& act, bool residual = false) {
    NetworkConfig c;
    c.input_dim = d;
    c.hidden_widths = std::move(widths);
    c.output_dim = d_out;
    c.activations.assign(c.hidden_widths.size(), act);
    c.residual = residual;
    return c;
}

Batch random_batch(std::mt19937_64& rng, std::size_t n, std::size_t d, std::size_t d_out) {
    std::normal_distribution<double> g;
    Batch b;
    b.inputs.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    b.targets.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d_out));
    for (Eigen::Index i = 0; i < b.inputs.size(); ++i) b.inputs.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < b.targets.size(); ++i) b.targets.data()[i] = g(rng);
    return b;
}

// Straight loop-nest evaluation, independent of the library's Eigen code.
std::vector<double> oracle_forward(const NetworkConfig& c, const NetworkParams& p,
                                   const std::vector<double>& x) {
    std::vector<double> h = x;
    std::vector<double> prev_hidden;
    for (std::size_t l = 0; l < c.depth(); ++l) {
        const auto& w = p.layers[l];
        std::vector<double> next(static_cast<std::size_t>(w.rows()));
        for (Eigen::Index r = 0; r < w.rows(); ++r) {
            double z = w(r, w.cols() - 1);
            for (std::size_t k = 0; k < h.size(); ++k) z += w(r, static_cast<Eigen::Index>(k)) * h[k];
            next[static_cast<std::size_t>(r)] = eval(c.activations[l], z);
        }
        if (c.residual && l >= 1) {
            for (std::size_t k = 0; k < next.size(); ++k) next[k] += h[k];
        }
        h = next;
    }
    std::vector<double> out(c.output_dim);
    for (std::size_t o = 0; o < c.output_dim; ++o) {
        const auto r = static_cast<Eigen::Index>(o);
        double s = p.output(r, p.output.cols() - 1);
        for (std::size_t k = 0; k < h.size(); ++k) s += p.output(r, static_cast<Eigen::Index>(k)) * h[k];
        out[o] = s / c.alpha;
    }
    return out;
}

void expect_grad_match(const Gradients& a, const Gradients& b, double rel, double floor,
                       const std::string& what) {
    auto check = [&](const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
        ASSERT_EQ(x.rows(), y.rows());
        ASSERT_EQ(x.cols(), y.cols());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const double u = x.data()[i], v = y.data()[i];
            const double diff = std::abs(u - v);
            const double scale = std::max(std::abs(u), std::abs(v));
            EXPECT_TRUE(diff <= floor || diff < rel * scale)
                << what << ": " << u << " vs " << v;
        }
    };
    ASSERT_EQ(a.layers.size(), b.layers.size());
    for (std::size_t l = 0; l < a.layers.size(); ++l) check(a.layers[l], b.layers[l]);
    check(a.output, b.output);
}

}  // namespace

TEST(Network, InitParamsStatistics) {
    const auto c = make_config(5, {50, 50, 50}, 1, ActivationSpec::tanh());
    const NetworkParams p = init_params(c, 42, 0.005);
    double sum = 0, sq = 0;
    std::size_t n = 0;
    p.for_each_block([&](const Eigen::MatrixXd& m) {
        sum += m.sum();
        sq += m.squaredNorm();
        n += static_cast<std::size_t>(m.size());
    });
    ASSERT_GE(n, 5000u);
    const double mean = sum / static_cast<double>(n);
    const double sd = std::sqrt(sq / static_cast<double>(n) - mean * mean);
    EXPECT_NEAR(sd, 0.005, 0.0005);
}

TEST(Network, InitParamsDeterministicPerSeed) {
    const auto c = make_config(3, {4, 4}, 2, ActivationSpec::tanh());
    const NetworkParams a = init_params(c, 7, 0.1);
    const NetworkParams b = init_params(c, 7, 0.1);
    const NetworkParams other = init_params(c, 8, 0.1);
    for (std::size_t l = 0; l < a.layers.size(); ++l) EXPECT_EQ(a.layers[l], b.layers[l]);
    EXPECT_EQ(a.output, b.output);
    EXPECT_NE(a.layers[0], other.layers[0]);
    EXPECT_EQ(a.layers[0].rows(), 4);
    EXPECT_EQ(a.layers[0].cols(), 4);
    EXPECT_EQ(a.layers[1].cols(), 5);
    EXPECT_EQ(a.output.rows(), 2);
    EXPECT_EQ(a.output.cols(), 5);
    EXPECT_THROW(init_params(c, 1, 0.0), ConfigError);
}

TEST(Network, ZeroNetworkOutputsZero) {
    const auto c = make_config(3, {5, 5}, 2, ActivationSpec::xtanh());
    const ForwardResult r = forward(c, zero_params(c), Eigen::Vector3d(0.3, -1.0, 2.0));
    EXPECT_EQ(r.output, Eigen::Vector2d::Zero());
}

TEST(Network, SingleNeuronIdentityWiring) {
    const auto c = make_config(1, {1}, 1, ActivationSpec::tanh());
    NetworkParams p = zero_params(c);
    p.layers[0](0, 0) = 1.0;
    p.output(0, 0) = 1.0;
    EXPECT_DOUBLE_EQ(forward(c, p, Eigen::VectorXd::Constant(1, 0.3)).output[0], std::tanh(0.3));
}

TEST(Network, ForwardCacheHoldsAugmentedActivations) {
    const auto c = make_config(2, {3}, 1, ActivationSpec::tanh());
    std::mt19937_64 rng(3);
    const NetworkParams p = init_params(c, 3, 0.5);
    const ForwardResult r = forward(c, p, Eigen::Vector2d(0.1, 0.2));
    ASSERT_EQ(r.cache.augmented.size(), 2u);
    EXPECT_EQ(r.cache.augmented[0], Eigen::Vector3d(0.1, 0.2, 1.0));
    EXPECT_EQ(r.cache.augmented[1].size(), 4);
    EXPECT_EQ(r.cache.augmented[1][3], 1.0);
    ASSERT_EQ(r.cache.pre.size(), 1u);
    EXPECT_EQ(r.cache.pre[0].size(), 3);
}

TEST(Network, ForwardMatchesLoopNestOracle) {
    std::mt19937_64 rng(2024);
    const std::vector<ActivationSpec> acts = {ActivationSpec::tanh(), ActivationSpec::xtanh(),
                                              ActivationSpec::x2tanh(), ActivationSpec::sigmoid(),
                                              ActivationSpec::softplus(), ActivationSpec::relu()};
    std::normal_distribution<double> g;
    for (int t = 0; t < 60; ++t) {
        const bool residual = t % 2 == 1;
        const std::size_t depth = 1 + static_cast<std::size_t>(t % 3);
        std::vector<std::size_t> widths(depth, 4 + static_cast<std::size_t>(t % 3));
        if (!residual && depth > 1) widths[0] = 3;
        NetworkConfig c = make_config(3, widths, 2, acts[static_cast<std::size_t>(t) % acts.size()], residual);
        c.alpha = 1.0 + 0.25 * (t % 4);
        const NetworkParams p = init_params(c, static_cast<std::uint64_t>(t), 0.3);
        std::vector<double> x = {g(rng), g(rng), g(rng)};
        const Eigen::VectorXd out = forward(c, p, Eigen::Map<Eigen::VectorXd>(x.data(), 3)).output;
        const auto ref = oracle_forward(c, p, x);
        for (std::size_t o = 0; o < 2; ++o) EXPECT_NEAR(out[static_cast<Eigen::Index>(o)], ref[o], 1e-12);
    }
}

TEST(Network, ForwardIsDeterministic) {
    const auto c = make_config(2, {6, 6}, 1, ActivationSpec::softplus(), true);
    const NetworkParams p = init_params(c, 5, 0.4);
    const Eigen::Vector2d x(0.7, -0.2);
    EXPECT_EQ(forward(c, p, x).output, forward(c, p, x).output);
}

TEST(Network, ForwardRejectsWrongInputLength) {
    const auto c = make_config(2, {3}, 1, ActivationSpec::tanh());
    EXPECT_THROW(forward(c, zero_params(c), Eigen::Vector3d::Zero()), ConfigError);
}

TEST(Network, ResidualRequiresEqualWidths) {
    auto c = make_config(2, {3, 4}, 1, ActivationSpec::tanh(), true);
    EXPECT_THROW(c.validate(), ConfigError);
    c.residual = false;
    EXPECT_NO_THROW(c.validate());
    c.activations.pop_back();
    EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Network, LossExamples) {
    const auto c = make_config(1, {2}, 1, ActivationSpec::tanh());
    Batch b;
    b.inputs = Eigen::Vector2d(0.5, -0.5);
    b.targets = Eigen::Vector2d(3.0, -1.0);
    EXPECT_DOUBLE_EQ(loss_mse(c, zero_params(c), b), (9.0 + 1.0) / 4.0);

    // f == 1 everywhere through the output bias, y = (0, -1): e = (1, 2)
    NetworkParams p = zero_params(c);
    p.output(0, 2) = 1.0;
    b.targets = Eigen::Vector2d(0.0, -1.0);
    EXPECT_DOUBLE_EQ(loss_mse(c, p, b), 1.25);

    b.targets = predict(c, init_params(c, 1, 0.3), b.inputs);
    EXPECT_EQ(loss_mse(c, init_params(c, 1, 0.3), b), 0.0);
}

TEST(Network, MultiOutputLossSumsComponents) {
    const auto c = make_config(1, {2}, 2, ActivationSpec::tanh());
    Batch b;
    b.inputs = Eigen::MatrixXd::Constant(1, 1, 0.2);
    b.targets = Eigen::RowVector2d(1.0, 2.0);
    EXPECT_DOUBLE_EQ(loss_mse(c, zero_params(c), b), 0.5 * (1.0 + 4.0));
}

TEST(Network, ZeroNetworkGradientOnlyOutputBias) {
    const auto c = make_config(2, {4}, 1, ActivationSpec::xtanh());
    std::mt19937_64 rng(9);
    const Batch b = random_batch(rng, 6, 2, 1);
    const Gradients g = grad_closed_form(c, zero_params(c), b);
    EXPECT_EQ(g.layers[0].cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(g.output.leftCols(4).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_NEAR(g.output(0, 4), -b.targets.mean(), 1e-15);
}

TEST(Network, TanhZeroHiddenWeightsShareOneDirection) {
    const auto c = make_config(3, {5}, 1, ActivationSpec::tanh());
    std::mt19937_64 rng(10);
    const Batch b = random_batch(rng, 7, 3, 1);
    NetworkParams p = zero_params(c);
    std::normal_distribution<double> g;
    for (Eigen::Index j = 0; j < 6; ++j) p.output(0, j) = g(rng);
    const Gradients grad = grad_closed_form(c, p, b);
    // e_i = a_bias - y_i; the descent direction of w_j is -a_j (1/n) sum e_i x_i
    Eigen::VectorXd s = Eigen::VectorXd::Zero(4);
    for (Eigen::Index i = 0; i < 7; ++i) {
        Eigen::Vector4d x(b.inputs(i, 0), b.inputs(i, 1), b.inputs(i, 2), 1.0);
        s += (p.output(0, 5) - b.targets(i, 0)) * x;
    }
    s /= 7.0;
    for (Eigen::Index j = 0; j < 5; ++j) {
        const Eigen::VectorXd expected = p.output(0, j) * s;
        EXPECT_LT((grad.layers[0].row(j).transpose() - expected).norm(), 1e-14);
    }
}

TEST(Network, ClosedFormMatchesFiniteDifferenceThreeLayers) {
    std::mt19937_64 rng(12);
    NetworkConfig c = make_config(3, {4, 5, 3}, 2, ActivationSpec::tanh());
    c.activations = {ActivationSpec::xtanh(), ActivationSpec::sigmoid(), ActivationSpec::softplus()};
    const Batch b = random_batch(rng, 5, 3, 2);
    const NetworkParams p = init_params(c, 12, 0.5);
    expect_grad_match(grad_closed_form(c, p, b), grad_finite_difference(c, p, b, 1e-5), 1e-5, 1e-10,
                      "3-layer");
}

TEST(Network, ClosedFormMatchesFiniteDifferenceRandomConfigs) {
    std::mt19937_64 rng(13);
    const std::vector<ActivationSpec> acts = {ActivationSpec::tanh(), ActivationSpec::xtanh(),
                                              ActivationSpec::x2tanh(), ActivationSpec::sigmoid(),
                                              ActivationSpec::softplus(), ActivationSpec::ptanh(4)};
    const double stds[] = {1e-1, 1e-2};
    for (int t = 0; t < 48; ++t) {
        const bool residual = (t / 6) % 2 == 1;
        const std::size_t depth = 1 + static_cast<std::size_t>(t % 3);
        std::uniform_int_distribution<std::size_t> width(1, 10);
        const std::size_t shared = width(rng);
        std::vector<std::size_t> widths;
        for (std::size_t l = 0; l < depth; ++l) widths.push_back(residual ? shared : width(rng));
        NetworkConfig c = make_config(2, widths, 1, acts[0], residual);
        for (std::size_t l = 0; l < depth; ++l) c.activations[l] = acts[(static_cast<std::size_t>(t) + l) % acts.size()];
        const Batch b = random_batch(rng, 4, 2, 1);
        const NetworkParams p = init_params(c, rng(), stds[t % 2]);
        expect_grad_match(grad_closed_form(c, p, b), grad_finite_difference(c, p, b, 1e-5), 1e-5, 1e-10,
                          "config " + std::to_string(t));
    }
}

TEST(Network, FiniteDifferenceExactOnQuadraticToy) {
    // f = a_bias; R = (1/2)(a_bias - y)^2 is quadratic in a_bias.
    const auto c = make_config(1, {1}, 1, ActivationSpec::tanh());
    NetworkParams p = zero_params(c);
    p.output(0, 1) = 0.75;
    Batch b;
    b.inputs = Eigen::MatrixXd::Constant(1, 1, 0.0);
    b.targets = Eigen::MatrixXd::Constant(1, 1, 2.0);
    const Gradients g = grad_finite_difference(c, p, b, 1e-3);
    EXPECT_NEAR(g.output(0, 1), -1.25, 1e-12);
}

TEST(Network, GradientVanishesAtExactFit) {
    const auto c = make_config(2, {3}, 1, ActivationSpec::sigmoid());
    std::mt19937_64 rng(14);
    Batch b = random_batch(rng, 5, 2, 1);
    const NetworkParams p = init_params(c, 14, 0.5);
    b.targets = predict(c, p, b.inputs);
    const Gradients g = grad_finite_difference(c, p, b, 1e-5);
    g.for_each_block([](const Eigen::MatrixXd& m) { EXPECT_LT(m.cwiseAbs().maxCoeff(), 1e-8); });
    EXPECT_THROW(grad_finite_difference(c, p, b, 1e-2), PreconditionError);
    EXPECT_THROW(grad_finite_difference(c, p, b, 1e-8), PreconditionError);
}

TEST(Network, HiddenGradientShrinksWithMultiplicity) {
    for (int p = 2; p <= 3; ++p) {
        const auto c = make_config(2, {6}, 1, ActivationSpec::ptanh(p));
        std::mt19937_64 rng(15);
        const Batch b = random_batch(rng, 8, 2, 1);
        const NetworkParams base = init_params(c, 15, 1.0);
        std::vector<double> logs;
        for (double eps : {1e-1, 1e-2, 1e-3}) {
            NetworkParams s = base;
            s.for_each_block([&](Eigen::MatrixXd& m) { m *= eps; });
            const Gradients g = grad_closed_form(c, s, b);
            logs.push_back(std::log10(g.layers[0].leftCols(2).norm()));
        }
        const double slope1 = logs[0] - logs[1];
        const double slope2 = logs[1] - logs[2];
        EXPECT_GE(slope1, p - 1 - 0.2) << "p=" << p;
        EXPECT_GE(slope2, p - 1 - 0.2) << "p=" << p;
    }
}

TEST(Network, NeuronWeightShapesAndCopy) {
    const auto c1 = make_config(1, {3}, 1, ActivationSpec::tanh());
    NetworkParams p1 = init_params(c1, 1, 0.1);
    Eigen::VectorXd w = neuron_weight(p1, 1, 2);
    EXPECT_EQ(w.size(), 2);
    EXPECT_EQ(w[0], p1.layers[0](2, 0));
    EXPECT_EQ(w[1], p1.layers[0](2, 1));
    w[0] = 99.0;
    EXPECT_NE(p1.layers[0](2, 0), 99.0);

    const auto c2 = make_config(5, {5, 5, 5}, 1, ActivationSpec::tanh());
    const NetworkParams p2 = init_params(c2, 1, 0.1);
    EXPECT_EQ(neuron_weight(p2, 2, 0).size(), 6);
    EXPECT_EQ(layer_weights(p2, 3).size(), 5u);
    EXPECT_THROW(neuron_weight(p2, 4, 0), ConfigError);
    EXPECT_THROW(neuron_weight(p2, 1, 5), ConfigError);
}
