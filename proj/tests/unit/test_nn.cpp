#include "deepedge/error.hpp"
#include "deepedge/nn/dense_network.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace deepedge;
using namespace deepedge::nn;

namespace {

DenseNetwork single_weight(double w) {
    DenseLayer layer(1, 1, Activation::Linear);
    layer.weights[0] = w;
    return DenseNetwork({layer});
}

Gradients single_gradient(double g) {
    Gradients grads;
    grads.weights = {{g}};
    grads.bias = {{0.0}};
    return grads;
}

} // namespace

TEST(DenseNetwork, ZeroParametersGiveZeroOutput) {
    DenseNetwork net({DenseLayer(4, 3, Activation::RectifiedLinear), DenseLayer(3, 2, Activation::Linear)});
    const auto y = net.forward(std::vector<double>{1, -2, 3, 4});
    EXPECT_EQ(y, (std::vector<double>{0.0, 0.0}));
}

TEST(DenseNetwork, IdentityLayer) {
    DenseLayer layer(3, 3, Activation::Linear);
    for (std::size_t i = 0; i < 3; ++i) {
        layer.weight(i, i) = 1.0;
    }
    DenseNetwork net({layer});
    const std::vector<double> x = {0.5, -1.25, 7.0};
    EXPECT_EQ(net.forward(x), x);
}

TEST(DenseNetwork, ForwardMatchesHandRolledOracle) {
    sim::RngStream rng("nn-test", 1);
    for (int trial = 0; trial < 20; ++trial) {
        const auto net = oracle::random_network({23, 128, 128, 15}, rng, 0.2);
        const auto x = oracle::random_vector(23, rng);
        const auto got = net.forward(x);
        const auto want = oracle::forward(net, x);
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_NEAR(got[i], want[i], 1e-12);
        }
    }
}

TEST(DenseNetwork, RejectsWrongInputLength) {
    DenseNetwork net({DenseLayer(4, 2, Activation::Linear)});
    EXPECT_THROW(net.forward(std::vector<double>{1.0, 2.0}), DimensionMismatch);
}

TEST(DenseNetwork, RejectsBadArchitecture) {
    EXPECT_THROW(DenseNetwork({DenseLayer(4, 3, Activation::Linear), DenseLayer(2, 1, Activation::Linear)}),
                 ArchitectureMismatch);
    EXPECT_THROW(DenseNetwork({DenseLayer(4, 3, Activation::RectifiedLinear)}), ArchitectureMismatch);
}

TEST(Backward, ZeroAtTheTarget) {
    sim::RngStream rng("nn-test", 2);
    const auto net = oracle::random_network({5, 3, 2}, rng);
    const auto x = oracle::random_vector(5, rng);
    const double q = net.forward(x)[1];
    const auto g = net.backward(x, 1, q);
    EXPECT_EQ(g.l2_norm(), 0.0);
}

TEST(Backward, MatchesFiniteDifferencesOnSmallNet) {
    sim::RngStream rng("nn-test", 3);
    const auto net = oracle::random_network({5, 3, 2}, rng);
    const auto x = oracle::random_vector(5, rng);
    const auto analytic = net.backward(x, 0, 0.7);
    const auto numeric = oracle::finite_difference(net, x, 0, 0.7);
    for (std::size_t l = 0; l < analytic.weights.size(); ++l) {
        for (std::size_t i = 0; i < analytic.weights[l].size(); ++i) {
            EXPECT_LT(oracle::relative_error(analytic.weights[l][i], numeric.weights[l][i]), 1e-4);
        }
        for (std::size_t i = 0; i < analytic.bias[l].size(); ++i) {
            EXPECT_LT(oracle::relative_error(analytic.bias[l][i], numeric.bias[l][i]), 1e-4);
        }
    }
}

TEST(Backward, UntakenOutputRowHasNoGradient) {
    sim::RngStream rng("nn-test", 4);
    const auto net = oracle::random_network({5, 3, 4}, rng);
    const auto x = oracle::random_vector(5, rng);
    const auto g = net.backward(x, 2, 10.0);
    const auto& out = g.weights.back();
    const std::size_t in = net.layers().back().inputs;
    for (std::size_t row = 0; row < 4; ++row) {
        for (std::size_t c = 0; c < in; ++c) {
            if (row != 2) {
                EXPECT_EQ(out[row * in + c], 0.0);
            }
        }
        if (row != 2) {
            EXPECT_EQ(g.bias.back()[row], 0.0);
        }
    }
}

TEST(Sgd, ZeroLearningRateLeavesParameters) {
    sim::RngStream rng("nn-test", 5);
    auto net = oracle::random_network({4, 3, 2}, rng);
    const auto before = net;
    const auto g = net.backward(oracle::random_vector(4, rng), 1, 3.0);
    sgd_step(net, g, {0.0, std::nullopt});
    EXPECT_EQ(net, before);
}

TEST(Sgd, ScalarStep) {
    auto net = single_weight(1.0);
    sgd_step(net, single_gradient(2.0), {0.1, std::nullopt});
    EXPECT_DOUBLE_EQ(net.layers()[0].weights[0], 0.8);
}

TEST(Sgd, ClippingCapsTheStep) {
    auto clipped = single_weight(1.0);
    sgd_step(clipped, single_gradient(5.0), {0.1, 1.0});
    auto reference = single_weight(1.0);
    sgd_step(reference, single_gradient(1.0), {0.1, std::nullopt});
    EXPECT_DOUBLE_EQ(clipped.layers()[0].weights[0], reference.layers()[0].weights[0]);
}

TEST(CopyParameters, DeepCopy) {
    sim::RngStream rng("nn-test", 6);
    auto source = oracle::random_network({4, 6, 3}, rng);
    auto dest = oracle::random_network({4, 6, 3}, rng);
    copy_parameters(source, dest);
    const auto x = oracle::random_vector(4, rng);
    EXPECT_EQ(source.forward(x), dest.forward(x));
    const auto frozen = dest;
    source.layers()[0].weights[0] += 1.0;
    EXPECT_EQ(dest, frozen);
}

TEST(CopyParameters, MismatchThrows) {
    sim::RngStream rng("nn-test", 7);
    const auto a = oracle::random_network({4, 6, 3}, rng);
    auto b = oracle::random_network({4, 5, 3}, rng);
    EXPECT_THROW(copy_parameters(a, b), ArchitectureMismatch);
}

TEST(Initialization, DeterministicAndBounded) {
    const std::vector<std::size_t> widths = {23, 128, 128, 15};
    sim::RngStream r1("network-init", 1);
    sim::RngStream r2("network-init", 1);
    const auto a = DenseNetwork::initialized(widths, r1);
    const auto b = DenseNetwork::initialized(widths, r2);
    EXPECT_EQ(a, b);
    for (const auto& layer : a.layers()) {
        const double bound = std::sqrt(6.0 / static_cast<double>(layer.inputs + layer.outputs));
        for (double w : layer.weights) {
            ASSERT_LE(std::abs(w), bound);
        }
        for (double bias : layer.bias) {
            ASSERT_EQ(bias, 0.0);
        }
    }
    // Inputs in [0, 1] keep initial outputs small.
    sim::RngStream inputs("inputs", 1);
    int inside = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        std::vector<double> x(23);
        for (auto& v : x) {
            v = inputs.uniform01();
        }
        bool ok = true;
        for (double q : a.forward(x)) {
            ok = ok && std::abs(q) <= 1.0;
        }
        inside += ok;
    }
    EXPECT_GE(inside, trials * 9 / 10);
}

TEST(Updates, DeterministicSequence) {
    auto run = [] {
        sim::RngStream init("network-init", 3);
        sim::RngStream data("data", 3);
        auto net = DenseNetwork::initialized(std::vector<std::size_t>{6, 8, 3}, init);
        for (int i = 0; i < 200; ++i) {
            const auto x = oracle::random_vector(6, data);
            const auto g = net.backward(x, i % 3, data.uniform01());
            sgd_step(net, g, {0.01, 10.0});
        }
        return net;
    };
    const auto a = run();
    EXPECT_EQ(a, run());
    EXPECT_TRUE(a.all_finite());
}

TEST(TensorIo, RoundTripIsExact) {
    sim::RngStream rng("nn-test", 8);
    const auto net = oracle::random_network({7, 5, 4}, rng);
    std::stringstream buffer;
    save_network(net, buffer);
    const auto back = load_network(buffer);
    EXPECT_EQ(back, net);
}

TEST(TensorIo, MalformedInputThrows) {
    std::stringstream bad("not-a-tensor 1\n");
    EXPECT_THROW(load_network(bad), FormatError);
    std::stringstream truncated("deepedge-dense 1\nlayers 1\nlayer 0 2 2 linear\n1 2\n");
    EXPECT_THROW(load_network(truncated), FormatError);
}
