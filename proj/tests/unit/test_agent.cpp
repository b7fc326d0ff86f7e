#include "deepedge/agent/ddqn_agent.hpp"
#include "deepedge/error.hpp"

#include "../support/oracles.hpp"

#include <gtest/gtest.h>

#include <deque>
#include <filesystem>

using namespace deepedge;
using namespace deepedge::agent;

namespace {

// One-layer linear net whose outputs equal its biases for a zero input.
nn::DenseNetwork constant_q(std::vector<double> q, std::size_t inputs = 1) {
    nn::DenseLayer layer(inputs, q.size(), nn::Activation::Linear);
    layer.bias = std::move(q);
    return nn::DenseNetwork({layer});
}

Transition sample(double reward, bool done, std::size_t width = 1, std::uint32_t action = 0) {
    return {std::vector<double>(width, 0.0), action, reward, std::vector<double>(width, 0.0), done};
}

} // namespace

TEST(Argmax, TiesGoLow) {
    EXPECT_EQ(argmax(std::vector<double>{0.1, 0.9, 0.3}), 1u);
    EXPECT_EQ(argmax(std::vector<double>{0.5, 0.5, 0.5}), 0u);
}

TEST(Act, GreedyAtZeroEpsilon) {
    AgentConfig cfg;
    DdqnAgent agent(constant_q({0.1, 0.9, 0.3}), {}, cfg);
    sim::RngStream rng("agent-exploration", 1);
    EXPECT_EQ(agent.act(std::vector<double>{0.0}, 0.0, rng), 1u);
    DdqnAgent flat(constant_q({0.2, 0.2, 0.2}), {}, cfg);
    EXPECT_EQ(flat.act(std::vector<double>{0.0}, 0.0, rng), 0u);
}

TEST(Act, UniformAtFullEpsilon) {
    AgentConfig cfg;
    DdqnAgent agent(constant_q({0.1, 0.9, 0.3, 0.0}), {}, cfg);
    sim::RngStream rng("agent-exploration", 2);
    std::vector<int> counts(4, 0);
    const int n = 1000000;
    const std::vector<double> s{0.0};
    for (int i = 0; i < n; ++i) {
        ++counts[agent.act(s, 1.0, rng)];
    }
    for (int c : counts) {
        EXPECT_NEAR(static_cast<double>(c) / n, 0.25, 0.01 * 0.25);
    }
}

TEST(DdqnTarget, HandEvaluation) {
    // Online prefers action 2; target reads 0.5 there.
    const auto online = constant_q({0.0, 0.1, 0.9});
    const auto target = constant_q({3.0, 2.0, 0.5});
    EXPECT_DOUBLE_EQ(ddqn_target(sample(1.0, false), online, target, 0.8), 1.4);
}

TEST(DdqnTarget, TerminalIgnoresNetworks) {
    const auto online = constant_q({5.0, 1.0});
    EXPECT_EQ(ddqn_target(sample(-1.0, true), online, online, 0.8), -1.0);
}

TEST(DdqnTarget, SharedNetworkIsDqnForm) {
    sim::RngStream rng("agent-test", 1);
    for (int i = 0; i < 200; ++i) {
        const auto net = oracle::random_network({6, 8, 4}, rng);
        Transition t{oracle::random_vector(6, rng), 0, rng.uniform01(), oracle::random_vector(6, rng),
                     false};
        EXPECT_EQ(ddqn_target(t, net, net, 0.8), dqn_target(t, net, 0.8));
    }
}

TEST(DdqnTarget, MatchesBruteForce) {
    sim::RngStream rng("agent-test", 2);
    for (int i = 0; i < 300; ++i) {
        const auto online = oracle::random_network({6, 8, 4}, rng);
        const auto target = oracle::random_network({6, 8, 4}, rng);
        Transition t{oracle::random_vector(6, rng), 0, 2.0 * rng.uniform01() - 1.0,
                     oracle::random_vector(6, rng), rng.uniform01() < 0.2};
        EXPECT_EQ(ddqn_target(t, online, target, 0.8), oracle::ddqn_target(t, online, target, 0.8));
    }
}

TEST(DdqnTarget, NeverAboveDqnTarget) {
    sim::RngStream rng("agent-test", 3);
    for (int i = 0; i < 500; ++i) {
        const auto online = oracle::random_network({6, 8, 4}, rng);
        const auto target = oracle::random_network({6, 8, 4}, rng);
        Transition t{oracle::random_vector(6, rng), 0, 0.0, oracle::random_vector(6, rng), false};
        const double ddqn = ddqn_target(t, online, target, 0.8);
        const double dqn = dqn_target(t, target, 0.8);
        const auto q_t = target.forward(t.next_state);
        const auto q_o = online.forward(t.next_state);
        if (argmax(q_t) == argmax(q_o)) {
            EXPECT_EQ(ddqn, dqn);
        } else {
            EXPECT_GE(dqn, ddqn);
        }
    }
}

TEST(TrainMinibatch, InsufficientExperience) {
    AgentConfig cfg;
    sim::RngStream init("network-init", 1);
    DdqnAgent agent(3, 2, cfg, init);
    sim::RngStream rng("agent-replay", 1);
    agent.remember(sample(1.0, true, 3));
    EXPECT_THROW(agent.train_minibatch(rng), InsufficientExperience);
}

TEST(TrainMinibatch, AlreadyAtTargetIsANoop) {
    AgentConfig cfg;
    auto net = constant_q({0.5, -0.25}, 2);
    DdqnAgent agent(net, {}, cfg);
    for (int i = 0; i < 4; ++i) {
        agent.remember({{0.0, 0.0}, 0, 0.5, {0.0, 0.0}, true});
    }
    sim::RngStream rng("agent-replay", 1);
    EXPECT_EQ(agent.train_minibatch(rng), 0.0);
    EXPECT_EQ(agent.online(), net);
}

TEST(TrainMinibatch, TabularToyLearnsTheGoodAction) {
    AgentConfig cfg;
    cfg.learning_rate = 0.05;
    sim::RngStream init("network-init", 4);
    DdqnAgent agent(2, 2, cfg, init);
    const std::vector<double> s = {1.0, 0.5};
    for (int copy = 0; copy < 2; ++copy) {
        agent.remember({s, 0, -1.0, s, true});
        agent.remember({s, 1, 1.0, s, true});
    }
    sim::RngStream rng("agent-replay", 4);
    for (int i = 0; i < 500; ++i) {
        agent.train_minibatch(rng);
    }
    EXPECT_EQ(agent.greedy_action(s), 1u);
}

TEST(TrainMinibatch, TargetSyncsOnPeriod) {
    AgentConfig cfg;
    cfg.learning_rate = 0.01;
    sim::RngStream init("network-init", 5);
    DdqnAgent agent(3, 2, cfg, init);
    sim::RngStream data("data", 5);
    for (int i = 0; i < 8; ++i) {
        agent.remember({oracle::random_vector(3, data), static_cast<std::uint32_t>(i % 2),
                        data.uniform01(), oracle::random_vector(3, data), false});
    }
    sim::RngStream rng("agent-replay", 5);
    for (int i = 0; i < 9; ++i) {
        agent.train_minibatch(rng);
    }
    EXPECT_EQ(agent.training_steps(), 9u);
    EXPECT_FALSE(agent.online() == agent.target());
    agent.train_minibatch(rng);
    EXPECT_EQ(agent.training_steps(), 10u);
    EXPECT_EQ(agent.online(), agent.target());
}

TEST(Normalizer, ScalingRules) {
    Normalizer norm;
    norm.edge_server_count = 14;
    norm.expected_task_total = 100.0;
    orchestration::StateVector s(14u);
    s[orchestration::kWanBandwidth] = 20.0;
    s[orchestration::kWlanId] = 3.0;
    s[orchestration::kTasksToWan] = 250.0;
    const auto out = norm(s);
    EXPECT_DOUBLE_EQ(out[orchestration::kWanBandwidth], 1.0);
    EXPECT_DOUBLE_EQ(out[orchestration::kWlanId], 3.0 / 13.0);
    EXPECT_DOUBLE_EQ(out[orchestration::kTasksToWan], 1.0);

    const auto zero = norm(orchestration::StateVector(14u));
    for (double v : zero) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(ReplayBuffer, EvictsOldestInOrder) {
    ReplayBuffer buffer(5);
    for (int i = 0; i < 12; ++i) {
        buffer.push(sample(static_cast<double>(i), false));
    }
    ASSERT_EQ(buffer.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(buffer.at(i).reward, static_cast<double>(7 + i));
    }
}

TEST(ReplayBuffer, EmptySampleThrows) {
    ReplayBuffer buffer(3);
    sim::RngStream rng("agent-replay", 1);
    EXPECT_THROW(buffer.sample(rng), InsufficientExperience);
}

TEST(ReplayBuffer, RandomizedOperationsMatchModel) {
    sim::RngStream rng("replay-prop", 1);
    for (int round = 0; round < 20; ++round) {
        const std::size_t capacity = 1 + rng.uniform_index(64);
        ReplayBuffer buffer(capacity);
        std::deque<double> model;
        for (int op = 0; op < 5000; ++op) {
            if (rng.uniform01() < 0.8) {
                const double tag = static_cast<double>(op);
                buffer.push(sample(tag, false));
                model.push_back(tag);
                if (model.size() > capacity) {
                    model.pop_front();
                }
            } else if (!model.empty()) {
                const double drawn = buffer.sample(rng).reward;
                ASSERT_NE(std::find(model.begin(), model.end(), drawn), model.end());
            }
            ASSERT_EQ(buffer.size(), model.size());
        }
        for (std::size_t i = 0; i < model.size(); ++i) {
            ASSERT_EQ(buffer.at(i).reward, model[i]);
        }
    }
}

TEST(EpsilonSchedule, DecaysToFloor) {
    EpsilonSchedule eps(1.0, 0.99, 0.1);
    EXPECT_EQ(eps.current(), 1.0);
    eps.decay();
    EXPECT_DOUBLE_EQ(eps.current(), 0.99);
    eps.set_steps(101);
    EXPECT_NEAR(eps.current(), std::pow(0.99, 101), 1e-15);
    eps.set_steps(1000);
    EXPECT_EQ(eps.current(), 0.1);
}

TEST(EpsilonSchedule, MonotoneAndFloored) {
    sim::RngStream rng("eps-prop", 1);
    for (int round = 0; round < 100; ++round) {
        const double floor = 0.5 * rng.uniform01();
        const double initial = floor + (1.0 - floor) * rng.uniform01();
        const double factor = 0.5 + 0.5 * rng.uniform01();
        EpsilonSchedule eps(initial, factor, floor);
        double previous = eps.current();
        for (int k = 0; k < 1000; ++k) {
            eps.decay();
            const double now = eps.current();
            ASSERT_LE(now, previous);
            ASSERT_GE(now, floor);
            previous = now;
        }
    }
}

TEST(EpsilonSchedule, RejectsBadParameters) {
    EXPECT_THROW(EpsilonSchedule(0.05, 0.99, 0.1), InvalidConfig);
    EXPECT_THROW(EpsilonSchedule(1.0, 1.5, 0.1), InvalidConfig);
}

TEST(AgentConfig, Validation) {
    AgentConfig cfg;
    EXPECT_NO_THROW(cfg.validate());
    cfg.minibatch_size = 0;
    EXPECT_THROW(cfg.validate(), InvalidConfig);
    cfg = {};
    cfg.discount = 1.5;
    EXPECT_THROW(cfg.validate(), InvalidConfig);
}

TEST(Checkpoint, RoundTrip) {
    const auto dir = std::filesystem::temp_directory_path() / "deepedge_ckpt_test";
    std::filesystem::remove_all(dir);
    AgentConfig cfg;
    sim::RngStream init("network-init", 6);
    DdqnAgent agent(12, 4, cfg, init);
    agent.epsilon().set_steps(7);
    save_checkpoint(agent, {3, 12.5}, dir);
    CheckpointInfo info;
    const auto back = load_checkpoint(dir, cfg, &info);
    EXPECT_EQ(back.online(), agent.online());
    EXPECT_EQ(back.target(), agent.target());
    EXPECT_EQ(back.epsilon().steps(), 7u);
    EXPECT_EQ(info.episode, 3u);
    EXPECT_EQ(info.failed_pct, 12.5);
    std::filesystem::remove_all(dir);
    EXPECT_THROW(load_checkpoint(dir, cfg), MissingCheckpoint);
}
