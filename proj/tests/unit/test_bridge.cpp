#include "deepedge/bridge/delayed_action_bridge.hpp"
#include "deepedge/bridge/deepedge_orchestrator.hpp"
#include "deepedge/error.hpp"

#include "../support/recording_learner.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace deepedge;
using namespace deepedge::bridge;
using orchestration::OffloadCounters;
using testing_support::RecordingLearner;

namespace {

constexpr std::uint32_t kServers = 3;

// Learner that always returns a fixed action.
class FixedLearner : public Learner {
public:
    explicit FixedLearner(std::uint32_t action) : action_(action) {}
    Action act(const StateVector&) override { return {action_}; }
    void learn(const MemoryItem& item) override { items.push_back(item); }
    std::vector<MemoryItem> items;

private:
    std::uint32_t action_;
};

workload::Task task(std::uint64_t id, std::uint32_t home = 0) {
    workload::Task t;
    t.task_id = id;
    t.home_wlan_id = home;
    return t;
}

StateVector state(double tag) {
    StateVector s(kServers);
    s[orchestration::kWanBandwidth] = tag;
    return s;
}

} // namespace

TEST(Bridge, ColdStartRecordsCounterAndSkipsLink) {
    FixedLearner learner(0);
    DelayedActionBridge bridge(learner);
    OffloadCounters counters;
    bridge.on_task_arrival(task(1, 0), state(1), counters);
    EXPECT_EQ(counters.to_wlan, 1u);
    EXPECT_EQ(counters.total(), 1u);
    EXPECT_EQ(bridge.open_items(), 1u);
    EXPECT_TRUE(learner.items.empty());
}

TEST(Bridge, CloudActionBumpsWanCounter) {
    FixedLearner learner(kServers);
    DelayedActionBridge bridge(learner);
    OffloadCounters counters;
    bridge.on_task_arrival(task(1), state(1), counters);
    EXPECT_EQ(counters.to_wan, 1u);
    EXPECT_EQ(counters.to_wlan + counters.to_man, 0u);
}

TEST(Bridge, SecondArrivalLinksFirstItem) {
    FixedLearner learner(1);
    DelayedActionBridge bridge(learner);
    OffloadCounters counters;
    bridge.on_task_arrival(task(1), state(1), counters);
    bridge.on_task_arrival(task(2), state(2), counters);
    bridge.on_task_completion(task(1), true, false);
    ASSERT_EQ(learner.items.size(), 1u);
    EXPECT_EQ(*learner.items[0].state, state(1));
    EXPECT_EQ(*learner.items[0].next_state, state(2));
    EXPECT_EQ(*learner.items[0].value, 1.0);
}

TEST(Bridge, CompletionBeforeSuccessorIsHeld) {
    FixedLearner learner(1);
    DelayedActionBridge bridge(learner);
    OffloadCounters counters;
    bridge.on_task_arrival(task(1), state(1), counters);
    bridge.on_task_completion(task(1), false, false);
    EXPECT_TRUE(learner.items.empty());
    bridge.on_task_arrival(task(2), state(2), counters);
    ASSERT_EQ(learner.items.size(), 1u);
    EXPECT_EQ(*learner.items[0].value, -1.0);
    EXPECT_EQ(*learner.items[0].next_state, state(2));
}

TEST(Bridge, UnknownTaskThrows) {
    FixedLearner learner(0);
    DelayedActionBridge bridge(learner);
    EXPECT_THROW(bridge.on_task_completion(task(9), true, false), UnknownTask);
}

TEST(Bridge, SingleTaskEpisodeFlushesTerminal) {
    FixedLearner learner(0);
    DelayedActionBridge bridge(learner);
    OffloadCounters counters;
    bridge.on_task_arrival(task(1), state(1), counters);
    bridge.on_task_completion(task(1), true, true);
    EXPECT_EQ(bridge.flush_at_episode_end(), 1u);
    ASSERT_EQ(learner.items.size(), 1u);
    EXPECT_TRUE(learner.items[0].is_done);
    EXPECT_EQ(*learner.items[0].next_state, state(1));
    EXPECT_EQ(bridge.open_items(), 0u);
}

TEST(Bridge, FlushWithNothingLeft) {
    FixedLearner learner(0);
    DelayedActionBridge bridge(learner);
    OffloadCounters counters;
    bridge.on_task_arrival(task(1), state(1), counters);
    bridge.on_task_arrival(task(2), state(2), counters);
    bridge.on_task_completion(task(1), true, false);
    EXPECT_EQ(bridge.flush_at_episode_end(), 0u);  // item 2 has no value
    EXPECT_EQ(learner.items.size(), 1u);
    EXPECT_EQ(bridge.open_items(), 0u);
}

TEST(Bridge, HundredTaskConservationWithShuffledCompletions) {
    RecordingLearner learner(3);
    DelayedActionBridge bridge(learner);
    OffloadCounters counters;
    sim::RngStream rng("bridge-test", 1);
    std::vector<std::uint64_t> pending;
    for (std::uint64_t id = 0; id < 100; ++id) {
        bridge.on_task_arrival(task(id, static_cast<std::uint32_t>(id % kServers)),
                               state(static_cast<double>(id)), counters);
        pending.push_back(id);
        // Complete a random subset of what is outstanding, out of order.
        while (!pending.empty() && rng.uniform01() < 0.5) {
            const auto k = rng.uniform_index(pending.size());
            bridge.on_task_completion(task(pending[k]), rng.uniform01() < 0.7, pending[k] == 99);
            pending.erase(pending.begin() + static_cast<long>(k));
        }
    }
    while (!pending.empty()) {
        const auto k = rng.uniform_index(pending.size());
        bridge.on_task_completion(task(pending[k]), true, pending[k] == 99);
        pending.erase(pending.begin() + static_cast<long>(k));
    }
    bridge.flush_at_episode_end();
    EXPECT_EQ(learner.items.size(), 100u);
    EXPECT_EQ(bridge.forwarded(), 100u);

    std::vector<bool> seen(100, false);
    for (const auto& item : learner.items) {
        ASSERT_TRUE(item.complete());
        ASSERT_FALSE(seen[item.state_id]);
        seen[item.state_id] = true;
        const double s = (*item.state)[orchestration::kWanBandwidth];
        const double next = (*item.next_state)[orchestration::kWanBandwidth];
        EXPECT_EQ(s, static_cast<double>(item.state_id));
        if (item.state_id == 99) {
            EXPECT_TRUE(item.is_done);
            EXPECT_EQ(next, s);
        } else {
            EXPECT_EQ(next, s + 1.0);
            EXPECT_FALSE(item.is_done);
        }
    }
}

TEST(Bridge, TraceRecordsEveryMutation) {
    FixedLearner learner(2);
    DelayedActionBridge bridge(learner);
    std::ostringstream trace;
    bridge.set_trace(&trace);
    OffloadCounters counters;
    bridge.on_task_arrival(task(10), state(1), counters);
    bridge.on_task_completion(task(10), true, false);
    bridge.on_task_arrival(task(11), state(2), counters);
    bridge.flush_at_episode_end();
    EXPECT_EQ(trace.str(),
              "kind,state_id,task_id,action,reward,is_done,next_state_id\n"
              "arrival,0,10,2,,0,\n"
              "value,0,10,2,1,0,\n"
              "arrival,1,11,2,,0,\n"
              "link,0,10,2,1,0,1\n"
              "forward,0,10,2,1,0,1\n"
              "drop,1,11,2,,0,\n");
}

TEST(DeepEdgeOrchestrator, TrainsOncePerForwardedItemAfterWarmup) {
    agent::AgentConfig cfg;
    sim::RngStream init("network-init", 1);
    agent::DdqnAgent agent(orchestration::kStaticFeatureCount + kServers, kServers + 1, cfg, init);
    sim::RngStream explore("agent-exploration", 1);
    sim::RngStream replay("agent-replay", 1);
    agent::Normalizer norm;
    norm.edge_server_count = kServers;
    DeepEdgeOrchestrator orch(agent, norm, 1.0, explore, replay);

    OffloadCounters counters;
    for (std::uint64_t id = 0; id < 10; ++id) {
        const auto t = task(id);
        const auto s = state(static_cast<double>(id));
        orch.on_task_arrival({t, s, {}}, counters);
        orch.on_task_finished(t, true);
    }
    orch.on_episode_end();
    // 10 items forwarded; the first three only fill the replay buffer.
    EXPECT_EQ(orch.bridge().forwarded(), 10u);
    EXPECT_EQ(agent.replay().size(), 10u);
    EXPECT_EQ(orch.training_steps(), 7u);
    EXPECT_EQ(counters.total(), 10u);
}
