#pragma once

#include "deepedge/orchestration/state.hpp"
#include "deepedge/sim/rng.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace deepedge::orchestration {

struct DecisionContext {
    const workload::Task& task;
    const StateVector& state;
    // Per edge server: can some VM still take this task? Empty means unknown (all true).
    std::span<const bool> edge_headroom;
};

/// Routes each task to exactly one edge server or the cloud.
class Orchestrator {
public:
    virtual ~Orchestrator() = default;

    virtual std::string_view name() const = 0;

    /// Chooses the destination and records it in `counters` exactly once.
    virtual Action on_task_arrival(const DecisionContext& context, OffloadCounters& counters) = 0;

    /// Called once per task that reached a terminal outcome.
    virtual void on_task_finished(const workload::Task& /*task*/, bool /*success*/) {}

    virtual void on_episode_end() {}
};

/// Stateless rules: subclasses only pick the action.
class RuleBasedOrchestrator : public Orchestrator {
public:
    Action on_task_arrival(const DecisionContext& context, OffloadCounters& counters) final;

protected:
    virtual Action choose(const DecisionContext& context) = 0;
};

struct BaselineThresholds {
    double wan_bandwidth_mbps = 6.0;
    double edge_utilization_pct = 80.0;
};

/// Least-loaded edge server among those with headroom (ties to the lowest
/// index); least-loaded overall if none has headroom.
std::uint32_t least_loaded_edge(const StateVector& state, std::span<const bool> headroom);

/// Cloud while the WAN has more than the threshold left, else an edge server.
Action decide_network_based(const StateVector& state, std::span<const bool> headroom,
                            const BaselineThresholds& thresholds = {});

/// Edge while the mean edge load is under the threshold, else the cloud.
Action decide_utilization_based(const StateVector& state, std::span<const bool> headroom,
                                const BaselineThresholds& thresholds = {});

/// Cloud only when the WAN has room and the edge is loaded.
Action decide_hybrid(const StateVector& state, std::span<const bool> headroom,
                     const BaselineThresholds& thresholds = {});

Action decide_random(const StateVector& state, sim::RngStream& rng);

class NetworkBasedOrchestrator final : public RuleBasedOrchestrator {
public:
    explicit NetworkBasedOrchestrator(BaselineThresholds thresholds = {}) : thresholds_(thresholds) {}
    std::string_view name() const override { return "network"; }

protected:
    Action choose(const DecisionContext& context) override {
        return decide_network_based(context.state, context.edge_headroom, thresholds_);
    }

private:
    BaselineThresholds thresholds_;
};

class UtilizationBasedOrchestrator final : public RuleBasedOrchestrator {
public:
    explicit UtilizationBasedOrchestrator(BaselineThresholds thresholds = {})
        : thresholds_(thresholds) {}
    std::string_view name() const override { return "utilization"; }

protected:
    Action choose(const DecisionContext& context) override {
        return decide_utilization_based(context.state, context.edge_headroom, thresholds_);
    }

private:
    BaselineThresholds thresholds_;
};

class HybridOrchestrator final : public RuleBasedOrchestrator {
public:
    explicit HybridOrchestrator(BaselineThresholds thresholds = {}) : thresholds_(thresholds) {}
    std::string_view name() const override { return "hybrid"; }

protected:
    Action choose(const DecisionContext& context) override {
        return decide_hybrid(context.state, context.edge_headroom, thresholds_);
    }

private:
    BaselineThresholds thresholds_;
};

class RandomOrchestrator final : public RuleBasedOrchestrator {
public:
    explicit RandomOrchestrator(std::uint64_t seed) : rng_("orchestrator-random", seed) {}
    std::string_view name() const override { return "random"; }

protected:
    Action choose(const DecisionContext& context) override {
        return decide_random(context.state, rng_);
    }

private:
    sim::RngStream rng_;
};

inline constexpr std::string_view kBaselineNames[] = {"network", "utilization", "hybrid", "random"};

/// Builds a rule-based orchestrator by CLI name; nullptr for unknown names
/// (including "deepedge", which needs an agent).
std::unique_ptr<Orchestrator> make_baseline(std::string_view name, std::uint64_t seed,
                                            const BaselineThresholds& thresholds = {});

} // namespace deepedge::orchestration
