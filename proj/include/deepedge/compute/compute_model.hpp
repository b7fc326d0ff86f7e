#pragma once

#include "deepedge/workload/task.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace deepedge::compute {

enum class Tier : std::uint8_t { Edge, Cloud };

struct HostRef {
    Tier tier = Tier::Cloud;
    std::uint32_t server = 0;

    static HostRef edge(std::uint32_t server) { return {Tier::Edge, server}; }
    static HostRef cloud() { return {Tier::Cloud, 0}; }
    friend bool operator==(const HostRef&, const HostRef&) = default;
};

struct VmRef {
    HostRef host;
    std::uint32_t vm = 0;
};

struct ComputeParams {
    std::uint32_t edge_server_count = 14;
    std::uint32_t vms_per_edge = 8;
    double edge_vm_gips = 10.0;
    std::uint32_t cloud_vms = 4;
    double cloud_vm_gips = 100.0;
};

/// One VM. Utilization is kept in integer micro-percent so that the
/// committed total always equals the sum over active tasks exactly.
class Vm {
public:
    static constexpr std::int64_t kFull = 100'000'000;

    explicit Vm(double capacity_gips) : capacity_gips_(capacity_gips) {}

    double capacity_gips() const { return capacity_gips_; }
    double committed_pct() const { return static_cast<double>(committed_) * 1e-6; }
    std::int64_t committed_micro() const { return committed_; }
    bool fits(std::int64_t required_micro) const { return committed_ + required_micro <= kFull; }

    void add(std::uint64_t task_id, std::int64_t required_micro, double now);
    /// Returns the share released; throws std::logic_error for unknown tasks.
    std::int64_t remove(std::uint64_t task_id, double now);

    struct Allocation {
        std::uint64_t task_id;
        std::int64_t micro_pct;
    };
    const std::vector<Allocation>& active() const { return active_; }

    /// Integral of committed utilization (percent * seconds) up to `now`.
    double utilization_area(double now) const;

private:
    void advance(double now);

    double capacity_gips_;
    std::int64_t committed_ = 0;
    std::vector<Allocation> active_;
    double area_ = 0.0;
    double last_change_ = 0.0;
};

std::int64_t to_micro_pct(double pct);

/// task_length / (capacity * required / 100); the share is dedicated to the
/// task for its whole duration.
double processing_time(double task_length_gi, double vm_capacity_gips, double required_pct);

class ComputeModel {
public:
    explicit ComputeModel(ComputeParams params);

    const ComputeParams& params() const { return params_; }
    std::uint32_t edge_server_count() const { return params_.edge_server_count; }

    /// First-fit by lowest VM index on the target host. nullopt means the
    /// capacity constraint rejected the task.
    std::optional<VmRef> admit(const workload::Task& task, HostRef target, double now);
    void release(const VmRef& vm, std::uint64_t task_id, double now);

    /// Required share of this task on the given tier.
    static double required_pct(const workload::Task& task, Tier tier);

    double processing_time(const workload::Task& task, const VmRef& vm) const;

    const Vm& vm(const VmRef& ref) const;

    /// Mean committed utilization over the server's VMs, in percent.
    double server_load(std::uint32_t server) const;
    /// True if some VM on the server can take required_pct more.
    bool has_headroom(std::uint32_t server, double required_pct) const;

    /// Time-weighted mean utilization over [0, now] across all VMs of a tier.
    double average_utilization(Tier tier, double now) const;

private:
    std::vector<Vm>& vms_of(const HostRef& host);
    const std::vector<Vm>& vms_of(const HostRef& host) const;

    ComputeParams params_;
    std::vector<std::vector<Vm>> edge_;
    std::vector<Vm> cloud_;
};

/// Facts gathered by the simulator at a task's terminal point.
struct CompletionFacts {
    bool admitted = true;
    bool network_ok = true;
    bool delivered = true;  // device still on its home WLAN at download time
    double service_time_s = 0.0;
    double deadline_s = 0.0;
};

/// Success iff admitted, every transfer went through, the result could be
/// delivered and the end-to-end delay met the deadline.
workload::TaskOutcome classify_outcome(const CompletionFacts& facts);

struct TaskOutcomeRecord {
    std::uint64_t task_id = 0;
    workload::AppId app_id = workload::AppId::AugmentedReality;
    workload::TaskOutcome outcome = workload::TaskOutcome::Pending;
    double service_time_s = 0.0;
    double processing_time_s = 0.0;
    std::optional<Tier> processed_at;
};

} // namespace deepedge::compute
