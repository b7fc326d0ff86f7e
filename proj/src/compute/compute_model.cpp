#include "deepedge/compute/compute_model.hpp"

#include "deepedge/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace deepedge::compute {

using workload::TaskOutcome;

std::int64_t to_micro_pct(double pct) {
    return static_cast<std::int64_t>(std::llround(pct * 1e6));
}

void Vm::advance(double now) {
    area_ += static_cast<double>(committed_) * 1e-6 * (now - last_change_);
    last_change_ = now;
}

void Vm::add(std::uint64_t task_id, std::int64_t required_micro, double now) {
    advance(now);
    committed_ += required_micro;
    active_.push_back({task_id, required_micro});
}

std::int64_t Vm::remove(std::uint64_t task_id, double now) {
    auto it = std::find_if(active_.begin(), active_.end(),
                           [&](const Allocation& a) { return a.task_id == task_id; });
    if (it == active_.end()) {
        throw std::logic_error("task " + std::to_string(task_id) + " is not on this VM");
    }
    advance(now);
    const std::int64_t share = it->micro_pct;
    committed_ -= share;
    active_.erase(it);
    return share;
}

double Vm::utilization_area(double now) const {
    return area_ + static_cast<double>(committed_) * 1e-6 * (now - last_change_);
}

double processing_time(double task_length_gi, double vm_capacity_gips, double required_pct) {
    if (task_length_gi <= 0.0) {
        return 0.0;
    }
    return task_length_gi / (vm_capacity_gips * required_pct / 100.0);
}

ComputeModel::ComputeModel(ComputeParams params) : params_(params) {
    if (params_.vms_per_edge == 0 || params_.cloud_vms == 0 || params_.edge_vm_gips <= 0.0 ||
        params_.cloud_vm_gips <= 0.0) {
        throw InvalidConfig("compute model needs positive VM counts and capacities");
    }
    edge_.assign(params_.edge_server_count,
                 std::vector<Vm>(params_.vms_per_edge, Vm(params_.edge_vm_gips)));
    cloud_.assign(params_.cloud_vms, Vm(params_.cloud_vm_gips));
}

std::vector<Vm>& ComputeModel::vms_of(const HostRef& host) {
    return host.tier == Tier::Cloud ? cloud_ : edge_.at(host.server);
}

const std::vector<Vm>& ComputeModel::vms_of(const HostRef& host) const {
    return host.tier == Tier::Cloud ? cloud_ : edge_.at(host.server);
}

double ComputeModel::required_pct(const workload::Task& task, Tier tier) {
    return tier == Tier::Edge ? task.required_capacity_edge_pct : task.required_capacity_cloud_pct;
}

std::optional<VmRef> ComputeModel::admit(const workload::Task& task, HostRef target, double now) {
    auto& vms = vms_of(target);
    const std::int64_t need = to_micro_pct(required_pct(task, target.tier));
    for (std::uint32_t i = 0; i < vms.size(); ++i) {
        if (vms[i].fits(need)) {
            vms[i].add(task.task_id, need, now);
            return VmRef{target, i};
        }
    }
    return std::nullopt;
}

void ComputeModel::release(const VmRef& ref, std::uint64_t task_id, double now) {
    vms_of(ref.host).at(ref.vm).remove(task_id, now);
}

double ComputeModel::processing_time(const workload::Task& task, const VmRef& ref) const {
    return compute::processing_time(task.task_length_gi, vm(ref).capacity_gips(),
                                    required_pct(task, ref.host.tier));
}

const Vm& ComputeModel::vm(const VmRef& ref) const {
    return vms_of(ref.host).at(ref.vm);
}

double ComputeModel::server_load(std::uint32_t server) const {
    const auto& vms = edge_.at(server);
    std::int64_t total = 0;
    for (const auto& v : vms) {
        total += v.committed_micro();
    }
    return static_cast<double>(total) * 1e-6 / static_cast<double>(vms.size());
}

bool ComputeModel::has_headroom(std::uint32_t server, double required_pct) const {
    const std::int64_t need = to_micro_pct(required_pct);
    const auto& vms = edge_.at(server);
    return std::any_of(vms.begin(), vms.end(), [&](const Vm& v) { return v.fits(need); });
}

double ComputeModel::average_utilization(Tier tier, double now) const {
    if (now <= 0.0) {
        return 0.0;
    }
    double area = 0.0;
    std::size_t count = 0;
    if (tier == Tier::Cloud) {
        for (const auto& v : cloud_) {
            area += v.utilization_area(now);
            ++count;
        }
    } else {
        for (const auto& server : edge_) {
            for (const auto& v : server) {
                area += v.utilization_area(now);
                ++count;
            }
        }
    }
    return count == 0 ? 0.0 : area / (static_cast<double>(count) * now);
}

TaskOutcome classify_outcome(const CompletionFacts& facts) {
    if (!facts.admitted) {
        return TaskOutcome::FailCapacity;
    }
    if (!facts.network_ok) {
        return TaskOutcome::FailDeadline;
    }
    if (!facts.delivered) {
        return TaskOutcome::FailMobility;
    }
    if (facts.service_time_s > facts.deadline_s) {
        return TaskOutcome::FailDeadline;
    }
    return TaskOutcome::Success;
}

} // namespace deepedge::compute
