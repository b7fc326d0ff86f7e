#include "deepedge/compute/compute_model.hpp"
#include "deepedge/sim/rng.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace deepedge;
using namespace deepedge::compute;
using workload::Task;
using workload::TaskOutcome;

namespace {

Task task_needing(std::uint64_t id, double edge_pct, double cloud_pct = 1.0, double length = 2.0) {
    Task t;
    t.task_id = id;
    t.required_capacity_edge_pct = edge_pct;
    t.required_capacity_cloud_pct = cloud_pct;
    t.task_length_gi = length;
    return t;
}

} // namespace

TEST(Admission, EmptyServerTakesFirstVm) {
    ComputeModel compute({});
    const auto vm = compute.admit(task_needing(1, 6.0), HostRef::edge(0), 0.0);
    ASSERT_TRUE(vm);
    EXPECT_EQ(vm->vm, 0u);
    EXPECT_DOUBLE_EQ(compute.vm(*vm).committed_pct(), 6.0);
}

TEST(Admission, FullVmSpillsToNext) {
    ComputeModel compute({});
    ASSERT_TRUE(compute.admit(task_needing(1, 97.0), HostRef::edge(0), 0.0));
    const auto vm = compute.admit(task_needing(2, 6.0), HostRef::edge(0), 0.0);
    ASSERT_TRUE(vm);
    EXPECT_EQ(vm->vm, 1u);
}

TEST(Admission, RejectsWhenNoVmFits) {
    ComputeModel compute({});
    for (std::uint64_t i = 0; i < 8; ++i) {
        ASSERT_TRUE(compute.admit(task_needing(i, 80.0), HostRef::edge(2), 0.0));
    }
    EXPECT_FALSE(compute.admit(task_needing(99, 30.0), HostRef::edge(2), 0.0));
    EXPECT_FALSE(compute.has_headroom(2, 30.0));
    EXPECT_TRUE(compute.has_headroom(2, 20.0));
}

TEST(Admission, ExactlyFullIsAllowed) {
    ComputeModel compute({});
    ASSERT_TRUE(compute.admit(task_needing(1, 70.0), HostRef::edge(0), 0.0));
    const auto vm = compute.admit(task_needing(2, 30.0), HostRef::edge(0), 0.0);
    ASSERT_TRUE(vm);
    EXPECT_EQ(vm->vm, 0u);
}

TEST(ProcessingTime, Arithmetic) {
    EXPECT_NEAR(processing_time(2.0, 10.0, 6.0), 2.0 / 0.6, 1e-12);
    EXPECT_NEAR(processing_time(2.0, 100.0, 0.6), 2.0 / 0.6, 1e-12);
    EXPECT_EQ(processing_time(0.0, 10.0, 6.0), 0.0);
}

TEST(ProcessingTime, CloudAndEdgeAgreeForAr) {
    ComputeModel compute({});
    const Task ar = task_needing(1, 6.0, 0.6, 2.0);
    const auto edge = compute.admit(ar, HostRef::edge(0), 0.0);
    const auto cloud = compute.admit(ar, HostRef::cloud(), 0.0);
    EXPECT_NEAR(compute.processing_time(ar, *edge), 3.3333333333333335, 1e-12);
    EXPECT_NEAR(compute.processing_time(ar, *cloud), 3.3333333333333335, 1e-12);
}

TEST(Classify, Outcomes) {
    EXPECT_EQ(classify_outcome({true, true, true, 0.4, 0.55}), TaskOutcome::Success);
    EXPECT_EQ(classify_outcome({false, true, true, 0.0, 1.0}), TaskOutcome::FailCapacity);
    EXPECT_EQ(classify_outcome({true, true, false, 0.4, 1.0}), TaskOutcome::FailMobility);
    EXPECT_EQ(classify_outcome({true, true, true, 1.2, 1.0}), TaskOutcome::FailDeadline);
    EXPECT_EQ(classify_outcome({true, false, true, 0.1, 1.0}), TaskOutcome::FailDeadline);
}

TEST(ServerLoad, AveragesOverVms) {
    ComputeModel compute({});
    ASSERT_TRUE(compute.admit(task_needing(1, 6.0), HostRef::edge(2), 0.0));
    EXPECT_DOUBLE_EQ(compute.server_load(2), 0.75);
    EXPECT_DOUBLE_EQ(compute.server_load(0), 0.0);
}

TEST(Utilization, TimeWeightedAverage) {
    ComputeParams p;
    p.edge_server_count = 1;
    p.vms_per_edge = 2;
    ComputeModel compute(p);
    const auto vm = compute.admit(task_needing(1, 50.0), HostRef::edge(0), 0.0);
    compute.release(*vm, 1, 10.0);
    // 50% on one of two VMs for half of 20 s -> 12.5%.
    EXPECT_DOUBLE_EQ(compute.average_utilization(Tier::Edge, 20.0), 12.5);
}

TEST(Utilization, ConservationUnderRandomAdmissions) {
    ComputeParams p;
    p.edge_server_count = 2;
    ComputeModel compute(p);
    sim::RngStream rng("compute", 4);
    std::map<std::uint64_t, std::pair<VmRef, double>> live;
    const double shares[] = {6.0, 2.0, 30.0, 10.0, 0.6, 3.0};
    double now = 0.0;
    for (std::uint64_t id = 0; id < 20000; ++id) {
        now += 0.01;
        if (!live.empty() && rng.uniform01() < 0.45) {
            auto it = live.begin();
            std::advance(it, static_cast<long>(rng.uniform_index(live.size())));
            compute.release(it->second.first, it->first, now);
            live.erase(it);
        } else {
            const double share = shares[rng.uniform_index(6)];
            const HostRef host = rng.uniform01() < 0.2
                                     ? HostRef::cloud()
                                     : HostRef::edge(static_cast<std::uint32_t>(rng.uniform_index(2)));
            const Task t = task_needing(id, share, share);
            if (auto vm = compute.admit(t, host, now)) {
                live.emplace(id, std::make_pair(*vm, share));
            }
        }
        if (id % 97 == 0) {
            std::map<std::pair<int, std::pair<std::uint32_t, std::uint32_t>>, std::int64_t> sums;
            for (const auto& [task_id, entry] : live) {
                const auto& ref = entry.first;
                sums[{static_cast<int>(ref.host.tier), {ref.host.server, ref.vm}}] +=
                    to_micro_pct(entry.second);
            }
            for (const auto& [key, sum] : sums) {
                const VmRef ref{{static_cast<Tier>(key.first), key.second.first}, key.second.second};
                ASSERT_EQ(compute.vm(ref).committed_micro(), sum);
                ASSERT_LE(compute.vm(ref).committed_micro(), Vm::kFull);
            }
        }
    }
}
