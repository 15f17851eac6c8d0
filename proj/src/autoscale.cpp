#include "abase/autoscale.hpp"

#include <algorithm>
#include <vector>

namespace abase::autoscale {

ScalingDecision decide(const ScalingState& state, double u_max, SimTime now) {
    ScalingDecision d;
    d.new_q_t = state.q_t;
    d.new_q_p = state.q_p;
    d.new_partition_count = state.n;

    if (u_max > kUpperThreshold * state.q_t) {
        d.action = ScaleAction::kScaleUp;
        d.new_q_t = u_max / kTargetUtilization;
        d.new_partition_count = state.n;
        d.new_q_p = d.new_q_t / static_cast<double>(d.new_partition_count);
        if (d.new_q_p > state.up) {
            d.split_triggered = true;
            d.new_partition_count *= 2;
            d.new_q_p *= 0.5;
        }
        return d;
    }

    if (u_max < kTargetUtilization * state.q_t &&
        now - state.last_scale_time >= kDownscaleCooldown) {
        d.action = ScaleAction::kScaleDown;
        d.new_q_t = u_max / kTargetUtilization;
        d.new_q_p = std::max(d.new_q_t / static_cast<double>(state.n), state.lower);
        return d;
    }

    return d;
}

void commit(ScalingState& state, const ScalingDecision& decision, SimTime now) {
    if (decision.action == ScaleAction::kNone) return;
    state.q_t = decision.new_q_t;
    state.n = decision.new_partition_count;
    state.q_p = decision.new_q_p;
    state.last_scale_time = now;
}

void apply(domain::World& world, std::uint32_t tenant_id, const ScalingDecision& decision) {
    if (decision.action == ScaleAction::kNone) return;
    domain::Tenant& tenant = world.tenant(tenant_id);
    tenant.quota_ru = decision.new_q_t;
    if (decision.split_triggered) {
        std::vector<domain::PartitionId> parents = tenant.partitions;
        for (domain::PartitionId pid : parents) domain::split_partition(world, pid);
    }
    for (domain::PartitionId pid : world.tenant(tenant_id).partitions)
        world.partition(pid).quota_ru = decision.new_q_p;
}

}  // namespace abase::autoscale
