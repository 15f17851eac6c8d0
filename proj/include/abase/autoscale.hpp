#pragma once

#include <cstdint>

#include "abase/domain.hpp"
#include "abase/time.hpp"

namespace abase::autoscale {

struct ScalingState {
    std::uint32_t tenant_id = 0;
    double q_t = 0.0;           // tenant quota, RU/s
    std::uint32_t n = 1;        // partition count
    double q_p = 0.0;           // partition quota, RU/s
    double up = 5000.0;         // partition-quota upper bound
    double lower = 100.0;       // partition-quota lower bound
    SimTime last_scale_time = 0;
};

enum class ScaleAction { kNone, kScaleUp, kScaleDown };

struct ScalingDecision {
    ScaleAction action = ScaleAction::kNone;
    double new_q_t = 0.0;
    double new_q_p = 0.0;
    std::uint32_t new_partition_count = 0;
    bool split_triggered = false;
};

constexpr double kUpperThreshold = 0.85;   // U_max above this share of Q_T scales up
constexpr double kTargetUtilization = 0.65;  // new quota restores this utilization
constexpr SimTime kDownscaleCooldown = 7 * kUsPerDay;

// Threshold policy over the forecast peak. Scale-up sets Q_T = U_max / 0.65
// and splits partitions (one binary split) if the per-partition quota would
// exceed UP. Scale-down needs 7 quiet days and never pushes Q_P below LOWER.
ScalingDecision decide(const ScalingState& state, double u_max, SimTime now);

// Folds a decision back into the state (quotas plus cooldown clock).
void commit(ScalingState& state, const ScalingDecision& decision, SimTime now);

// Applies a decision to the world: tenant quota, partition quotas, and the
// binary splits (children co-located with parents until rescheduling moves
// them). Call on the timeline so admission gates can be re-armed atomically.
void apply(domain::World& world, std::uint32_t tenant_id, const ScalingDecision& decision);

}  // namespace abase::autoscale
