#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abase::reschedule {

constexpr int kSlots = 24;

// Hour-of-day load profile: slot i holds the max over the retained days of
// that hour's average.
using LoadVector = std::array<double, kSlots>;

enum class Dimension { kRu, kStorage };

struct ReplicaState {
    std::uint64_t id = 0;
    std::uint32_t tenant = 0;
    LoadVector ru{};
    LoadVector storage{};
};

struct NodeState {
    std::uint32_t id = 0;
    double ru_capacity = 1.0;
    double storage_capacity = 1.0;
    bool is_migrating = false;
    std::vector<ReplicaState> replicas;
};

struct PoolState {
    std::string name;
    std::vector<NodeState> nodes;
};

struct NodeLoad {
    double ru = 0.0;       // max_i sum of replica RU slots
    double storage = 0.0;  // same for storage
};

struct OptimalLoad {
    double r = 0.0;  // pool RU utilization target
    double s = 0.0;  // pool storage utilization target
};

struct PlannerConfig {
    double theta = 0.05;              // band width around the target
    double inter_pool_trigger = 0.15; // R gap that starts node reassignment
};

struct Migration {
    std::uint64_t replica_id = 0;
    std::uint32_t tenant = 0;
    std::uint32_t src_node = 0;
    std::uint32_t dst_node = 0;
    double gain = 0.0;
    Dimension dimension = Dimension::kRu;
};
using MigrationPlan = std::vector<Migration>;

// Collapses up to 7 days of hourly samples (oldest first, sample i is hour i
// of the window) into the per-slot maximum of daily averages.
LoadVector replica_load(const std::vector<double>& hourly_samples);

NodeLoad node_load(const NodeState& node);
OptimalLoad pool_target(const PoolState& pool);

// L2 deviation of a node from the pool target, both dimensions at once.
double node_loss(const NodeState& node, const OptimalLoad& target);

// Paper gain: max[L(src), L(dst)] − max[L(src − re), L(dst + re)], with node
// loads re-maxed over the moved 24-slot vectors, never scalar-adjusted.
double migration_gain(const ReplicaState& re, const NodeState& src, const NodeState& dst,
                      const OptimalLoad& target);

struct Division {
    std::vector<std::size_t> low;     // util ≤ target − θ
    std::vector<std::size_t> medium;  // target − θ < util ≤ target
    std::vector<std::size_t> high;    // util > target
};
Division divide_nodes(const PoolState& pool, Dimension dim, double theta);

// Placement feasibility: destination stays out of the high band in the
// driving dimension, storage capacity holds, and per-tenant replica-count
// balance is preserved.
bool can_place(const ReplicaState& re, const NodeState& src, const NodeState& dst,
               Dimension dim, const OptimalLoad& target, double theta);

// One planning round of the per-dimension greedy (RU first, then storage).
// Only is_migrating flags are mutated; call apply_migration for each entry
// and then clear_migration_flags before the next round.
MigrationPlan intra_pool_reschedule(PoolState& pool, const PlannerConfig& cfg);

// Evens out per-tenant replica counts across nodes (applied immediately).
MigrationPlan phase1_replica_balance(PoolState& pool);

void apply_migration(PoolState& pool, const Migration& m);
void clear_migration_flags(PoolState& pool);

struct PoolStats {
    double ru_util_stddev = 0.0;
    double storage_util_variance = 0.0;
    double max_loss = 0.0;
    double mean_ru_util = 0.0;
};
PoolStats pool_stats(const PoolState& pool);

struct RoundsReport {
    int rounds = 0;
    MigrationPlan moves;
    PoolStats before;
    PoolStats after;
    std::vector<double> max_loss_per_round;  // after each applied round
};

// Offline convergence driver: optional count balancing, then greedy rounds
// until an empty plan or the round budget runs out.
RoundsReport run_rounds(PoolState& pool, int max_rounds, const PlannerConfig& cfg,
                        bool balance_counts_first);

struct InterPoolReport {
    bool triggered = false;
    std::string from_pool;
    std::string to_pool;
    std::vector<std::uint32_t> moved_nodes;
    MigrationPlan drain_moves;
    std::vector<std::string> warnings;
    MigrationPlan follow_up;
};

// Node reassignment between pools when RU utilization gaps exceed the
// trigger: drain the least-loaded low-pool nodes, hand them to the high
// pool, then rebalance both pools.
InterPoolReport inter_pool_reschedule(std::vector<PoolState>& pools, const PlannerConfig& cfg);

// Deterministic skewed test pool: lognormal replica loads with per-tenant
// diurnal peaks, placement biased toward low node ids.
struct SkewedPoolSpec {
    std::uint64_t seed = 1;
    std::uint32_t nodes = 100;
    std::uint32_t tenants = 20;
    std::uint32_t replicas_per_tenant = 60;
    double node_ru_capacity = 10'000.0;
    double node_storage_capacity = 1e12;
    double replica_ru_base = 300.0;
    double ru_sigma = 0.8;
    double replica_storage_base = 4e10;
    double storage_sigma = 0.6;
    double placement_skew = 2.0;  // node = floor(n * u^skew)
};
PoolState make_skewed_pool(const SkewedPoolSpec& spec);

// File exchange: either an explicit snapshot ({"pools": [...]}, or a single
// pool object) or {"generate": {...}} with SkewedPoolSpec fields.
std::vector<PoolState> load_pool_file(const std::string& path);
std::vector<PoolState> pools_from_json(const std::string& text);
std::string pools_to_json(const std::vector<PoolState>& pools);

}  // namespace abase::reschedule
