#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "abase/domain.hpp"
#include "abase/forecast.hpp"
#include "abase/workload.hpp"

namespace abase::scenario {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Toggles {
    bool proxy_quota = true;
    bool partition_quota = true;
    bool wfq = true;
    bool proxy_cache = true;
    bool node_cache = true;
    bool autoscaler = true;
    bool rescheduler = true;
};

struct Params {
    double t_cpu_us_per_ru = 20.0;
    double t_io_us_per_iops = 200.0;
    std::int64_t io_block_bytes = 4096;
    std::uint32_t cpu_workers = 4;
    std::uint32_t io_basic_threads = 4;
    std::uint32_t io_extra_threads = 1;
    std::int64_t queue_limit = 256;  // per (tenant, class) fair; total in FIFO mode
    double reject_cost_factor = 0.1;
    double reject_debt_cap_s = 1.0;  // rejection work beyond this backlog is shed
    double proxy_quota_start_s = 0.0;  // proxy enforcement activates at this time
    std::int64_t large_threshold_bytes = 4096;
    std::int64_t node_cache_bytes = 64ll << 20;
    std::int64_t proxy_cache_bytes = 64ll << 20;
    double refresh_window_s = 5.0;
    std::uint32_t refresh_hot_threshold = 3;
    std::uint32_t window_k = 100;
    double meta_poll_s = 5.0;
    double meta_directive_delay_s = 1.0;
    double proxy_hit_us = 10.0;
    std::uint32_t wfq_max_reads = 64;
    std::uint32_t wfq_max_writes = 32;
    double wfq_write_ru_ceiling = 256.0;
    bool rule3_enabled = true;
    double rule3_fraction = 0.9;
    double autoscale_upper = 5000.0;
    double autoscale_lower = 100.0;
    double autoscale_period_s = 3600.0;
    double autoscale_first_s = 60.0;
    double reschedule_period_s = 600.0;
    double migration_mb_s = 100.0;
};

enum class HistoryKind { kNone, kValues, kDiurnal };

// Hourly RU-usage history a tenant brings into the run, either verbatim or
// generated from the same diurnal shape the arrival process uses so a
// continuation workload extends it seamlessly.
struct HistorySpec {
    HistoryKind kind = HistoryKind::kNone;
    std::int64_t start_epoch_s = 0;
    std::vector<double> values;
    double base_ru = 0.0;
    double amplitude = 0.0;
    double peak_hour = 0.0;
    double growth_per_day = 0.0;
    std::uint32_t hours = 0;
};

forecast::MetricSeries materialize_history(const HistorySpec& h);

struct TenantConfig {
    domain::TenantSpec spec;
    HistorySpec history;
};

struct WorkloadConfig {
    std::string tenant;
    workload::ArrivalSpec arrival;
    workload::KeySpec keys;
    double read_ratio = 1.0;
    workload::SizeSpec value_size;
    double ttl_s = 0.0;          // 0: entries are not proxy-cacheable
    std::int32_t target_partition = -1;  // >= 0 pins every key to that partition index
};

struct ScenarioConfig {
    std::string name;
    std::uint64_t seed = 1;
    double duration_s = 60.0;
    std::uint64_t hash_seed = 0x5eedULL;
    std::vector<domain::PoolSpec> pools;
    std::vector<TenantConfig> tenants;
    std::vector<WorkloadConfig> workloads;
    Toggles toggles;
    Params params;
};

// Strict parser: unknown keys anywhere are an error, as are dangling
// tenant/pool references. Throws ConfigError with a path to the problem.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

// Canonical form (sorted keys, all fields explicit); parse-serialize-parse
// is the identity.
std::string serialize_scenario(const ScenarioConfig& sc);

domain::TopologySpec topology_of(const ScenarioConfig& sc);

// Resolves workload tenant names against the built order of sc.tenants.
std::vector<workload::WorkloadProfile> profiles_of(const ScenarioConfig& sc);

}  // namespace abase::scenario
