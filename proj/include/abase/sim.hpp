#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "abase/admission.hpp"
#include "abase/autoscale.hpp"
#include "abase/cache.hpp"
#include "abase/domain.hpp"
#include "abase/forecast.hpp"
#include "abase/metrics.hpp"
#include "abase/reschedule.hpp"
#include "abase/rng.hpp"
#include "abase/ru.hpp"
#include "abase/scenario.hpp"
#include "abase/time.hpp"
#include "abase/wfq.hpp"
#include "abase/workload.hpp"

namespace abase::sim {

// Stage costs of the service model: CPU time scales with the request's RU
// estimate, disk time with its IOPS count.
inline SimTime service_cpu_us(double t_cpu_us_per_ru, double ru) {
    return static_cast<SimTime>(std::llround(t_cpu_us_per_ru * ru));
}
inline SimTime service_io_us(double t_io_us_per_iops, double iops) {
    return static_cast<SimTime>(std::llround(t_io_us_per_iops * iops));
}

struct Counters {
    std::uint64_t refreshes_scheduled = 0;
    std::uint64_t refreshes_completed = 0;
    std::uint64_t refreshes_failed = 0;
    std::uint64_t directives_issued = 0;
    std::uint64_t extra_io_activations = 0;
    std::uint64_t autoscale_ups = 0;
    std::uint64_t autoscale_downs = 0;
    std::uint64_t partition_splits = 0;
    std::uint64_t migrations_planned = 0;
    std::uint64_t migrations_applied = 0;
    double reject_debt_total_us = 0.0;
    double mean_concurrency = 0.0;
    std::vector<SimTime> max_cpu_wait_us;       // per tenant
    std::vector<std::int64_t> proxy_requests;   // per global proxy, client traffic
    std::vector<double> admitted_ru;            // per tenant, proxy-admitted estimates
};

// Single-threaded discrete-event run of one scenario. The full output
// (metrics, logs, summary) is a pure function of the config.
class Simulation {
  public:
    explicit Simulation(const scenario::ScenarioConfig& cfg);
    ~Simulation();

    void run();

    const domain::World& world() const { return world_; }
    const metrics::MetricsSink& sink() const { return sink_; }
    const Counters& counters() const { return counters_; }
    // Newline-delimited JSON records of autoscale decisions and migrations.
    const std::vector<std::string>& decision_log() const { return decision_log_; }
    std::string summary_json() const;

  private:
    enum class Ev : std::uint8_t {
        kArrival,
        kProxyDone,
        kCpuDone,
        kIoDone,
        kMetaTick,
        kDirective,
        kAutoscaleTick,
        kRescheduleTick,
        kMigrationDone,
    };

    struct Event {
        SimTime t;
        std::uint64_t seq;
        Ev kind;
        std::int64_t a = 0;
        std::int64_t b = 0;
        std::int64_t c = 0;
    };
    struct EventAfter {
        bool operator()(const Event& x, const Event& y) const {
            if (x.t != y.t) return x.t > y.t;
            return x.seq > y.seq;
        }
    };

    struct Req {
        std::uint32_t tenant = 0;
        std::uint32_t workload = 0;
        domain::RequestKind kind = domain::RequestKind::kGet;
        std::uint64_t key = 0;
        std::int64_t actual_size = 0;
        double est_ru = 0.0;
        double io_cost = 0.0;
        wfq::QueueClass cls = wfq::QueueClass::kReadSmall;
        SimTime arrival = 0;
        SimTime cpu_enqueue = 0;
        std::uint32_t proxy = 0;
        std::uint32_t partition = 0;
        std::uint32_t node = 0;
        bool is_refresh = false;
        bool node_cache_hit = false;
        bool is_write = false;
    };

    struct NodeRt {
        std::unique_ptr<wfq::CpuScheduler> cpu;
        std::unique_ptr<wfq::IoScheduler> io;
        std::unique_ptr<cache::SaLruCache> cache;
        int idle_workers = 0;
        double debt_us = 0.0;
        double qp_sum = 0.0;
    };

    struct ProxyRt {
        admission::ProxyState adm;
        std::unique_ptr<cache::AuLruCache> cache;
        std::uint32_t tenant = 0;
    };

    struct TenantRt {
        ru::RuConfig ru_cfg;
        ru::ReadStats stats{100};
        std::unique_ptr<cache::FanoutRouter> router;
        std::unique_ptr<admission::MetaMonitor> monitor;
        autoscale::ScalingState scaling;
        std::uint32_t proxy_begin = 0;
        std::uint32_t proxy_count = 0;
        forecast::MetricSeries history;
        std::vector<double> observed_hours;  // mean RU/s per completed hour
        double hour_ru = 0.0;
        Rng route_rng;
        std::int64_t live = 0;
    };

    struct WorkloadRt {
        workload::WorkloadProfile profile;
        std::unique_ptr<workload::ArrivalGen> gen;
        std::unique_ptr<workload::KeySampler> sampler;
        Rng kind_rng;
        Rng key_rng;
    };

    void push_event(SimTime t, Ev kind, std::int64_t a = 0, std::int64_t b = 0,
                    std::int64_t c = 0);
    std::uint32_t alloc_req();
    void free_req(std::uint32_t slot);

    void advance_hours(SimTime now);
    void close_hour();
    bool proxy_quota_active(SimTime now) const;
    void finish(std::uint32_t slot, SimTime now, metrics::Terminal t, std::int64_t charged);

    void handle_arrival(std::int64_t workload_idx, SimTime now);
    void at_proxy(std::uint32_t slot, SimTime now);
    void spawn_refresh(const Req& origin, SimTime now);
    void to_node(std::uint32_t slot, SimTime now);
    void cpu_dispatch(std::uint32_t node, SimTime now);
    void io_dispatch(std::uint32_t node, SimTime now);
    void handle_cpu_done(std::uint32_t node, std::int64_t slot, SimTime now);
    void handle_io_done(std::uint32_t node, int thread, std::uint32_t slot, SimTime now);
    void complete_at_node(std::uint32_t slot, SimTime now);
    void handle_meta_tick(std::uint32_t tenant, SimTime now);
    void handle_autoscale_tick(SimTime now);
    void handle_reschedule_tick(SimTime now);
    void handle_migration_done(std::uint32_t partition, std::uint32_t dst, SimTime now);
    void recompute_qp_sums();
    void add_debt(std::uint32_t node, double ru, SimTime now);
    double partition_qp(std::uint32_t pid) const { return world_.partitions[pid].quota_ru; }

    scenario::ScenarioConfig cfg_;
    domain::World world_;
    SimTime duration_;
    metrics::MetricsSink sink_;
    Counters counters_;
    std::vector<std::string> decision_log_;

    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::uint64_t next_event_seq_ = 0;
    std::vector<Req> reqs_;
    std::vector<std::uint32_t> free_slots_;

    std::vector<NodeRt> nodes_;
    std::vector<ProxyRt> proxies_;
    std::vector<TenantRt> tenants_;
    std::vector<WorkloadRt> workloads_;
    std::vector<admission::PartitionGate> gates_;
    std::vector<double> part_hour_ru_;               // current-hour charge per partition
    std::vector<std::vector<double>> part_hours_;    // completed hourly RU/s per partition
    std::vector<std::uint8_t> part_migrating_;

    forecast::ForecastConfig forecast_cfg_;
    reschedule::PlannerConfig planner_cfg_;

    std::int64_t live_total_ = 0;
    double concurrency_area_ = 0.0;
    SimTime last_event_time_ = 0;
    std::int64_t current_hour_ = 0;
    bool ran_ = false;
};

}  // namespace abase::sim
