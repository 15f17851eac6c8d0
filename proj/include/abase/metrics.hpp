#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "abase/time.hpp"

namespace abase::metrics {

enum class Terminal : std::uint8_t {
    kProxyCacheHit = 0,
    kNodeCacheHit = 1,
    kDisk = 2,
    kRejectProxyQuota = 3,
    kRejectPartitionQuota = 4,
    kDropQueueOverflow = 5,
};
constexpr int kTerminalCount = 6;

const char* terminal_name(Terminal t);

struct TenantTotals {
    std::int64_t arrivals = 0;
    std::int64_t terminals[kTerminalCount] = {0, 0, 0, 0, 0, 0};
    std::int64_t charged_ru = 0;
    std::int64_t in_flight_at_end = 0;

    std::int64_t success() const {
        return terminals[0] + terminals[1] + terminals[2];
    }
    std::int64_t errors() const {
        return terminals[3] + terminals[4] + terminals[5];
    }
};

// Per-tenant per-second counters plus success latencies. Counters are
// recorded at resolution time (terminal), arrivals at arrival time; the
// conservation audit reconciles the two with the end-of-run in-flight count.
class MetricsSink {
  public:
    MetricsSink(std::uint32_t tenant_count, SimTime duration);

    void on_arrival(std::uint32_t tenant, SimTime now);
    void on_terminal(std::uint32_t tenant, SimTime now, Terminal t, SimTime latency_us,
                     std::int64_t charged_ru);
    void set_in_flight(std::uint32_t tenant, std::int64_t count);

    std::uint32_t tenant_count() const { return static_cast<std::uint32_t>(totals_.size()); }
    std::int64_t seconds() const { return seconds_; }
    const TenantTotals& totals(std::uint32_t tenant) const { return totals_[tenant]; }

    // Window queries used by tests: [s0, s1) in whole seconds.
    std::int64_t count_in(std::uint32_t tenant, Terminal t, std::int64_t s0,
                          std::int64_t s1) const;
    std::int64_t success_in(std::uint32_t tenant, std::int64_t s0, std::int64_t s1) const;
    std::int64_t arrivals_in(std::uint32_t tenant, std::int64_t s0, std::int64_t s1) const;
    // Nearest-rank percentile over all success latencies in [s0, s1); -1
    // when the window has none.
    std::int64_t latency_percentile(std::uint32_t tenant, double pct, std::int64_t s0,
                                    std::int64_t s1) const;

    // Conservation audit: arrivals == resolved + in-flight, per tenant.
    bool audit(std::string* message) const;

    void write_csv(const std::string& path) const;

  private:
    struct Window {
        std::int32_t arrivals = 0;
        std::int32_t terminals[kTerminalCount] = {0, 0, 0, 0, 0, 0};
        std::int64_t charged_ru = 0;
    };

    std::size_t idx(std::uint32_t tenant, std::int64_t second) const {
        return static_cast<std::size_t>(second) * totals_.size() + tenant;
    }

    std::int64_t seconds_;
    std::vector<Window> windows_;                       // [second][tenant]
    std::vector<std::vector<std::int32_t>> latencies_;  // same layout, successes only
    std::vector<TenantTotals> totals_;
};

}  // namespace abase::metrics
