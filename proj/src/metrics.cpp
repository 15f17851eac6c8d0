#include "abase/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace abase::metrics {

const char* terminal_name(Terminal t) {
    switch (t) {
        case Terminal::kProxyCacheHit: return "proxy_cache_hit";
        case Terminal::kNodeCacheHit: return "node_cache_hit";
        case Terminal::kDisk: return "disk_served";
        case Terminal::kRejectProxyQuota: return "rejected_proxy_quota";
        case Terminal::kRejectPartitionQuota: return "rejected_partition_quota";
        case Terminal::kDropQueueOverflow: return "dropped_queue_overflow";
    }
    return "unknown";
}

MetricsSink::MetricsSink(std::uint32_t tenant_count, SimTime duration)
    : seconds_((duration + kUsPerSecond - 1) / kUsPerSecond), totals_(tenant_count) {
    if (tenant_count == 0) throw std::invalid_argument("metrics: no tenants");
    if (seconds_ <= 0) throw std::invalid_argument("metrics: empty duration");
    windows_.resize(static_cast<std::size_t>(seconds_) * tenant_count);
    latencies_.resize(windows_.size());
}

void MetricsSink::on_arrival(std::uint32_t tenant, SimTime now) {
    std::int64_t s = now / kUsPerSecond;
    if (s >= seconds_) s = seconds_ - 1;
    windows_[idx(tenant, s)].arrivals += 1;
    totals_[tenant].arrivals += 1;
}

void MetricsSink::on_terminal(std::uint32_t tenant, SimTime now, Terminal t,
                              SimTime latency_us, std::int64_t charged_ru) {
    std::int64_t s = now / kUsPerSecond;
    if (s >= seconds_) s = seconds_ - 1;
    Window& w = windows_[idx(tenant, s)];
    w.terminals[static_cast<int>(t)] += 1;
    w.charged_ru += charged_ru;
    totals_[tenant].terminals[static_cast<int>(t)] += 1;
    totals_[tenant].charged_ru += charged_ru;
    if (static_cast<int>(t) <= static_cast<int>(Terminal::kDisk)) {
        latencies_[idx(tenant, s)].push_back(static_cast<std::int32_t>(
            std::min<SimTime>(latency_us, INT32_MAX)));
    }
}

void MetricsSink::set_in_flight(std::uint32_t tenant, std::int64_t count) {
    totals_[tenant].in_flight_at_end = count;
}

std::int64_t MetricsSink::count_in(std::uint32_t tenant, Terminal t, std::int64_t s0,
                                   std::int64_t s1) const {
    s0 = std::max<std::int64_t>(s0, 0);
    s1 = std::min(s1, seconds_);
    std::int64_t sum = 0;
    for (std::int64_t s = s0; s < s1; ++s) sum += windows_[idx(tenant, s)].terminals[static_cast<int>(t)];
    return sum;
}

std::int64_t MetricsSink::success_in(std::uint32_t tenant, std::int64_t s0,
                                     std::int64_t s1) const {
    return count_in(tenant, Terminal::kProxyCacheHit, s0, s1) +
           count_in(tenant, Terminal::kNodeCacheHit, s0, s1) +
           count_in(tenant, Terminal::kDisk, s0, s1);
}

std::int64_t MetricsSink::arrivals_in(std::uint32_t tenant, std::int64_t s0,
                                      std::int64_t s1) const {
    s0 = std::max<std::int64_t>(s0, 0);
    s1 = std::min(s1, seconds_);
    std::int64_t sum = 0;
    for (std::int64_t s = s0; s < s1; ++s) sum += windows_[idx(tenant, s)].arrivals;
    return sum;
}

std::int64_t MetricsSink::latency_percentile(std::uint32_t tenant, double pct,
                                             std::int64_t s0, std::int64_t s1) const {
    s0 = std::max<std::int64_t>(s0, 0);
    s1 = std::min(s1, seconds_);
    std::vector<std::int32_t> all;
    for (std::int64_t s = s0; s < s1; ++s) {
        const auto& v = latencies_[idx(tenant, s)];
        all.insert(all.end(), v.begin(), v.end());
    }
    if (all.empty()) return -1;
    std::sort(all.begin(), all.end());
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(all.size())));
    if (rank == 0) rank = 1;
    if (rank > all.size()) rank = all.size();
    return all[rank - 1];
}

bool MetricsSink::audit(std::string* message) const {
    for (std::uint32_t t = 0; t < totals_.size(); ++t) {
        const TenantTotals& tt = totals_[t];
        std::int64_t resolved = tt.success() + tt.errors();
        if (tt.arrivals != resolved + tt.in_flight_at_end) {
            if (message) {
                std::ostringstream os;
                os << "tenant " << t << ": arrivals " << tt.arrivals << " != resolved "
                   << resolved << " + in_flight " << tt.in_flight_at_end;
                *message = os.str();
            }
            return false;
        }
    }
    if (message) *message = "ok";
    return true;
}

namespace {

std::int64_t percentile_sorted(const std::vector<std::int32_t>& sorted, double pct) {
    if (sorted.empty()) return -1;
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(sorted.size())));
    if (rank == 0) rank = 1;
    if (rank > sorted.size()) rank = sorted.size();
    return sorted[rank - 1];
}

}  // namespace

void MetricsSink::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("metrics: cannot open " + path);
    out << "second,tenant,arrivals,resolved,success,proxy_cache_hits,node_cache_hits,"
           "disk_served,rejected_proxy_quota,rejected_partition_quota,"
           "dropped_queue_overflow,charged_ru,p50_latency_us,p99_latency_us\n";
    const std::uint32_t nt = tenant_count();
    for (std::int64_t s = 0; s < seconds_; ++s) {
        for (std::uint32_t t = 0; t < nt; ++t) {
            const Window& w = windows_[idx(t, s)];
            std::int64_t success = w.terminals[0] + w.terminals[1] + w.terminals[2];
            std::int64_t errors = w.terminals[3] + w.terminals[4] + w.terminals[5];
            std::vector<std::int32_t> lat = latencies_[idx(t, s)];
            std::sort(lat.begin(), lat.end());
            out << s << ',' << t << ',' << w.arrivals << ',' << (success + errors) << ','
                << success << ',' << w.terminals[0] << ',' << w.terminals[1] << ','
                << w.terminals[2] << ',' << w.terminals[3] << ',' << w.terminals[4] << ','
                << w.terminals[5] << ',' << w.charged_ru << ','
                << percentile_sorted(lat, 50.0) << ',' << percentile_sorted(lat, 99.0)
                << '\n';
        }
    }
}

}  // namespace abase::metrics
