#include "abase/admission.hpp"

#include <algorithm>

namespace abase::admission {

ProxyState make_proxy_state(std::uint32_t proxy_id, std::uint32_t tenant_id,
                            double tenant_quota, std::uint32_t proxy_count,
                            bool burst, SimTime now) {
    ProxyState s;
    s.proxy_id = proxy_id;
    s.tenant_id = tenant_id;
    s.proxy_quota = tenant_quota / static_cast<double>(proxy_count);
    s.burst_mode = burst;
    s.bucket = TokenBucket(s.ceiling(), s.ceiling(), now);
    return s;
}

PartitionGate make_partition_gate(std::uint32_t partition_id, double partition_quota,
                                  SimTime now) {
    PartitionGate g;
    g.partition_id = partition_id;
    g.partition_quota = partition_quota;
    g.bucket = TokenBucket(g.rate(), g.rate(), now);
    return g;
}

Decision proxy_admit(ProxyState& state, double request_ru, SimTime now) {
    // Traffic is sampled on the offered stream, rejected or not: the meta
    // monitor watches demand. Sampling only admissions would cap the signal
    // at the enforced ceiling and burst would bounce right back while the
    // overload is still running.
    state.ru_since_poll += request_ru;
    if (request_ru <= 0.0) return Decision::kAdmit;
    if (!state.bucket.try_take(request_ru, now)) return Decision::kReject;
    return Decision::kAdmit;
}

void set_burst_mode(ProxyState& state, bool burst, SimTime now) {
    if (state.burst_mode == burst) return;
    state.burst_mode = burst;
    state.bucket.reset_rate(state.ceiling(), state.ceiling(), now);
}

Decision partition_admit(PartitionGate& gate, double request_ru, SimTime now) {
    if (gate.rate() <= 0.0) return Decision::kReject;
    if (request_ru <= 0.0) return Decision::kAdmit;
    return gate.bucket.try_take(request_ru, now) ? Decision::kAdmit : Decision::kReject;
}

void reset_gate_quota(PartitionGate& gate, double partition_quota, SimTime now) {
    gate.partition_quota = partition_quota;
    gate.bucket.reset_rate(gate.rate(), gate.rate(), now);
}

std::vector<Directive> MetaMonitor::tick(std::uint32_t tenant_id,
                                         std::vector<ProxyState*>& proxies, SimTime now) {
    (void)now;
    double total = 0.0;
    for (ProxyState* p : proxies) {
        total += p->ru_since_poll;
        p->ru_since_poll = 0.0;
    }
    double period_s = seconds_from_us(poll_period_);
    std::vector<Directive> out;
    if (total > tenant_quota_ * period_s) {
        // Over quota in aggregate: all proxies drop back to the standard
        // ceiling. Issued even if already reverted (receivers treat it as a
        // no-op), so a lost sample cannot strand the system.
        out.push_back(Directive{tenant_id, false});
        reverted_ = true;
    } else if (reverted_) {
        // One full compliant period restores autonomous bursting.
        out.push_back(Directive{tenant_id, true});
        reverted_ = false;
    }
    return out;
}

}  // namespace abase::admission
