#pragma once

#include <cstdint>
#include <vector>

#include "abase/time.hpp"

namespace abase::admission {

// Lazy-refill token bucket over the integer microsecond clock. Refill is
// computed from elapsed time on each access, so idle buckets cost nothing.
class TokenBucket {
  public:
    TokenBucket() = default;
    TokenBucket(double rate_per_s, double capacity, SimTime now)
        : rate_(rate_per_s), capacity_(capacity), tokens_(capacity), last_(now) {}

    // Take `amount` tokens if available. Zero-cost requests always pass.
    bool try_take(double amount, SimTime now) {
        refill(now);
        if (tokens_ + 1e-9 < amount) return false;
        tokens_ -= amount;
        return true;
    }

    // Change the sustained rate; capacity follows the 1-second window rule.
    void reset_rate(double rate_per_s, double capacity, SimTime now) {
        refill(now);
        rate_ = rate_per_s;
        capacity_ = capacity;
        if (tokens_ > capacity_) tokens_ = capacity_;
    }

    double tokens(SimTime now) {
        refill(now);
        return tokens_;
    }

    double rate() const { return rate_; }
    double capacity() const { return capacity_; }

  private:
    void refill(SimTime now) {
        if (now <= last_) return;
        double dt = seconds_from_us(now - last_);
        tokens_ = std::min(capacity_, tokens_ + rate_ * dt);
        last_ = now;
    }

    double rate_ = 0.0;
    double capacity_ = 0.0;
    double tokens_ = 0.0;
    SimTime last_ = 0;
};

enum class Decision { kAdmit, kReject };

struct ProxyState {
    std::uint32_t proxy_id = 0;
    std::uint32_t tenant_id = 0;
    double proxy_quota = 0.0;  // Q_T / proxy_count, RU per second
    bool burst_mode = true;    // doubles the enforced ceiling
    TokenBucket bucket;

    // RU offered since the meta monitor last sampled this proxy (demand,
    // not admissions; rejected requests count).
    double ru_since_poll = 0.0;

    double ceiling() const { return burst_mode ? 2.0 * proxy_quota : proxy_quota; }
};

struct PartitionGate {
    std::uint32_t partition_id = 0;
    double partition_quota = 0.0;  // Q_P
    double cap_multiplier = 3.0;
    TokenBucket bucket;

    double rate() const { return cap_multiplier * partition_quota; }
};

// Builds state with a full bucket (ceiling × 1 s window).
ProxyState make_proxy_state(std::uint32_t proxy_id, std::uint32_t tenant_id,
                            double tenant_quota, std::uint32_t proxy_count,
                            bool burst, SimTime now);
PartitionGate make_partition_gate(std::uint32_t partition_id, double partition_quota,
                                  SimTime now);

// Proxy-level check. Cache hits must not reach this call; they bypass quota
// entirely. Debits the bucket and traffic sample on admit.
Decision proxy_admit(ProxyState& state, double request_ru, SimTime now);

// Applies a ceiling change in place (burst toggle reshapes the bucket).
void set_burst_mode(ProxyState& state, bool burst, SimTime now);

// Node-entry hard cap at 3 × Q_P.
Decision partition_admit(PartitionGate& gate, double request_ru, SimTime now);

// Re-arms a gate after a quota change.
void reset_gate_quota(PartitionGate& gate, double partition_quota, SimTime now);

struct Directive {
    std::uint32_t tenant_id = 0;
    bool burst = false;  // false = revert to standard quota
};

// Periodic tenant-level control. Sums per-proxy traffic since the last poll;
// strictly above Q_T issues a revert, a fully compliant period restores
// burst. Directives are idempotent.
class MetaMonitor {
  public:
    MetaMonitor(double tenant_quota, SimTime poll_period_us)
        : tenant_quota_(tenant_quota), poll_period_(poll_period_us) {}

    std::vector<Directive> tick(std::uint32_t tenant_id, std::vector<ProxyState*>& proxies,
                                SimTime now);

    void set_tenant_quota(double q) { tenant_quota_ = q; }
    SimTime poll_period() const { return poll_period_; }

  private:
    double tenant_quota_;
    SimTime poll_period_;
    bool reverted_ = false;
};

}  // namespace abase::admission
