#include <doctest.h>

#include <cstdint>
#include <vector>

#include "abase/admission.hpp"
#include "abase/rng.hpp"
#include "abase/time.hpp"

using namespace abase;
using admission::Decision;
using admission::MetaMonitor;
using admission::PartitionGate;
using admission::ProxyState;

namespace {

// Offers `rate` one-RU requests per second on an even grid over [0, secs)
// and returns how many were admitted in [from_s, to_s).
std::int64_t offer_steady(ProxyState& st, double rate, int secs, int from_s, int to_s) {
    std::int64_t admitted = 0;
    auto gap = static_cast<SimTime>(kUsPerSecond / rate);
    for (SimTime t = 0; t < secs * kUsPerSecond; t += gap) {
        if (admission::proxy_admit(st, 1.0, t) == Decision::kAdmit) {
            if (t >= from_s * kUsPerSecond && t < to_s * kUsPerSecond) ++admitted;
        }
    }
    return admitted;
}

}  // namespace

TEST_CASE("proxy admits up to double quota in burst mode") {
    auto st = admission::make_proxy_state(0, 0, 100.0, 1, true, 0);
    CHECK(st.ceiling() == 200.0);
    // 125 RU/s steady (8000 us grid, exact) stays under the burst ceiling:
    // everything is admitted.
    std::int64_t admitted = offer_steady(st, 125.0, 10, 0, 10);
    CHECK(admitted == 1250);
}

TEST_CASE("zero-cost requests always pass") {
    auto st = admission::make_proxy_state(0, 0, 1.0, 1, false, 0);
    // Drain the bucket first.
    while (admission::proxy_admit(st, 1.0, 0) == Decision::kAdmit) {
    }
    CHECK(admission::proxy_admit(st, 0.0, 0) == Decision::kAdmit);
    CHECK(st.bucket.tokens(0) < 1.0);
}

TEST_CASE("standard mode clips steady overload to the quota rate") {
    auto st = admission::make_proxy_state(0, 0, 100.0, 1, false, 0);
    CHECK(st.ceiling() == 100.0);
    // Skip two seconds: the initial bucket fill is one window of slack and
    // the 50 RU/s overload takes that long to burn it off.
    std::int64_t admitted = offer_steady(st, 150.0, 12, 2, 12);
    CHECK(admitted >= 990);
    CHECK(admitted <= 1010);
}

TEST_CASE("partition gate caps at three times the partition quota") {
    SUBCASE("offered at the cap rate passes in full") {
        auto gate = admission::make_partition_gate(0, 1000.0, 0);
        std::int64_t admitted = 0;
        std::int64_t offered = 0;
        auto gap = static_cast<SimTime>(kUsPerSecond / 3000.0);
        for (SimTime t = 0; t < 10 * kUsPerSecond; t += gap) {
            ++offered;
            if (admission::partition_admit(gate, 1.0, t) == Decision::kAdmit) ++admitted;
        }
        CHECK(offered >= 30000);
        CHECK(admitted == offered);
    }

    SUBCASE("excess above the cap is rejected") {
        auto gate = admission::make_partition_gate(0, 1000.0, 0);
        std::int64_t admitted = 0;
        std::int64_t offered = 0;
        auto gap = static_cast<SimTime>(kUsPerSecond / 5000.0);
        for (SimTime t = kUsPerSecond; t < 11 * kUsPerSecond; t += gap) {
            ++offered;
            if (admission::partition_admit(gate, 1.0, t) == Decision::kAdmit) ++admitted;
        }
        // 3000/s admitted over 10 s, within one bucket window of slack.
        CHECK(admitted >= 30000 - 3000);
        CHECK(admitted <= 30000 + 3000);
        CHECK(offered - admitted >= 17000);
    }

    SUBCASE("zero quota rejects everything") {
        auto gate = admission::make_partition_gate(0, 0.0, 0);
        CHECK(admission::partition_admit(gate, 1.0, 0) == Decision::kReject);
        CHECK(admission::partition_admit(gate, 0.0, kUsPerSecond) == Decision::kReject);
    }
}

TEST_CASE("partition admission respects the token-bound over any interval") {
    auto gate = admission::make_partition_gate(0, 50.0, 0);
    Rng rng(11);
    std::vector<std::pair<SimTime, double>> admitted_log;
    SimTime t = 0;
    for (int i = 0; i < 20000; ++i) {
        t += static_cast<SimTime>(rng.uniform_int(4000));
        double ru = 1.0 + static_cast<double>(rng.uniform_int(3));
        if (admission::partition_admit(gate, ru, t) == Decision::kAdmit) {
            admitted_log.push_back({t, ru});
        }
    }
    // Replay: over any window [a, b], admitted RU <= 3*Q_P*(b-a) + capacity.
    const double rate = 150.0;
    const double cap = 150.0;
    for (std::size_t a = 0; a < admitted_log.size(); a += 997) {
        double sum = 0.0;
        for (std::size_t b = a; b < admitted_log.size(); ++b) {
            sum += admitted_log[b].second;
            double span = seconds_from_us(admitted_log[b].first - admitted_log[a].first);
            CHECK(sum <= rate * span + cap + 1e-6);
        }
    }
}

TEST_CASE("meta monitor reverts on aggregate overrun and later restores burst") {
    const double q_t = 400.0;
    MetaMonitor mon(q_t, 5 * kUsPerSecond);
    std::vector<ProxyState> proxies;
    for (std::uint32_t i = 0; i < 4; ++i) {
        proxies.push_back(admission::make_proxy_state(i, 7, q_t, 4, true, 0));
    }
    std::vector<ProxyState*> ptrs;
    for (auto& p : proxies) ptrs.push_back(&p);

    SUBCASE("sum above quota issues revert") {
        // Each proxy books 1.6x its share of one poll period.
        for (auto& p : proxies) p.ru_since_poll = 1.6 * (q_t / 4) * 5.0;
        auto dirs = mon.tick(7, ptrs, 5 * kUsPerSecond);
        REQUIRE(dirs.size() == 1);
        CHECK(dirs[0].tenant_id == 7);
        CHECK(dirs[0].burst == false);
    }

    SUBCASE("idle tenant gets no directive") {
        auto dirs = mon.tick(7, ptrs, 5 * kUsPerSecond);
        CHECK(dirs.empty());
    }

    SUBCASE("total exactly at quota does not revert") {
        for (auto& p : proxies) p.ru_since_poll = (q_t / 4) * 5.0;
        auto dirs = mon.tick(7, ptrs, 5 * kUsPerSecond);
        CHECK(dirs.empty());
    }

    SUBCASE("compliant period after a revert restores burst") {
        for (auto& p : proxies) p.ru_since_poll = 2.0 * (q_t / 4) * 5.0;
        auto dirs = mon.tick(7, ptrs, 5 * kUsPerSecond);
        REQUIRE(dirs.size() == 1);
        CHECK_FALSE(dirs[0].burst);
        for (auto& p : proxies) admission::set_burst_mode(p, false, 5 * kUsPerSecond);

        for (auto& p : proxies) p.ru_since_poll = 0.5 * (q_t / 4) * 5.0;
        dirs = mon.tick(7, ptrs, 10 * kUsPerSecond);
        REQUIRE(dirs.size() == 1);
        CHECK(dirs[0].burst == true);
    }
}

TEST_CASE("burst directives are idempotent on proxy state") {
    auto st = admission::make_proxy_state(0, 0, 100.0, 1, true, 0);
    admission::proxy_admit(st, 30.0, 0);
    double tokens_before = st.bucket.tokens(0);
    admission::set_burst_mode(st, true, 0);  // already bursting: no-op
    CHECK(st.bucket.tokens(0) == tokens_before);
    CHECK(st.bucket.capacity() == 200.0);

    admission::set_burst_mode(st, false, 0);
    CHECK(st.bucket.capacity() == 100.0);
    double after_revert = st.bucket.tokens(0);
    admission::set_burst_mode(st, false, 0);  // repeat revert: no-op
    CHECK(st.bucket.tokens(0) == after_revert);
}

TEST_CASE("closed loop with meta monitor converges to the tenant quota") {
    // One tenant, 2 proxies, quota 100 RU/s, each proxy offered 100 RU/s
    // (total 200 = 2x quota, all admissible under burst ceilings alone).
    const double q_t = 100.0;
    MetaMonitor mon(q_t, 5 * kUsPerSecond);
    std::vector<ProxyState> proxies;
    for (std::uint32_t i = 0; i < 2; ++i) {
        proxies.push_back(admission::make_proxy_state(i, 0, q_t, 2, true, 0));
    }
    std::vector<ProxyState*> ptrs;
    for (auto& p : proxies) ptrs.push_back(&p);

    const int horizon_s = 60;
    SimTime next_poll = 5 * kUsPerSecond;
    std::int64_t admitted_total = 0;
    std::int64_t admitted_late = 0;  // after two poll periods
    auto gap = static_cast<SimTime>(kUsPerSecond / 100.0);
    for (SimTime t = 0; t < horizon_s * kUsPerSecond; t += gap) {
        while (t >= next_poll) {
            auto dirs = mon.tick(0, ptrs, next_poll);
            for (const auto& d : dirs) {
                for (auto& p : proxies) admission::set_burst_mode(p, d.burst, next_poll);
            }
            next_poll += 5 * kUsPerSecond;
        }
        for (auto& p : proxies) {
            if (admission::proxy_admit(p, 1.0, t) == Decision::kAdmit) {
                ++admitted_total;
                if (t >= 10 * kUsPerSecond) ++admitted_late;
            }
        }
    }
    // Transient bound: never more than 2x quota overall.
    CHECK(admitted_total <= 2 * q_t * horizon_s);
    // Converged bound: demand stays above quota the whole run, so the revert
    // sticks and throughput settles at the quota rate (plus one window of
    // bucket slack around the transition).
    double late_span = horizon_s - 10;
    CHECK(admitted_late <= q_t * (late_span + 1));
    CHECK(admitted_late >= q_t * late_span * 0.95);
}
