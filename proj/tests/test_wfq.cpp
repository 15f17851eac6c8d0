#include <doctest.h>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "abase/wfq.hpp"

using namespace abase;
using domain::RequestKind;
using wfq::CpuLimits;
using wfq::CpuScheduler;
using wfq::IoScheduler;
using wfq::QueueClass;
using wfq::WfqQueue;

TEST_CASE("classify splits by kind and size threshold") {
    const double threshold = 4096.0;
    CHECK(wfq::classify(RequestKind::kGet, 1024, threshold) == QueueClass::kReadSmall);
    CHECK(wfq::classify(RequestKind::kPut, 8192, threshold) == QueueClass::kWriteLarge);
    CHECK(wfq::classify(RequestKind::kHGetAll, 100 * 1024, threshold) == QueueClass::kReadLarge);
    CHECK(wfq::classify(RequestKind::kHLen, 10, threshold) == QueueClass::kReadSmall);
    CHECK(wfq::classify(RequestKind::kPut, 100, threshold) == QueueClass::kWriteSmall);
    // Boundary: exactly at the threshold counts as large.
    CHECK(wfq::classify(RequestKind::kGet, 4096, threshold) == QueueClass::kReadLarge);
}

TEST_CASE("iops cost is one per block touched") {
    CHECK(wfq::iops_cost(1, 4096) == 1);
    CHECK(wfq::iops_cost(4096, 4096) == 1);
    CHECK(wfq::iops_cost(4097, 4096) == 2);
    CHECK(wfq::iops_cost(0, 4096) == 1);
    CHECK(wfq::iops_cost(3 * 4096 + 1, 4096) == 4);
}

TEST_CASE("vft follows the quota-weighted cost formula") {
    SUBCASE("Q=300 of 400 weights cost by 4/3") {
        WfqQueue q;
        q.push(1, 0, 3.0, 300.0, 400.0, 0, 0);
        CHECK(q.top().vft == doctest::Approx(4.0));
    }
    SUBCASE("Q=100 of 400 weights cost by 4") {
        WfqQueue q;
        q.push(1, 0, 3.0, 100.0, 400.0, 0, 0);
        CHECK(q.top().vft == doctest::Approx(12.0));
    }
    SUBCASE("sole tenant advances by exactly the cost") {
        WfqQueue q;
        for (int i = 1; i <= 5; ++i) {
            q.push(static_cast<std::uint64_t>(i), 0, 2.5, 700.0, 700.0, static_cast<std::uint64_t>(i), 0);
            CHECK(q.pre_vft(0) == doctest::Approx(2.5 * i));
        }
    }
    SUBCASE("zero partition quota is a configuration error") {
        WfqQueue q;
        CHECK_THROWS_AS(q.push(1, 0, 1.0, 0.0, 100.0, 0, 0), std::invalid_argument);
    }
}

TEST_CASE("per-tenant vft sequence is non-decreasing and pops come out ordered") {
    WfqQueue q;
    std::uint64_t seq = 0;
    double last_pre[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < 300; ++i) {
        std::uint32_t tenant = static_cast<std::uint32_t>(i % 3);
        double cost = 1.0 + (i * 7 % 5);
        double quota = 100.0 * (tenant + 1);
        q.push(static_cast<std::uint64_t>(i), tenant, cost, quota, 600.0, seq++, 0);
        CHECK(q.pre_vft(tenant) >= last_pre[tenant]);
        last_pre[tenant] = q.pre_vft(tenant);
    }
    double prev = -1.0;
    while (!q.empty()) {
        auto e = q.pop();
        CHECK(e.vft >= prev);
        prev = e.vft;
    }
}

TEST_CASE("rule 2 enforces class concurrency limits") {
    CpuLimits limits;
    limits.max_reads = 4;
    limits.max_writes = 2;
    limits.write_ru_ceiling = 256.0;
    limits.rule3_enabled = false;
    limits.backlog_limit = 0;
    CpuScheduler sched(limits, true);

    for (int i = 0; i < 6; ++i) {
        CHECK(sched.enqueue(QueueClass::kReadSmall, static_cast<std::uint64_t>(i), 0, 1.0, 100.0,
                            100.0, 0));
    }
    int dispatched = 0;
    while (sched.dequeue(0)) ++dispatched;
    CHECK(dispatched == 4);
    CHECK(sched.inflight().reads == 4);

    sched.complete(QueueClass::kReadSmall, 0, 1.0);
    CHECK(sched.dequeue(0).has_value());
    CHECK_FALSE(sched.dequeue(0).has_value());
}

TEST_CASE("write RU ceiling blocks further writes but never strands a sole write") {
    CpuLimits limits;
    limits.max_writes = 8;
    limits.write_ru_ceiling = 256.0;
    limits.rule3_enabled = false;
    limits.backlog_limit = 0;
    CpuScheduler sched(limits, true);

    SUBCASE("oversized sole write runs alone") {
        CHECK(sched.enqueue(QueueClass::kWriteLarge, 1, 0, 500.0, 100.0, 100.0, 0));
        auto d = sched.dequeue(0);
        REQUIRE(d.has_value());
        CHECK(d->entry.cost == 500.0);
        // A second write cannot join while the ceiling is blown.
        CHECK(sched.enqueue(QueueClass::kWriteSmall, 2, 0, 1.0, 100.0, 100.0, 0));
        CHECK_FALSE(sched.dequeue(0).has_value());
        sched.complete(QueueClass::kWriteLarge, 0, 500.0);
        CHECK(sched.dequeue(0).has_value());
    }

    SUBCASE("ceiling caps cumulative in-flight write RU") {
        for (int i = 0; i < 4; ++i)
            CHECK(sched.enqueue(QueueClass::kWriteLarge, static_cast<std::uint64_t>(i), 0, 100.0,
                                100.0, 100.0, 0));
        CHECK(sched.dequeue(0).has_value());  // 100 RU in flight
        CHECK(sched.dequeue(0).has_value());  // 200 RU
        CHECK_FALSE(sched.dequeue(0).has_value());  // +100 would pass 256
        sched.complete(QueueClass::kWriteLarge, 0, 100.0);
        CHECK(sched.dequeue(0).has_value());
    }
}

TEST_CASE("rule 3 reserves headroom for other tenants") {
    CpuLimits limits;
    limits.max_reads = 4;
    limits.max_writes = 2;
    limits.rule3_enabled = true;
    limits.rule3_fraction = 0.9;  // read cap 3, total cap 5
    limits.backlog_limit = 0;
    CpuScheduler sched(limits, true);

    for (int i = 0; i < 6; ++i)
        CHECK(sched.enqueue(QueueClass::kReadSmall, static_cast<std::uint64_t>(i), 0, 1.0, 100.0,
                            200.0, 0));

    // Tenant 0 may take at most 3 of the 4 read slots.
    CHECK(sched.dequeue(0).has_value());
    CHECK(sched.dequeue(0).has_value());
    CHECK(sched.dequeue(0).has_value());
    CHECK_FALSE(sched.dequeue(0).has_value());
    CHECK(sched.inflight().tenant_reads[0] == 3);

    // Another tenant's entry is eligible immediately, even with a later vft.
    CHECK(sched.enqueue(QueueClass::kReadSmall, 99, 1, 1.0, 100.0, 200.0, 0));
    auto d = sched.dequeue(0);
    REQUIRE(d.has_value());
    CHECK(d->entry.tenant == 1);

    // Slots full now (4 reads); releasing one of tenant 0's lets its next in.
    sched.complete(QueueClass::kReadSmall, 0, 1.0);
    d = sched.dequeue(0);
    REQUIRE(d.has_value());
    CHECK(d->entry.tenant == 0);
}

TEST_CASE("saturated two-tenant service converges to the quota ratio") {
    CpuLimits limits;
    limits.backlog_limit = 0;
    CpuScheduler sched(limits, true);

    const double q0 = 200.0, q1 = 100.0, sum = 300.0;
    std::int64_t served[2] = {0, 0};
    std::uint64_t payload = 0;
    auto top_up = [&](std::uint32_t tenant, double quota) {
        while (sched.queue(QueueClass::kReadSmall).tenant_backlog(tenant) < 4) {
            sched.enqueue(QueueClass::kReadSmall, payload++, tenant, 1.0, quota, sum, 0);
        }
    };
    const int total = 15000;
    for (int i = 0; i < total; ++i) {
        top_up(0, q0);
        top_up(1, q1);
        auto d = sched.dequeue(0);
        REQUIRE(d.has_value());
        ++served[d->entry.tenant];
        sched.complete(d->queue_class, d->entry.tenant, d->entry.cost);
    }
    double ratio = static_cast<double>(served[0]) / static_cast<double>(served[1]);
    CHECK(served[0] + served[1] == total);
    CHECK(ratio > 2.0 * 0.95);
    CHECK(ratio < 2.0 * 1.05);
}

TEST_CASE("fifo mode serves strictly in arrival order") {
    CpuLimits limits;
    limits.rule3_enabled = false;
    limits.backlog_limit = 0;
    CpuScheduler sched(limits, false);

    // Alternate tenants with wildly different quotas; order must not care.
    for (int i = 0; i < 10; ++i) {
        std::uint32_t tenant = static_cast<std::uint32_t>(i % 2);
        sched.enqueue(QueueClass::kReadSmall, static_cast<std::uint64_t>(i), tenant, 5.0, 1.0,
                      1000.0, 0);
    }
    for (int i = 0; i < 10; ++i) {
        auto d = sched.dequeue(0);
        REQUIRE(d.has_value());
        CHECK(d->entry.payload == static_cast<std::uint64_t>(i));
        sched.complete(d->queue_class, d->entry.tenant, d->entry.cost);
    }
}

TEST_CASE("backlog bound rejects per tenant-class in fair mode") {
    CpuLimits limits;
    limits.backlog_limit = 2;
    CpuScheduler sched(limits, true);

    CHECK(sched.enqueue(QueueClass::kReadSmall, 1, 0, 1.0, 100.0, 100.0, 0));
    CHECK(sched.enqueue(QueueClass::kReadSmall, 2, 0, 1.0, 100.0, 100.0, 0));
    CHECK_FALSE(sched.enqueue(QueueClass::kReadSmall, 3, 0, 1.0, 100.0, 100.0, 0));
    // Another tenant and another class still have room.
    CHECK(sched.enqueue(QueueClass::kReadSmall, 4, 1, 1.0, 100.0, 100.0, 0));
    CHECK(sched.enqueue(QueueClass::kWriteSmall, 5, 0, 1.0, 100.0, 100.0, 0));
}

TEST_CASE("backlog bound is global in fifo mode") {
    CpuLimits limits;
    limits.backlog_limit = 3;
    CpuScheduler sched(limits, false);
    CHECK(sched.enqueue(QueueClass::kReadSmall, 1, 0, 1.0, 100.0, 100.0, 0));
    CHECK(sched.enqueue(QueueClass::kWriteSmall, 2, 1, 1.0, 100.0, 100.0, 0));
    CHECK(sched.enqueue(QueueClass::kReadLarge, 3, 2, 1.0, 100.0, 100.0, 0));
    CHECK_FALSE(sched.enqueue(QueueClass::kWriteLarge, 4, 3, 1.0, 100.0, 100.0, 0));
}

TEST_CASE("io scheduler assigns idle basic threads in id order") {
    IoScheduler io(2, 1, true);
    io.enqueue(QueueClass::kReadSmall, 1, 0, 1.0, 100.0, 200.0, 0);
    io.enqueue(QueueClass::kReadSmall, 2, 1, 1.0, 100.0, 200.0, 0);
    auto out = io.dispatch(0);
    REQUIRE(out.size() == 2);
    CHECK(out[0].thread == 0);
    CHECK(out[1].thread == 1);
    CHECK_FALSE(out[0].extra);
    CHECK_FALSE(out[1].extra);
    CHECK(io.extra_activations() == 0);
}

TEST_CASE("rule 4 activates a reserve thread only under single-tenant monopoly") {
    IoScheduler io(2, 1, true);

    // Tenant 0 takes both basic threads.
    io.enqueue(QueueClass::kReadSmall, 1, 0, 1.0, 100.0, 200.0, 0);
    io.enqueue(QueueClass::kReadSmall, 2, 0, 1.0, 100.0, 200.0, 0);
    auto out = io.dispatch(0);
    REQUIRE(out.size() == 2);

    // More tenant-0 work must wait; it never gets the reserve thread.
    io.enqueue(QueueClass::kReadSmall, 3, 0, 1.0, 100.0, 200.0, 0);
    out = io.dispatch(0);
    CHECK(out.empty());

    // A second tenant's entry rides the reserve thread immediately.
    io.enqueue(QueueClass::kReadSmall, 4, 1, 1.0, 100.0, 200.0, 0);
    out = io.dispatch(0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].entry.tenant == 1);
    CHECK(out[0].extra);
    CHECK(out[0].thread == 2);
    CHECK(io.extra_activations() == 1);

    // Releasing a basic thread lets the queued tenant-0 entry run there.
    io.complete(0);
    out = io.dispatch(0);
    REQUIRE(out.size() == 1);
    CHECK(out[0].entry.tenant == 0);
    CHECK(out[0].thread == 0);
    CHECK_FALSE(out[0].extra);
    CHECK(io.extra_activations() == 1);
}

TEST_CASE("interleaved tenants on sufficient threads never touch the reserve") {
    IoScheduler io(2, 1, true);
    for (int round = 0; round < 50; ++round) {
        io.enqueue(QueueClass::kReadSmall, static_cast<std::uint64_t>(round * 2), 0, 1.0, 100.0,
                   200.0, 0);
        io.enqueue(QueueClass::kReadSmall, static_cast<std::uint64_t>(round * 2 + 1), 1, 1.0,
                   100.0, 200.0, 0);
        auto out = io.dispatch(0);
        CHECK(out.size() == 2);
        for (const auto& a : out) {
            CHECK_FALSE(a.extra);
            io.complete(a.thread);
        }
    }
    CHECK(io.extra_activations() == 0);
    CHECK(io.idle());
}
