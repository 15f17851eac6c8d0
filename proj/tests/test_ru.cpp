#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "abase/rng.hpp"
#include "abase/ru.hpp"

using namespace abase;
using ru::ReadStats;
using ru::RuConfig;
using ru::ServedFrom;

namespace {

RuConfig cfg_with(std::uint32_t replicas) {
    RuConfig c;
    c.replica_count = replicas;
    return c;
}

}  // namespace

TEST_CASE("ru_write charges replicas times rounded units") {
    CHECK(ru::ru_write(2048, cfg_with(3)) == 3);
    CHECK(ru::ru_write(0, cfg_with(1)) == 1);
    CHECK(ru::ru_write(3072, cfg_with(2)) == 4);
    CHECK(ru::ru_write(1, cfg_with(1)) == 1);
    CHECK(ru::ru_write(2049, cfg_with(1)) == 2);
    CHECK(ru::ru_write(4096, cfg_with(1)) == 2);
}

TEST_CASE("estimate_read_ru follows the discounted-size formula") {
    RuConfig cfg;
    ReadStats stats(4);

    SUBCASE("cold tenant estimates one unit") {
        CHECK(ru::estimate_read_ru(stats, cfg) == 1.0);
    }

    SUBCASE("E[S]=4096 with half hits costs exactly one unit") {
        stats.update(4096, true);
        stats.update(4096, false);
        CHECK(stats.mean_size() == 4096.0);
        CHECK(stats.hit_ratio() == 0.5);
        CHECK(ru::estimate_read_ru(stats, cfg) == 1.0);
    }

    SUBCASE("full hit ratio estimates zero") {
        stats.update(9999, true);
        stats.update(123, true);
        CHECK(ru::estimate_read_ru(stats, cfg) == 0.0);
    }

    SUBCASE("two misses of 1024 and 3072 average to one unit") {
        stats.update(1024, false);
        stats.update(3072, false);
        CHECK(stats.mean_size() == 2048.0);
        CHECK(ru::estimate_read_ru(stats, cfg) == 1.0);
    }
}

TEST_CASE("settle_read bills actual size except proxy hits") {
    RuConfig cfg;
    CHECK(ru::settle_read(2048, ServedFrom::kDisk, cfg) == 1);
    CHECK(ru::settle_read(0, ServedFrom::kProxyCache, cfg) == 0);
    CHECK(ru::settle_read(1 << 20, ServedFrom::kProxyCache, cfg) == 0);
    CHECK(ru::settle_read(5000, ServedFrom::kNodeCache, cfg) == 3);
    CHECK(ru::settle_read(0, ServedFrom::kDisk, cfg) == 1);
    CHECK(ru::settle_read(1, ServedFrom::kNodeCache, cfg) == 1);
}

TEST_CASE("read stats window semantics") {
    SUBCASE("single element") {
        ReadStats stats(100);
        stats.update(1024, false);
        CHECK(stats.mean_size() == 1024.0);
        CHECK(stats.hit_ratio() == 0.0);
    }

    SUBCASE("two-element mean at k=2") {
        ReadStats stats(2);
        stats.update(1024, true);
        stats.update(3072, false);
        CHECK(stats.mean_size() == 2048.0);
        CHECK(stats.hit_ratio() == 0.5);
    }

    SUBCASE("window of one tracks only the last update") {
        ReadStats stats(1);
        stats.update(8192, false);
        stats.update(512, true);
        CHECK(stats.mean_size() == 512.0);
        CHECK(stats.hit_ratio() == 1.0);
    }

    SUBCASE("flush property: window_k updates erase older state") {
        const std::uint32_t k = 7;
        ReadStats a(k);
        ReadStats b(k);
        // a starts polluted, b starts clean.
        a.update(999999, true);
        a.update(123, false);
        Rng rng(42);
        for (std::uint32_t i = 0; i < k; ++i) {
            std::int64_t size = static_cast<std::int64_t>(rng.uniform_int(10000));
            bool hit = rng.uniform01() < 0.3;
            a.update(size, hit);
            b.update(size, hit);
        }
        CHECK(a.mean_size() == b.mean_size());
        CHECK(a.hit_ratio() == b.hit_ratio());
    }
}

TEST_CASE("hash op estimates decompose into base plus scan") {
    RuConfig cfg;
    ReadStats stats(10);

    CHECK(ru::estimate_hlen_ru() == 1.0);

    SUBCASE("no hash history falls back to one unit") {
        CHECK(ru::estimate_hgetall_ru(stats, cfg) == 1.0);
    }

    SUBCASE("est_len 4 at 512 bytes per field adds one unit of scan") {
        stats.update_hash(4, 4 * 512);
        CHECK(stats.mean_hash_len() == 4.0);
        CHECK(stats.mean_field_size() == 512.0);
        CHECK(ru::estimate_hgetall_ru(stats, cfg) == 2.0);
    }

    SUBCASE("empty hashes contribute no scan cost") {
        stats.update_hash(0, 0);
        CHECK(ru::estimate_hgetall_ru(stats, cfg) == 1.0);
    }
}

TEST_CASE("settlement of a read stream sums only non-proxy hits") {
    RuConfig cfg;
    Rng rng(7);
    std::int64_t expected = 0;
    std::int64_t billed = 0;
    for (int i = 0; i < 1000; ++i) {
        std::int64_t size = static_cast<std::int64_t>(rng.uniform_int(10000));
        int source = static_cast<int>(rng.uniform_int(3));
        auto from = static_cast<ServedFrom>(source);
        billed += ru::settle_read(size, from, cfg);
        if (from != ServedFrom::kProxyCache) {
            expected += std::max<std::int64_t>(1, (size + cfg.unit_size - 1) / cfg.unit_size);
        }
    }
    CHECK(billed == expected);
}

TEST_CASE("estimate is monotone non-increasing in the hit ratio") {
    RuConfig cfg;
    // Fixed sizes, sweep the number of hits in a window of 10.
    double prev = 1e18;
    for (int hits = 0; hits <= 10; ++hits) {
        ReadStats stats(10);
        for (int i = 0; i < 10; ++i) stats.update(4096, i < hits);
        double est = ru::estimate_read_ru(stats, cfg);
        CHECK(est <= prev);
        prev = est;
    }
    CHECK(prev == 0.0);
}
