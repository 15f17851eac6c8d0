#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <unordered_map>
#include <vector>

#include "abase/rng.hpp"
#include "abase/time.hpp"

namespace abase::cache {

// Node-side size-aware LRU: four size classes with their own LRU lists and
// byte budgets. Budgets follow each class's hit density (decayed hits per
// resident byte), so classes that occupy much memory while yielding few hits
// are squeezed first, and within a class the LRU tail goes first.
class SaLruCache {
  public:
    struct Result {
        bool hit = false;
        std::int64_t size = 0;
    };

    explicit SaLruCache(std::int64_t capacity_bytes,
                        SimTime hit_decay_half_life = 60 * kUsPerSecond);

    Result get(std::uint64_t key, SimTime now);
    // Returns evicted keys. An object larger than the whole cache is
    // rejected without touching any state.
    std::vector<std::uint64_t> put(std::uint64_t key, std::int64_t size, SimTime now);
    bool contains(std::uint64_t key) const { return index_.count(key) != 0; }

    std::int64_t resident_bytes() const { return total_bytes_; }
    std::size_t entries() const { return index_.size(); }
    std::int64_t capacity() const { return capacity_; }
    std::int64_t class_bytes(int cls) const { return bytes_[cls]; }

    static int size_class(std::int64_t size);
    static constexpr int kClasses = 4;

  private:
    struct Entry {
        std::uint64_t key;
        std::int64_t size;
        int cls;
    };
    using List = std::list<Entry>;

    void decay_to(int cls, SimTime now);
    void compute_budgets(double* budgets) const;
    void erase_entry(List::iterator it);

    std::int64_t capacity_;
    double decay_per_us_;  // ln(2) / half-life
    List lists_[kClasses];
    std::int64_t bytes_[kClasses] = {0, 0, 0, 0};
    double decayed_hits_[kClasses] = {0, 0, 0, 0};
    SimTime decay_stamp_[kClasses] = {0, 0, 0, 0};
    std::unordered_map<std::uint64_t, List::iterator> index_;
    std::int64_t total_bytes_ = 0;
};

// Proxy-side LRU with TTL and active refresh: a hot entry close to expiry
// triggers an asynchronous re-fetch instead of letting the TTL lapse into a
// client-visible miss.
class AuLruCache {
  public:
    struct Config {
        std::int64_t capacity_bytes = 1'073'741'824;
        SimTime refresh_window = 5 * kUsPerSecond;
        std::uint32_t hot_threshold = 3;  // hits per window to count as hot
    };

    struct Result {
        bool hit = false;
        std::int64_t size = 0;
        bool schedule_refresh = false;  // caller re-fetches via the node path
    };

    explicit AuLruCache(Config cfg) : cfg_(cfg) {}

    Result get(std::uint64_t key, SimTime now);
    std::vector<std::uint64_t> put(std::uint64_t key, std::int64_t size, SimTime expire_at,
                                   SimTime now);
    // Refresh landed: renew TTL in place without promoting the entry (a
    // refresh is not a client access). Dropped silently if the entry was
    // evicted while the fetch was in flight.
    void refresh_complete(std::uint64_t key, std::int64_t size, SimTime expire_at);
    void refresh_failed(std::uint64_t key);
    void invalidate(std::uint64_t key);

    std::int64_t resident_bytes() const { return total_bytes_; }
    std::size_t entries() const { return index_.size(); }

  private:
    struct Entry {
        std::uint64_t key;
        std::int64_t size;
        SimTime expire_at;
        SimTime window_start;
        std::uint32_t window_hits;
        bool refreshing;
    };
    using List = std::list<Entry>;

    void erase_entry(List::iterator it);

    Config cfg_;
    List lru_;  // front = MRU
    std::unordered_map<std::uint64_t, List::iterator> index_;
    std::int64_t total_bytes_ = 0;
};

// Client-side limited fan-out: keys hash to one of n proxy groups; the
// request goes to a uniformly random member of that group. n = 1 degenerates
// to pure random routing, n = N pins every key to one proxy.
class FanoutRouter {
  public:
    // Throws std::invalid_argument unless n divides N and both are positive.
    FanoutRouter(std::uint32_t proxy_count, std::uint32_t group_count, std::uint64_t hash_seed);

    std::uint32_t route(std::uint64_t key, Rng& rng) const;
    std::uint32_t group_of(std::uint64_t key) const;
    std::uint32_t group_size() const { return group_size_; }

  private:
    std::uint32_t proxies_;
    std::uint32_t groups_;
    std::uint32_t group_size_;
    std::uint64_t seed_;
};

}  // namespace abase::cache
