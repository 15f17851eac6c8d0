#include "abase/cache.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "abase/hash.hpp"

namespace abase::cache {

SaLruCache::SaLruCache(std::int64_t capacity_bytes, SimTime hit_decay_half_life)
    : capacity_(capacity_bytes),
      decay_per_us_(0.6931471805599453 / static_cast<double>(hit_decay_half_life)) {}

int SaLruCache::size_class(std::int64_t size) {
    if (size <= 256) return 0;
    if (size <= 4096) return 1;
    if (size <= 65536) return 2;
    return 3;
}

void SaLruCache::decay_to(int cls, SimTime now) {
    if (now <= decay_stamp_[cls]) return;
    double dt = static_cast<double>(now - decay_stamp_[cls]);
    decayed_hits_[cls] *= std::exp(-decay_per_us_ * dt);
    decay_stamp_[cls] = now;
}

SaLruCache::Result SaLruCache::get(std::uint64_t key, SimTime now) {
    auto it = index_.find(key);
    if (it == index_.end()) return Result{false, 0};
    Entry e = *it->second;
    List& list = lists_[e.cls];
    list.erase(it->second);
    list.push_front(e);
    it->second = list.begin();
    decay_to(e.cls, now);
    decayed_hits_[e.cls] += 1.0;
    return Result{true, e.size};
}

void SaLruCache::compute_budgets(double* budgets) const {
    // Share capacity in proportion to hit density. The epsilon keeps a cold
    // cache at equal quarters instead of dividing by zero.
    double weights[kClasses];
    double sum = 0.0;
    for (int c = 0; c < kClasses; ++c) {
        double density =
            bytes_[c] > 0 ? decayed_hits_[c] / static_cast<double>(bytes_[c]) : 0.0;
        weights[c] = density + 1e-12;
        sum += weights[c];
    }
    for (int c = 0; c < kClasses; ++c)
        budgets[c] = static_cast<double>(capacity_) * weights[c] / sum;
}

void SaLruCache::erase_entry(List::iterator it) {
    bytes_[it->cls] -= it->size;
    total_bytes_ -= it->size;
    index_.erase(it->key);
    lists_[it->cls].erase(it);
}

std::vector<std::uint64_t> SaLruCache::put(std::uint64_t key, std::int64_t size, SimTime now) {
    std::vector<std::uint64_t> evicted;
    if (size > capacity_) return evicted;

    auto it = index_.find(key);
    if (it != index_.end()) erase_entry(it->second);

    int cls = size_class(size);
    lists_[cls].push_front(Entry{key, size, cls});
    index_[key] = lists_[cls].begin();
    bytes_[cls] += size;
    total_bytes_ += size;
    decay_to(cls, now);

    while (total_bytes_ > capacity_) {
        double budgets[kClasses];
        compute_budgets(budgets);
        // Largest over-budget class loses its LRU tail first; if rounding
        // leaves none flagged, fall back to the largest non-empty class.
        int victim_cls = -1;
        for (int c = kClasses - 1; c >= 0; --c) {
            if (lists_[c].empty()) continue;
            if (static_cast<double>(bytes_[c]) > budgets[c]) {
                victim_cls = c;
                break;
            }
        }
        if (victim_cls < 0) {
            for (int c = kClasses - 1; c >= 0; --c)
                if (!lists_[c].empty()) {
                    victim_cls = c;
                    break;
                }
        }
        auto tail = std::prev(lists_[victim_cls].end());
        if (tail->key == key) {
            // Never evict the entry being inserted; find the next victim
            // from the back of the class lists instead.
            if (index_.size() == 1) break;
            bool found = false;
            for (int c = kClasses - 1; c >= 0 && !found; --c) {
                for (auto rit = lists_[c].rbegin(); rit != lists_[c].rend(); ++rit) {
                    if (rit->key != key) {
                        tail = std::prev(rit.base());
                        found = true;
                        break;
                    }
                }
            }
            if (!found) break;
        }
        evicted.push_back(tail->key);
        erase_entry(tail);
    }
    return evicted;
}

AuLruCache::Result AuLruCache::get(std::uint64_t key, SimTime now) {
    auto it = index_.find(key);
    if (it == index_.end()) return Result{};
    if (it->second->expire_at <= now) {
        erase_entry(it->second);
        return Result{};
    }
    Entry e = *it->second;
    lru_.erase(it->second);

    if (now - e.window_start >= cfg_.refresh_window) {
        e.window_start = now;
        e.window_hits = 1;
    } else {
        ++e.window_hits;
    }

    Result r;
    r.hit = true;
    r.size = e.size;
    if (!e.refreshing && e.window_hits >= cfg_.hot_threshold &&
        e.expire_at - now <= cfg_.refresh_window) {
        e.refreshing = true;
        r.schedule_refresh = true;
    }

    lru_.push_front(e);
    it->second = lru_.begin();
    return r;
}

std::vector<std::uint64_t> AuLruCache::put(std::uint64_t key, std::int64_t size,
                                           SimTime expire_at, SimTime now) {
    std::vector<std::uint64_t> evicted;
    if (size > cfg_.capacity_bytes) return evicted;
    auto it = index_.find(key);
    if (it != index_.end()) erase_entry(it->second);

    lru_.push_front(Entry{key, size, expire_at, now, 0, false});
    index_[key] = lru_.begin();
    total_bytes_ += size;

    while (total_bytes_ > cfg_.capacity_bytes) {
        auto tail = std::prev(lru_.end());
        if (tail->key == key) break;
        evicted.push_back(tail->key);
        erase_entry(tail);
    }
    return evicted;
}

void AuLruCache::refresh_complete(std::uint64_t key, std::int64_t size, SimTime expire_at) {
    auto it = index_.find(key);
    if (it == index_.end()) return;
    total_bytes_ += size - it->second->size;
    it->second->size = size;
    it->second->expire_at = expire_at;
    it->second->refreshing = false;
}

void AuLruCache::refresh_failed(std::uint64_t key) {
    auto it = index_.find(key);
    if (it != index_.end()) it->second->refreshing = false;
}

void AuLruCache::invalidate(std::uint64_t key) {
    auto it = index_.find(key);
    if (it != index_.end()) erase_entry(it->second);
}

void AuLruCache::erase_entry(List::iterator it) {
    total_bytes_ -= it->size;
    index_.erase(it->key);
    lru_.erase(it);
}

FanoutRouter::FanoutRouter(std::uint32_t proxy_count, std::uint32_t group_count,
                           std::uint64_t hash_seed)
    : proxies_(proxy_count), groups_(group_count), seed_(hash_seed) {
    if (proxy_count == 0 || group_count == 0)
        throw std::invalid_argument("fanout: proxy and group counts must be positive");
    if (proxy_count % group_count != 0)
        throw std::invalid_argument("fanout: group count must divide proxy count");
    group_size_ = proxy_count / group_count;
}

std::uint32_t FanoutRouter::group_of(std::uint64_t key) const {
    return static_cast<std::uint32_t>(hash64(key, seed_) % groups_);
}

std::uint32_t FanoutRouter::route(std::uint64_t key, Rng& rng) const {
    std::uint32_t g = group_of(key);
    return g * group_size_ + static_cast<std::uint32_t>(rng.uniform_int(group_size_));
}

}  // namespace abase::cache
