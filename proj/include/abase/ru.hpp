#pragma once

#include <cstdint>
#include <vector>

namespace abase::ru {

enum class ServedFrom { kProxyCache, kNodeCache, kDisk };

struct RuConfig {
    std::int64_t unit_size = 2048;   // U, bytes per request unit
    std::uint32_t replica_count = 1; // r, copies charged per write
    std::uint32_t window_k = 100;    // moving-average window for read stats
};

// Per-tenant moving averages over the last window_k reads (sizes and cache
// hits) plus hash-length history for scan estimation. Sums are kept as exact
// integers so the estimates are reproducible arithmetic means.
class ReadStats {
  public:
    explicit ReadStats(std::uint32_t window_k = 100);

    void update(std::int64_t observed_size, bool hit);
    void update_hash(std::uint64_t length, std::int64_t total_bytes);

    bool empty() const { return count_ == 0; }
    bool hash_history_empty() const { return hash_count_ == 0; }

    double mean_size() const;      // E[S_read], bytes
    double hit_ratio() const;      // E[R_hit] in [0, 1]
    double mean_hash_len() const;  // estimated field count of a hash
    double mean_field_size() const;

  private:
    std::uint32_t window_;
    std::vector<std::int64_t> sizes_;
    std::vector<std::uint8_t> hits_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    std::int64_t size_sum_ = 0;
    std::int64_t hit_sum_ = 0;

    std::vector<std::uint64_t> hash_lens_;
    std::vector<std::int64_t> hash_bytes_;
    std::size_t hash_head_ = 0;
    std::size_t hash_count_ = 0;
    std::uint64_t hash_len_sum_ = 0;
    std::int64_t hash_bytes_sum_ = 0;
};

// r × max(1, ceil(size / U)); the minimum-charge floor keeps zero-byte
// writes billable.
std::int64_t ru_write(std::int64_t value_size, const RuConfig& cfg);

// E[S_read] × (1 − E[R_hit]) / U; fractional, used for admission decisions.
// Cold tenants (empty stats) estimate 1 RU.
double estimate_read_ru(const ReadStats& stats, const RuConfig& cfg);

// Billed units for a completed read. Proxy-cache hits cost nothing.
std::int64_t settle_read(std::int64_t actual_size, ServedFrom served_from, const RuConfig& cfg);

// Admission-time estimate for hash reads: HLen is a 1 RU metadata lookup;
// HGetAll adds the expected scan cost on top.
double estimate_hlen_ru();
double estimate_hgetall_ru(const ReadStats& stats, const RuConfig& cfg);

}  // namespace abase::ru
