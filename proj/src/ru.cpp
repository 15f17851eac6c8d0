#include "abase/ru.hpp"

#include <algorithm>

namespace abase::ru {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

ReadStats::ReadStats(std::uint32_t window_k) : window_(std::max(1u, window_k)) {
    sizes_.resize(window_);
    hits_.resize(window_);
    hash_lens_.resize(window_);
    hash_bytes_.resize(window_);
}

void ReadStats::update(std::int64_t observed_size, bool hit) {
    if (count_ == window_) {
        size_sum_ -= sizes_[head_];
        hit_sum_ -= hits_[head_];
    } else {
        ++count_;
    }
    sizes_[head_] = observed_size;
    hits_[head_] = hit ? 1 : 0;
    size_sum_ += observed_size;
    hit_sum_ += hits_[head_];
    head_ = (head_ + 1) % window_;
}

void ReadStats::update_hash(std::uint64_t length, std::int64_t total_bytes) {
    if (hash_count_ == window_) {
        hash_len_sum_ -= hash_lens_[hash_head_];
        hash_bytes_sum_ -= hash_bytes_[hash_head_];
    } else {
        ++hash_count_;
    }
    hash_lens_[hash_head_] = length;
    hash_bytes_[hash_head_] = total_bytes;
    hash_len_sum_ += length;
    hash_bytes_sum_ += total_bytes;
    hash_head_ = (hash_head_ + 1) % window_;
}

double ReadStats::mean_size() const {
    if (count_ == 0) return 0.0;
    return static_cast<double>(size_sum_) / static_cast<double>(count_);
}

double ReadStats::hit_ratio() const {
    if (count_ == 0) return 0.0;
    return static_cast<double>(hit_sum_) / static_cast<double>(count_);
}

double ReadStats::mean_hash_len() const {
    if (hash_count_ == 0) return 0.0;
    return static_cast<double>(hash_len_sum_) / static_cast<double>(hash_count_);
}

double ReadStats::mean_field_size() const {
    if (hash_len_sum_ == 0) return 0.0;
    return static_cast<double>(hash_bytes_sum_) / static_cast<double>(hash_len_sum_);
}

std::int64_t ru_write(std::int64_t value_size, const RuConfig& cfg) {
    std::int64_t units = std::max<std::int64_t>(1, ceil_div(value_size, cfg.unit_size));
    return static_cast<std::int64_t>(cfg.replica_count) * units;
}

double estimate_read_ru(const ReadStats& stats, const RuConfig& cfg) {
    if (stats.empty()) return 1.0;
    return stats.mean_size() * (1.0 - stats.hit_ratio()) / static_cast<double>(cfg.unit_size);
}

std::int64_t settle_read(std::int64_t actual_size, ServedFrom served_from, const RuConfig& cfg) {
    if (served_from == ServedFrom::kProxyCache) return 0;
    return std::max<std::int64_t>(1, ceil_div(actual_size, cfg.unit_size));
}

double estimate_hlen_ru() { return 1.0; }

double estimate_hgetall_ru(const ReadStats& stats, const RuConfig& cfg) {
    if (stats.hash_history_empty()) return 1.0;
    double scan = stats.mean_hash_len() * stats.mean_field_size() / static_cast<double>(cfg.unit_size);
    return estimate_hlen_ru() + scan;
}

}  // namespace abase::ru
