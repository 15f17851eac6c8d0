#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "abase/rng.hpp"
#include "abase/time.hpp"

namespace abase::workload {

enum class ArrivalKind { kConstant, kBurst, kDiurnal };

struct ArrivalSpec {
    ArrivalKind kind = ArrivalKind::kConstant;
    double rate = 0.0;        // constant: req/s; burst: base rate
    double burst_rate = 0.0;  // burst window rate
    double t_start_s = 0.0;   // burst window
    double t_end_s = 0.0;
    double base = 0.0;       // diurnal mean rate
    double amplitude = 0.0;  // relative seasonal swing in [0, 1]
    double peak_hour = 0.0;
    double growth_per_day = 0.0;
    double day_offset = 0.0;  // continuation runs start mid-history
};

enum class KeyKind { kUniform, kZipf, kHotKey };

struct KeySpec {
    KeyKind kind = KeyKind::kUniform;
    std::uint64_t space = 1000;
    double zipf_s = 1.0;
    double hot_fraction = 0.5;  // share of traffic on the hot set
    std::uint64_t hot_count = 1;
};

enum class SizeKind { kFixed, kLognormal };

struct SizeSpec {
    SizeKind kind = SizeKind::kFixed;
    std::int64_t bytes = 2048;
    double mu = 7.0;  // log-space parameters
    double sigma = 1.0;
    std::int64_t min_bytes = 1;
    std::int64_t max_bytes = 1 << 22;
};

struct WorkloadProfile {
    std::uint32_t tenant = 0;
    ArrivalSpec arrival;
    KeySpec keys;
    double read_ratio = 1.0;
    SizeSpec value_size;
    std::optional<double> ttl_s;              // proxy cache TTL for this tenant's keys
    std::optional<std::uint32_t> target_partition;  // skew: pin all keys to one partition
};

// Diurnal rate shared by arrival generation and history synthesis so a
// continuation run extends its own seed history exactly.
double diurnal_rate(const ArrivalSpec& a, double hours_elapsed);

// Stateful arrival stream over [0, duration). Constant and burst processes
// are exact grids; the diurnal process is an inhomogeneous Poisson stream
// realized by thinning, so it needs its own random stream.
class ArrivalGen {
  public:
    ArrivalGen(const ArrivalSpec& spec, SimTime duration, Rng rng);
    std::optional<SimTime> next();

  private:
    std::optional<SimTime> next_grid();

    ArrivalSpec spec_;
    SimTime duration_;
    Rng rng_;
    std::uint64_t index_ = 0;  // per-segment arrival counter
    int segment_ = 0;          // burst process: 0 before, 1 inside, 2 after
    SimTime t_ = 0;            // diurnal thinning clock
    double max_rate_ = 0.0;
};

// Materialized schedule for tests and inspection.
std::vector<SimTime> gen_arrivals(const ArrivalSpec& spec, SimTime duration, Rng rng);

// Key popularity sampler. Zipf uses a precomputed CDF with binary search.
class KeySampler {
  public:
    explicit KeySampler(const KeySpec& spec);
    std::uint64_t sample(Rng& rng) const;

  private:
    KeySpec spec_;
    std::vector<double> zipf_cdf_;
};

// Value size as a pure function of the key, so rereads observe the stored
// size without a per-key store.
std::int64_t size_of_key(const SizeSpec& spec, std::uint64_t key, std::uint64_t hash_seed);

}  // namespace abase::workload
