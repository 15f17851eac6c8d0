#pragma once

#include <cmath>
#include <cstdint>

namespace abase {

// splitmix64 step (Steele, Lea, Flood 2014). Fixed algorithm so streams are
// reproducible across platforms and standard library versions; std::mt19937
// distributions are not bit-portable, so none are used here.
constexpr std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. Every stochastic component owns its own Rng,
// derived from the master seed and a stream id, so event ordering never
// changes which component sees which draw.
class Rng {
  public:
    Rng() : state_(0) {}
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    // Independent child stream; stable for a given (seed, id) pair.
    Rng derive(std::uint64_t stream_id) const {
        std::uint64_t s = state_;
        std::uint64_t a = splitmix64(s);
        s ^= stream_id * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
        std::uint64_t b = splitmix64(s);
        return Rng(a ^ (b + stream_id));
    }

    std::uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        // Multiplicative range reduction; bias is < 2^-64 per draw which is
        // far below anything the tests can observe.
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double exponential(double rate) {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -std::log(u) / rate;
    }

    // Box-Muller without state caching so a single draw never depends on
    // call parity.
    double normal(double mean, double stddev) {
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        double u2 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        return mean + stddev * z;
    }

    double lognormal(double mu, double sigma) { return std::exp(normal(mu, sigma)); }

  private:
    std::uint64_t state_;
};

}  // namespace abase
