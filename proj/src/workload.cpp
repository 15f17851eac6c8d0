#include "abase/workload.hpp"

#include <algorithm>
#include <cmath>

#include "abase/hash.hpp"

namespace abase::workload {

namespace {

constexpr double kTwoPi = 6.283185307179586;

SimTime grid_point(SimTime segment_start, double rate, std::uint64_t i) {
    return segment_start +
           static_cast<SimTime>(std::llround(static_cast<double>(i) * 1e6 / rate));
}

}  // namespace

double diurnal_rate(const ArrivalSpec& a, double hours_elapsed) {
    double h = hours_elapsed + 24.0 * a.day_offset;
    double seasonal = 1.0 + a.amplitude * std::sin(kTwoPi * (std::fmod(h, 24.0) - a.peak_hour) / 24.0);
    double growth = 1.0 + a.growth_per_day * (h / 24.0);
    return std::max(0.0, a.base * seasonal * growth);
}

ArrivalGen::ArrivalGen(const ArrivalSpec& spec, SimTime duration, Rng rng)
    : spec_(spec), duration_(duration), rng_(rng) {
    if (spec_.kind == ArrivalKind::kDiurnal) {
        // Envelope rate for thinning: seasonal peak at the end-of-run growth.
        double growth_end = 1.0 + spec_.growth_per_day *
                                      (seconds_from_us(duration) / 86'400.0 + spec_.day_offset);
        max_rate_ = spec_.base * (1.0 + spec_.amplitude) * std::max(1.0, growth_end);
    }
}

std::optional<SimTime> ArrivalGen::next_grid() {
    if (spec_.kind == ArrivalKind::kConstant) {
        if (spec_.rate <= 0.0) return std::nullopt;
        SimTime t = grid_point(0, spec_.rate, index_);
        if (t >= duration_) return std::nullopt;
        ++index_;
        return t;
    }
    // Step burst: three exact grids, each anchored at its segment start.
    const SimTime b0 = us_from_seconds(spec_.t_start_s);
    const SimTime b1 = us_from_seconds(spec_.t_end_s);
    while (segment_ < 3) {
        double rate = segment_ == 1 ? spec_.burst_rate : spec_.rate;
        SimTime seg_start = segment_ == 0 ? 0 : (segment_ == 1 ? b0 : b1);
        SimTime seg_end = segment_ == 0 ? b0 : (segment_ == 1 ? b1 : duration_);
        if (rate > 0.0) {
            SimTime t = grid_point(seg_start, rate, index_);
            if (t < seg_end) {
                ++index_;
                return t;
            }
        }
        ++segment_;
        index_ = 0;
    }
    return std::nullopt;
}

std::optional<SimTime> ArrivalGen::next() {
    if (spec_.kind != ArrivalKind::kDiurnal) return next_grid();
    if (max_rate_ <= 0.0) return std::nullopt;
    while (true) {
        double gap_s = rng_.exponential(max_rate_);
        t_ += std::max<SimTime>(1, static_cast<SimTime>(std::llround(gap_s * 1e6)));
        if (t_ >= duration_) return std::nullopt;
        double r = diurnal_rate(spec_, seconds_from_us(t_) / 3600.0);
        if (rng_.uniform01() * max_rate_ < r) return t_;
    }
}

std::vector<SimTime> gen_arrivals(const ArrivalSpec& spec, SimTime duration, Rng rng) {
    std::vector<SimTime> out;
    ArrivalGen gen(spec, duration, rng);
    while (auto t = gen.next()) out.push_back(*t);
    return out;
}

KeySampler::KeySampler(const KeySpec& spec) : spec_(spec) {
    if (spec_.kind == KeyKind::kZipf) {
        zipf_cdf_.resize(spec_.space);
        double acc = 0.0;
        for (std::uint64_t k = 0; k < spec_.space; ++k) {
            acc += 1.0 / std::pow(static_cast<double>(k + 1), spec_.zipf_s);
            zipf_cdf_[k] = acc;
        }
        for (double& v : zipf_cdf_) v /= acc;
    }
}

std::uint64_t KeySampler::sample(Rng& rng) const {
    switch (spec_.kind) {
        case KeyKind::kUniform:
            return rng.uniform_int(spec_.space);
        case KeyKind::kZipf: {
            double u = rng.uniform01();
            auto it = std::lower_bound(zipf_cdf_.begin(), zipf_cdf_.end(), u);
            if (it == zipf_cdf_.end()) return spec_.space - 1;
            return static_cast<std::uint64_t>(it - zipf_cdf_.begin());
        }
        case KeyKind::kHotKey: {
            if (rng.uniform01() < spec_.hot_fraction)
                return rng.uniform_int(std::max<std::uint64_t>(1, spec_.hot_count));
            std::uint64_t cold = spec_.space > spec_.hot_count ? spec_.space - spec_.hot_count : 1;
            return spec_.hot_count + rng.uniform_int(cold);
        }
    }
    return 0;
}

std::int64_t size_of_key(const SizeSpec& spec, std::uint64_t key, std::uint64_t hash_seed) {
    if (spec.kind == SizeKind::kFixed) return spec.bytes;
    // Inverse-CDF draw from a per-key uniform; the same key always has the
    // same stored size.
    double u = static_cast<double>(hash64(key, hash_seed ^ 0x51ebULL) >> 11) * 0x1.0p-53;
    u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
    // Rational approximation of the normal quantile (Acklam), adequate for
    // workload synthesis.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double q, z;
    if (u < plow) {
        q = std::sqrt(-2 * std::log(u));
        z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (u <= phigh) {
        q = u - 0.5;
        double r = q * q;
        z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        q = std::sqrt(-2 * std::log(1 - u));
        z = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double v = std::exp(spec.mu + spec.sigma * z);
    std::int64_t size = static_cast<std::int64_t>(std::llround(v));
    return std::clamp(size, spec.min_bytes, spec.max_bytes);
}

}  // namespace abase::workload
