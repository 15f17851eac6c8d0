#include "abase/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace abase::forecast {

namespace {

constexpr double kTwoPi = 6.283185307179586;

double rolling_median(const std::vector<double>& v, std::size_t i, int window) {
    const std::size_t n = v.size();
    const int half = window / 2;
    std::size_t lo = i >= static_cast<std::size_t>(half) ? i - half : 0;
    std::size_t hi = std::min(n, i + static_cast<std::size_t>(half) + 1);
    std::vector<double> w(v.begin() + lo, v.begin() + hi);
    std::size_t mid = w.size() / 2;
    std::nth_element(w.begin(), w.begin() + mid, w.end());
    double m = w[mid];
    if (w.size() % 2 == 0) {
        std::nth_element(w.begin(), w.begin() + mid - 1, w.end());
        m = 0.5 * (m + w[mid - 1]);
    }
    return m;
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double at(double t) const { return intercept + slope * t; }
};

// Least-squares line over values[lo, hi) with t = index.
LineFit fit_line(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    const double n = static_cast<double>(hi - lo);
    if (n <= 1.0) return LineFit{hi > lo ? v[lo] : 0.0, 0.0};
    double st = 0, sx = 0, stt = 0, stx = 0;
    for (std::size_t i = lo; i < hi; ++i) {
        double t = static_cast<double>(i);
        st += t;
        sx += v[i];
        stt += t * t;
        stx += t * v[i];
    }
    double denom = n * stt - st * st;
    LineFit f;
    if (std::abs(denom) < 1e-12) {
        f.intercept = sx / n;
        return f;
    }
    f.slope = (n * stx - st * sx) / denom;
    f.intercept = (sx - f.slope * st) / n;
    return f;
}

// Phase means of (values - trend) at the given period, phases indexed by
// absolute hour index mod period.
std::vector<double> seasonal_profile(const std::vector<double>& v, std::size_t lo,
                                     std::size_t hi, const LineFit& trend, int period) {
    std::vector<double> sum(period, 0.0);
    std::vector<int> cnt(period, 0);
    for (std::size_t i = lo; i < hi; ++i) {
        int phase = static_cast<int>(i % static_cast<std::size_t>(period));
        sum[phase] += v[i] - trend.at(static_cast<double>(i));
        ++cnt[phase];
    }
    for (int p = 0; p < period; ++p) sum[p] = cnt[p] > 0 ? sum[p] / cnt[p] : 0.0;
    return sum;
}

// Historical average: per-phase mean over the last two periods (or one, or
// the global mean when the series is shorter than a period). Phases index by
// absolute hour mod period so prediction aligns with fitting.
std::vector<double> historical_profile(const std::vector<double>& v, int period) {
    const std::size_t n = v.size();
    const std::size_t p = static_cast<std::size_t>(period);
    std::vector<double> prof(p, 0.0);
    std::size_t span = 0;
    if (n >= 2 * p)
        span = 2 * p;
    else if (n >= p)
        span = p;
    if (span > 0) {
        std::vector<int> cnt(p, 0);
        for (std::size_t i = n - span; i < n; ++i) {
            std::size_t phase = i % p;
            prof[phase] += v[i];
            ++cnt[phase];
        }
        for (std::size_t k = 0; k < p; ++k)
            if (cnt[k] > 0) prof[k] /= cnt[k];
    } else {
        double mean = 0.0;
        for (double x : v) mean += x;
        mean = n > 0 ? mean / static_cast<double>(n) : 0.0;
        std::fill(prof.begin(), prof.end(), mean);
    }
    return prof;
}

struct ComponentModels {
    bool has_st = false;
    LineFit trend;
    std::vector<double> seasonal;  // empty = no seasonal term
    std::vector<double> historical;
    int period = 24;
};

ComponentModels fit_components(const std::vector<double>& v, const ForecastConfig&,
                               std::optional<std::size_t> cp, std::optional<int> period) {
    ComponentModels m;
    m.period = period.value_or(24);
    std::size_t lo = cp.value_or(0);
    // A change point too close to the end leaves nothing to fit; back off to
    // the last full period.
    if (v.size() - lo < static_cast<std::size_t>(m.period))
        lo = v.size() > static_cast<std::size_t>(m.period)
                 ? v.size() - static_cast<std::size_t>(m.period)
                 : 0;
    m.has_st = true;
    m.trend = fit_line(v, lo, v.size());
    if (period)
        m.seasonal = seasonal_profile(v, lo, v.size(), m.trend, *period);
    m.historical = historical_profile(v, m.period);
    return m;
}

double predict_st(const ComponentModels& m, std::size_t t) {
    double y = m.trend.at(static_cast<double>(t));
    if (!m.seasonal.empty()) y += m.seasonal[t % m.seasonal.size()];
    return y;
}

double predict_ha(const ComponentModels& m, std::size_t t) {
    return m.historical[t % m.historical.size()];
}

}  // namespace

MetricSeries denoise(const MetricSeries& usage, const MetricSeries& quota,
                     const ForecastConfig& cfg) {
    const bool have_quota = !quota.values.empty();
    if (have_quota) {
        if (quota.start_epoch_s != usage.start_epoch_s ||
            quota.values.size() != usage.values.size())
            throw std::invalid_argument("denoise: quota grid does not match usage grid");
    }
    MetricSeries out = usage;
    const std::size_t n = usage.values.size();
    if (n == 0) return out;

    std::vector<double> med(n), qmed;
    for (std::size_t i = 0; i < n; ++i) med[i] = rolling_median(usage.values, i, cfg.rolling_window);
    if (have_quota) {
        qmed.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            qmed[i] = rolling_median(quota.values, i, cfg.rolling_window);
    }

    // Rule 1: usage and quota spiking together is instrumentation noise.
    if (have_quota) {
        for (std::size_t i = 0; i < n; ++i) {
            bool u_spike = usage.values[i] > cfg.spike_factor * std::max(med[i], 1e-12);
            bool q_spike = quota.values[i] > cfg.spike_factor * std::max(qmed[i], 1e-12);
            if (u_spike && q_spike) out.values[i] = med[i];
        }
    }

    // Rule 2: a peak run with no recurrence within the sporadic window is
    // removed. Runs are maximal stretches above the spike threshold.
    std::vector<std::pair<std::size_t, std::size_t>> runs;  // [start, end)
    for (std::size_t i = 0; i < n;) {
        if (out.values[i] > cfg.spike_factor * std::max(med[i], 1e-12)) {
            std::size_t j = i;
            while (j < n && out.values[j] > cfg.spike_factor * std::max(med[j], 1e-12)) ++j;
            runs.emplace_back(i, j);
            i = j;
        } else {
            ++i;
        }
    }
    for (std::size_t r = 0; r < runs.size(); ++r) {
        bool recurs = false;
        for (std::size_t s = 0; s < runs.size() && !recurs; ++s) {
            if (s == r) continue;
            std::size_t gap = runs[s].first > runs[r].first ? runs[s].first - runs[r].first
                                                            : runs[r].first - runs[s].first;
            if (gap <= static_cast<std::size_t>(cfg.sporadic_window)) recurs = true;
        }
        if (!recurs)
            for (std::size_t i = runs[r].first; i < runs[r].second; ++i) out.values[i] = med[i];
    }
    return out;
}

std::optional<std::size_t> detect_changepoint(const std::vector<double>& values,
                                              const ForecastConfig& cfg) {
    const std::size_t n = values.size();
    const std::size_t w = static_cast<std::size_t>(cfg.cp_window);
    if (n < 7 * 24 || n < 2 * w) return std::nullopt;

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + values[i];
    auto mean = [&](std::size_t a, std::size_t b) {
        return (prefix[b] - prefix[a]) / static_cast<double>(b - a);
    };

    for (std::size_t i = n - w; i >= w; --i) {
        double m1 = mean(i - w, i);
        double m2 = mean(i, i + w);
        double base = std::max(std::abs(m1), 1e-12);
        if (std::abs(m2 - m1) / base < cfg.cp_effect) {
            if (i == w) break;
            continue;
        }
        // Level shift, not ramp: the two-constant fit must explain the
        // window better than a single straight line.
        double sse_step = 0.0;
        for (std::size_t t = i - w; t < i; ++t) sse_step += (values[t] - m1) * (values[t] - m1);
        for (std::size_t t = i; t < i + w; ++t) sse_step += (values[t] - m2) * (values[t] - m2);
        LineFit line = fit_line(values, i - w, i + w);
        double sse_line = 0.0;
        for (std::size_t t = i - w; t < i + w; ++t) {
            double d = values[t] - line.at(static_cast<double>(t));
            sse_line += d * d;
        }
        if (sse_step < sse_line) return i;
        if (i == w) break;
    }
    return std::nullopt;
}

std::optional<int> detect_period(const std::vector<double>& values, const ForecastConfig& cfg) {
    const std::size_t n = values.size();
    if (n < 6) return std::nullopt;

    LineFit trend = fit_line(values, 0, n);
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = values[i] - trend.at(static_cast<double>(i));

    // Periodogram over frequencies with at least 3 repetitions in the data.
    const std::size_t k_min = 3;
    const std::size_t k_max = n / 2;
    if (k_max < k_min) return std::nullopt;
    std::vector<double> power;
    power.reserve(k_max - k_min + 1);
    std::size_t best_k = 0;
    double best_power = -1.0;
    for (std::size_t k = k_min; k <= k_max; ++k) {
        double c = 0.0, s = 0.0;
        const double wfreq = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        for (std::size_t t = 0; t < n; ++t) {
            c += r[t] * std::cos(wfreq * static_cast<double>(t));
            s += r[t] * std::sin(wfreq * static_cast<double>(t));
        }
        double p = c * c + s * s;
        power.push_back(p);
        if (p > best_power) {
            best_power = p;
            best_k = k;
        }
    }
    std::vector<double> sorted = power;
    std::size_t mid = sorted.size() / 2;
    std::nth_element(sorted.begin(), sorted.begin() + mid, sorted.end());
    double median_power = sorted[mid];
    if (best_power < cfg.psd_significance * std::max(median_power, 1e-300)) return std::nullopt;

    // The bin gives a fractional period n/k; refine to the integer-hour lag
    // with the strongest autocorrelation and demand real seasonal strength
    // there (a lone periodogram maximum also happens in white noise).
    double p0 = static_cast<double>(n) / static_cast<double>(best_k);
    int lo = std::max(2, static_cast<int>(std::floor(0.8 * p0)));
    int hi = std::min<int>(static_cast<int>(n / 2), static_cast<int>(std::ceil(1.2 * p0)));
    double var = 0.0;
    for (std::size_t t = 0; t < n; ++t) var += r[t] * r[t];
    if (var <= 1e-300) return std::nullopt;
    int best_lag = 0;
    double best_acf = -2.0;
    for (int lag = lo; lag <= hi; ++lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + static_cast<std::size_t>(lag) < n; ++t)
            acc += r[t] * r[t + static_cast<std::size_t>(lag)];
        double acf = acc / var * static_cast<double>(n) / static_cast<double>(n - lag);
        if (acf > best_acf) {
            best_acf = acf;
            best_lag = lag;
        }
    }
    if (best_lag == 0 || best_acf < cfg.acf_min) return std::nullopt;
    return best_lag;
}

ForecastResult forecast(const MetricSeries& usage, const MetricSeries& quota,
                        const ForecastConfig& cfg) {
    MetricSeries clean = denoise(usage, quota, cfg);
    const std::vector<double>& v = clean.values;
    const std::size_t n = v.size();

    ForecastResult res;
    res.points.assign(static_cast<std::size_t>(cfg.horizon), 0.0);

    bool st_allowed = cfg.use_seasonal_trend && n >= 14 * 24;
    bool ha_allowed = cfg.use_historical || !st_allowed;

    res.changepoint = st_allowed ? detect_changepoint(v, cfg) : std::nullopt;
    res.detected_period = detect_period(v, cfg);

    // Weighting by holdout error: fit on everything before the last
    // eval_window hours, score both components there.
    double w_st = 0.0, w_ha = 1.0;
    const std::size_t hold = static_cast<std::size_t>(cfg.eval_window);
    if (st_allowed && ha_allowed && n > hold + 24) {
        std::vector<double> train(v.begin(), v.end() - static_cast<std::ptrdiff_t>(hold));
        auto cp_train = detect_changepoint(train, cfg);
        auto period_train = detect_period(train, cfg);
        ComponentModels mm = fit_components(train, cfg, cp_train, period_train);
        double mae_st = 0.0, mae_ha = 0.0;
        for (std::size_t h = 0; h < hold; ++h) {
            std::size_t t = train.size() + h;
            mae_st += std::abs(predict_st(mm, t) - v[t]);
            mae_ha += std::abs(predict_ha(mm, t) - v[t]);
        }
        mae_st = std::max(mae_st / static_cast<double>(hold), 1e-9);
        mae_ha = std::max(mae_ha / static_cast<double>(hold), 1e-9);
        w_st = (1.0 / mae_st) / (1.0 / mae_st + 1.0 / mae_ha);
        w_ha = 1.0 - w_st;
    } else if (st_allowed && !ha_allowed) {
        w_st = 1.0;
        w_ha = 0.0;
    } else {
        w_st = 0.0;
        w_ha = 1.0;
    }

    ComponentModels models = fit_components(v, cfg, res.changepoint, res.detected_period);
    for (int h = 0; h < cfg.horizon; ++h) {
        std::size_t t = n + static_cast<std::size_t>(h);
        double y = 0.0;
        if (w_st > 0.0) y += w_st * predict_st(models, t);
        if (w_ha > 0.0) y += w_ha * predict_ha(models, t);
        res.points[static_cast<std::size_t>(h)] = std::max(0.0, y);
    }
    res.weight_seasonal_trend = w_st;
    res.weight_historical = w_ha;

    // Burst guard: when the model badly undershoots the latest period's
    // peak, trust recent history verbatim.
    const std::size_t period = static_cast<std::size_t>(models.period);
    if (n >= period) {
        double recent_max = 0.0;
        for (std::size_t i = n - period; i < n; ++i) recent_max = std::max(recent_max, v[i]);
        double model_max = 0.0;
        for (double y : res.points) model_max = std::max(model_max, y);
        if (model_max < (1.0 - cfg.guard_margin) * recent_max) {
            for (int h = 0; h < cfg.horizon; ++h)
                res.points[static_cast<std::size_t>(h)] =
                    v[n - period + (static_cast<std::size_t>(h) % period)];
            res.burst_guard_applied = true;
        }
    }

    res.u_max = 0.0;
    for (double y : res.points) res.u_max = std::max(res.u_max, y);
    return res;
}

MetricSeries load_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open series file: " + path);
    MetricSeries s;
    std::string line;
    bool first_sample = true;
    std::int64_t prev_ts = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string ts_str, val_str;
        if (!std::getline(ls, ts_str, ',') || !std::getline(ls, val_str)) continue;
        char* end = nullptr;
        std::int64_t ts = std::strtoll(ts_str.c_str(), &end, 10);
        if (end == ts_str.c_str()) continue;  // header row
        double val = std::strtod(val_str.c_str(), nullptr);
        if (first_sample) {
            s.start_epoch_s = ts;
            first_sample = false;
        } else if (ts - prev_ts != 3600) {
            throw std::invalid_argument("series is not on a uniform 1-hour grid: " + path);
        }
        prev_ts = ts;
        s.values.push_back(val);
    }
    if (s.values.empty()) throw std::invalid_argument("series file has no samples: " + path);
    return s;
}

void save_series_csv(const std::string& path, const MetricSeries& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write series file: " + path);
    out << "timestamp,value\n";
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%lld,%.6f\n",
                      static_cast<long long>(series.start_epoch_s + 3600 * static_cast<std::int64_t>(i)),
                      series.values[i]);
        out << buf;
    }
}

std::string result_to_json(const ForecastResult& result) {
    nlohmann::json j;
    j["horizon_hours"] = result.points.size();
    j["points"] = result.points;
    j["u_max"] = result.u_max;
    j["detected_period_hours"] =
        result.detected_period ? nlohmann::json(*result.detected_period) : nlohmann::json();
    j["changepoint_index"] =
        result.changepoint ? nlohmann::json(*result.changepoint) : nlohmann::json();
    j["weights"] = {{"seasonal_trend", result.weight_seasonal_trend},
                    {"historical_average", result.weight_historical}};
    j["burst_guard_applied"] = result.burst_guard_applied;
    return j.dump(2);
}

}  // namespace abase::forecast
