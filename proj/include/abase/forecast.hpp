#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace abase::forecast {

// Hourly metric samples. start_epoch_s anchors the grid; values[i] is the
// hour starting at start_epoch_s + 3600 i.
struct MetricSeries {
    std::int64_t start_epoch_s = 0;
    std::vector<double> values;
};

struct ForecastConfig {
    int horizon = 168;  // hours ahead

    // Denoising.
    double spike_factor = 5.0;   // multiple of the rolling median that flags a spike
    int rolling_window = 24;     // hours for the rolling median
    int sporadic_window = 240;   // a peak with no recurrence within 10 days is noise

    // Change-point detection.
    int cp_window = 72;       // hours per side
    double cp_effect = 0.25;  // minimum relative mean shift

    // Periodicity detection.
    double psd_significance = 4.0;  // peak power vs median spectral power
    double acf_min = 0.3;           // autocorrelation confirmation at the period

    // Ensemble and guard.
    int eval_window = 72;        // holdout hours for weighting
    double guard_margin = 0.30;  // forecast max below (1-margin) x recent max trips the guard
    bool use_seasonal_trend = true;
    bool use_historical = true;
};

struct ForecastResult {
    std::vector<double> points;  // horizon hours
    double u_max = 0.0;
    std::optional<int> detected_period;      // hours
    std::optional<std::size_t> changepoint;  // index into the input series
    double weight_seasonal_trend = 0.0;
    double weight_historical = 0.0;
    bool burst_guard_applied = false;
};

// Removes measurement noise: hours where usage and quota spike together
// (real load cannot move the quota), and isolated peaks that appear only
// once within the sporadic window. Throws std::invalid_argument when the
// quota grid does not match the usage grid. An empty quota series skips the
// simultaneity rule.
MetricSeries denoise(const MetricSeries& usage, const MetricSeries& quota,
                     const ForecastConfig& cfg);

// Most recent index whose trailing/leading window means differ by the
// effect size and that looks like a level shift rather than a steady ramp
// (two-constant fit must beat a single line on squared error).
std::optional<std::size_t> detect_changepoint(const std::vector<double>& values,
                                              const ForecastConfig& cfg);

// Dominant periodogram peak mapped to an integer-hour period. Requires at
// least 3 repetitions in the data, peak power above the significance
// threshold, and autocorrelation confirmation at the refined lag.
std::optional<int> detect_period(const std::vector<double>& values,
                                 const ForecastConfig& cfg);

// Full pipeline: denoise, change-point focus, periodicity, then a weighted
// ensemble of a piecewise-linear-trend + phase-mean seasonal model and a
// two-period historical average, with the non-periodic burst guard on top.
// Under 14 days of data only the historical-average component runs.
ForecastResult forecast(const MetricSeries& usage, const MetricSeries& quota,
                        const ForecastConfig& cfg);

// CSV exchange format: optional "timestamp,value" header, one sample per
// line, uniform 3600 s spacing enforced.
MetricSeries load_series_csv(const std::string& path);
void save_series_csv(const std::string& path, const MetricSeries& series);

// Self-describing JSON rendering of a result.
std::string result_to_json(const ForecastResult& result);

}  // namespace abase::forecast
