#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "hawkes/event_series.hpp"

namespace hawkes {

/// Intraday trading window in seconds of day.
struct SessionWindow {
    double start = 0.0;
    double end = 86400.0;

    void validate() const {
        if (!(start >= 0.0) || !(start < end) || !(end <= 86400.0))
            throw std::invalid_argument("SessionWindow: need 0 <= start < end <= 86400");
    }
};

/// Keeps events with start <= t < end; rebase shifts the kept events so the
/// fitting horizon starts at zero. Times must already be seconds of day.
inline EventSeries filter_session(const EventSeries& series, const SessionWindow& window,
                                  bool rebase = false) {
    window.validate();
    std::vector<double> kept;
    for (double t : series) {
        if (t >= window.start && t < window.end)
            kept.push_back(rebase ? t - window.start : t);
    }
    return EventSeries(std::move(kept), series.origin_label());
}

/// Nearest-rank (lower) quantile: the element at 1-based index ceil(p * n) of
/// the sorted sample.
inline double quantile_nearest_rank(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile: empty sample");
    if (!(p > 0.0) || !(p <= 1.0)) throw std::invalid_argument("quantile: p must be in (0, 1]");
    std::size_t rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
    if (rank < 1) rank = 1;
    if (rank > sorted.size()) rank = sorted.size();
    return sorted[rank - 1];
}

/// Descriptive statistics of the inter-event times of one series.
struct IntervalStats {
    std::size_t n_events = 0;
    double q10 = 0, q15 = 0, q25 = 0, q50 = 0, q75 = 0, q90 = 0; // seconds
    double mean_dt = 0;
    double below_latency_fraction = 0; // share of gaps shorter than the latency
    bool fat_tailed = false;           // mean gap exceeds the median gap
};

inline IntervalStats interval_stats(const EventSeries& series, double latency) {
    if (series.size() < 2)
        throw std::invalid_argument("interval_stats: need at least two events");
    std::vector<double> dt;
    dt.reserve(series.size() - 1);
    for (std::size_t i = 1; i < series.size(); ++i) dt.push_back(series[i] - series[i - 1]);

    IntervalStats s;
    s.n_events = series.size();
    double sum = 0.0;
    std::size_t below = 0;
    for (double d : dt) {
        sum += d;
        if (d < latency) ++below;
    }
    s.mean_dt = sum / static_cast<double>(dt.size());
    s.below_latency_fraction = static_cast<double>(below) / static_cast<double>(dt.size());

    std::sort(dt.begin(), dt.end());
    s.q10 = quantile_nearest_rank(dt, 0.10);
    s.q15 = quantile_nearest_rank(dt, 0.15);
    s.q25 = quantile_nearest_rank(dt, 0.25);
    s.q50 = quantile_nearest_rank(dt, 0.50);
    s.q75 = quantile_nearest_rank(dt, 0.75);
    s.q90 = quantile_nearest_rank(dt, 0.90);
    s.fat_tailed = s.mean_dt > s.q50;
    return s;
}

/// Share of events attributed to exogenous causes: the baseline rate divided
/// by the empirical event rate over the session.
inline double exogeneity_ratio(double lambda0, std::size_t n_events, double session_seconds) {
    if (!(lambda0 >= 0.0)) throw std::invalid_argument("exogeneity_ratio: lambda0 must be >= 0");
    if (n_events == 0) throw std::invalid_argument("exogeneity_ratio: n_events must be > 0");
    if (!(session_seconds > 0.0))
        throw std::invalid_argument("exogeneity_ratio: session_seconds must be > 0");
    return lambda0 / (static_cast<double>(n_events) / session_seconds);
}

} // namespace hawkes
