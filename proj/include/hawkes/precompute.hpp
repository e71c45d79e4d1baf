#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hawkes/event_series.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

/// Window values for one (target, source) pair in compressed layout:
/// values[offsets[i] .. offsets[i+1]) holds t_i - tau - t_k for the source
/// events t_k with t_{i-1} - tau <= t_k < t_i - tau (left-closed, right-open).
/// Index 0 (the first target event) never has a window.
struct WindowSet {
    std::vector<std::size_t> offsets; // size n_targets + 1
    std::vector<double> values;

    std::size_t count(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
    std::span<const double> at(std::size_t i) const {
        return {values.data() + offsets[i], count(i)};
    }
};

namespace detail {

inline WindowSet build_windows(const std::vector<double>& target, const std::vector<double>& source,
                               double tau, std::size_t* dropped_pre_first = nullptr) {
    WindowSet w;
    const std::size_t n = target.size();
    w.offsets.assign(n + 1, 0);
    if (n == 0) return w;

    auto it = std::lower_bound(source.begin(), source.end(), target[0] - tau);
    if (dropped_pre_first)
        *dropped_pre_first = static_cast<std::size_t>(it - source.begin());
    for (std::size_t i = 1; i < n; ++i) {
        const double bound = target[i] - tau;
        while (it != source.end() && *it < bound) {
            w.values.push_back(target[i] - tau - *it);
            ++it;
        }
        w.offsets[i + 1] = w.values.size();
    }
    w.offsets[1] = 0;
    return w;
}

inline std::vector<double> build_ddt(const std::vector<double>& source, double horizon,
                                     double tau) {
    const double bound = horizon - tau;
    const auto end = std::lower_bound(source.begin(), source.end(), bound);
    std::vector<double> ddt;
    ddt.reserve(static_cast<std::size_t>(end - source.begin()));
    for (auto it = source.begin(); it != end; ++it) ddt.push_back(horizon - tau - *it);
    return ddt;
}

} // namespace detail

/// Difference structures consumed by the univariate likelihood: consecutive
/// gaps, the compensator differences horizon - tau - t_k over events with
/// t_k < horizon - tau, and the per-event latency windows.
struct PrecomputedDiffs1D {
    std::vector<double> dt;  // t_i - t_{i-1}, length N-1
    std::vector<double> ddt;
    WindowSet windows;
    double tau = 0.0;
    double horizon = 0.0; // defaults to t_N; override for truncated sessions
    std::size_t n_events = 0;
};

inline PrecomputedDiffs1D precompute_1d(const EventSeries& events, double tau,
                                        std::optional<double> horizon = {}) {
    if (events.empty()) throw std::invalid_argument("precompute_1d: empty event series");
    if (!(tau >= 0.0)) throw std::invalid_argument("precompute_1d: tau must be >= 0");
    const auto& ts = events.times();

    PrecomputedDiffs1D pre;
    pre.tau = tau;
    pre.n_events = ts.size();
    pre.horizon = horizon.value_or(ts.back());
    if (pre.horizon < ts.back())
        throw std::invalid_argument("precompute_1d: horizon is before the last event");

    pre.dt.reserve(ts.size() - 1);
    for (std::size_t i = 1; i < ts.size(); ++i) pre.dt.push_back(ts[i] - ts[i - 1]);
    pre.windows = detail::build_windows(ts, ts, tau);
    pre.ddt = detail::build_ddt(ts, pre.horizon, tau);
    return pre;
}

/// Multivariate difference structures; pair (m, n) is stored at index m*M + n.
struct PrecomputedDiffsMD {
    std::size_t dim = 0;
    Matrix tau;                               // tau[m][n]
    std::vector<std::vector<double>> dt;      // per target node
    std::vector<double> horizon;              // per target node
    std::vector<std::size_t> n_events;        // per node
    std::vector<std::vector<double>> ddt;     // per pair
    std::vector<WindowSet> windows;           // per pair
    std::vector<std::vector<std::size_t>> dropped_pre_first; // per [m][n]

    std::size_t pair_index(std::size_t m, std::size_t n) const { return m * dim + n; }
};

inline PrecomputedDiffsMD precompute_md(std::span<const EventSeries> events, const Matrix& tau,
                                        std::optional<double> horizon = {}) {
    const std::size_t m_dim = events.size();
    if (m_dim == 0) throw std::invalid_argument("precompute_md: no event series");
    if (tau.size() != m_dim)
        throw std::invalid_argument("precompute_md: tau has wrong row count");
    for (const auto& row : tau) {
        if (row.size() != m_dim)
            throw std::invalid_argument("precompute_md: tau has wrong column count");
        for (double v : row)
            if (!(v >= 0.0)) throw std::invalid_argument("precompute_md: tau entries must be >= 0");
    }

    PrecomputedDiffsMD pre;
    pre.dim = m_dim;
    pre.tau = tau;
    pre.dt.resize(m_dim);
    pre.horizon.resize(m_dim);
    pre.n_events.resize(m_dim);
    pre.ddt.resize(m_dim * m_dim);
    pre.windows.resize(m_dim * m_dim);
    pre.dropped_pre_first.assign(m_dim, std::vector<std::size_t>(m_dim, 0));

    for (std::size_t m = 0; m < m_dim; ++m) {
        const auto& ts = events[m].times();
        pre.n_events[m] = ts.size();
        if (ts.empty()) {
            if (!horizon)
                throw std::invalid_argument(
                    "precompute_md: node " + std::to_string(m) +
                    " has no events; an explicit horizon is required");
            pre.horizon[m] = *horizon;
        } else {
            pre.horizon[m] = horizon.value_or(ts.back());
            if (pre.horizon[m] < ts.back())
                throw std::invalid_argument("precompute_md: horizon is before the last event of node " +
                                            std::to_string(m));
        }
        pre.dt[m].reserve(ts.empty() ? 0 : ts.size() - 1);
        for (std::size_t i = 1; i < ts.size(); ++i) pre.dt[m].push_back(ts[i] - ts[i - 1]);
    }

    for (std::size_t m = 0; m < m_dim; ++m)
        for (std::size_t n = 0; n < m_dim; ++n) {
            const std::size_t k = pre.pair_index(m, n);
            pre.windows[k] = detail::build_windows(events[m].times(), events[n].times(),
                                                   tau[m][n], &pre.dropped_pre_first[m][n]);
            pre.ddt[k] = detail::build_ddt(events[n].times(), pre.horizon[m], tau[m][n]);
        }
    return pre;
}

inline PrecomputedDiffsMD precompute_md(std::span<const EventSeries> events, double tau,
                                        std::optional<double> horizon = {}) {
    Matrix t(events.size(), std::vector<double>(events.size(), tau));
    return precompute_md(events, t, horizon);
}

} // namespace hawkes
