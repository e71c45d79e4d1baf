#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hawkes/event_series.hpp"
#include "hawkes/model.hpp"
#include "hawkes/precompute.hpp"

namespace hawkes {

namespace detail {

inline void check_params_1d(double lambda0, double alpha, double beta) {
    if (!(lambda0 >= 0.0)) throw std::invalid_argument("negll: lambda0 must be >= 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("negll: alpha must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("negll: beta must be > 0");
}

inline double checked_log(double x) {
    if (!(x > 0.0))
        throw std::domain_error("negll: log of non-positive intensity; lambda0 + alpha*R must be > 0");
    return std::log(x);
}

inline double compensator_sum(std::span<const double> ddt, double beta) {
    double acc = 0.0;
    for (double d : ddt) acc += 1.0 - std::exp(-beta * d);
    return acc;
}

} // namespace detail

/// Recursion values R(i) = sum over t_k < t_i - tau of exp(-beta*(t_i-tau-t_k)),
/// computed incrementally from the precomputed windows with R(1) = 0.
inline std::vector<double> latency_r_values(const PrecomputedDiffs1D& pre, double beta) {
    std::vector<double> r(pre.n_events, 0.0);
    for (std::size_t i = 1; i < pre.n_events; ++i) {
        double win = 0.0;
        for (double w : pre.windows.at(i)) win += std::exp(-beta * w);
        r[i] = r[i - 1] * std::exp(-beta * pre.dt[i - 1]) + win;
    }
    return r;
}

/// Negative log-likelihood of the zero-latency exponential model via the
/// classic O(N) recursion R(i) = exp(-beta*dt)*(1 + R(i-1)).
inline double negll_1d(const PrecomputedDiffs1D& pre, double lambda0, double alpha, double beta) {
    detail::check_params_1d(lambda0, alpha, beta);
    if (pre.tau != 0.0)
        throw std::invalid_argument("negll_1d: requires a precompute built with tau = 0");

    double log_sum = detail::checked_log(lambda0);
    double r = 0.0;
    for (std::size_t i = 1; i < pre.n_events; ++i) {
        r = std::exp(-beta * pre.dt[i - 1]) * (1.0 + r);
        log_sum += detail::checked_log(lambda0 + alpha * r);
    }
    const double comp = (alpha / beta) * detail::compensator_sum(pre.ddt, beta);
    return -(pre.horizon * (1.0 - lambda0) - comp + log_sum);
}

/// Negative log-likelihood with latency. Reduces to negll_1d when the
/// precompute was built with tau = 0.
inline double negll_1d_latency(const PrecomputedDiffs1D& pre, double lambda0, double alpha,
                               double beta) {
    detail::check_params_1d(lambda0, alpha, beta);

    double log_sum = detail::checked_log(lambda0);
    double r = 0.0;
    for (std::size_t i = 1; i < pre.n_events; ++i) {
        double win = 0.0;
        for (double w : pre.windows.at(i)) win += std::exp(-beta * w);
        r = r * std::exp(-beta * pre.dt[i - 1]) + win;
        log_sum += detail::checked_log(lambda0 + alpha * r);
    }
    const double comp = (alpha / beta) * detail::compensator_sum(pre.ddt, beta);
    return -(pre.horizon * (1.0 - lambda0) - comp + log_sum);
}

/// Negative log-likelihood of target node m given the parameter slice
/// {lambda0^m, alpha[m][.], beta[m][.]}.
inline double negll_node_md(const PrecomputedDiffsMD& pre, std::size_t m, double lambda0,
                            std::span<const double> alpha_row, std::span<const double> beta_row) {
    const std::size_t dim = pre.dim;
    if (m >= dim) throw std::out_of_range("negll_node_md: node index out of range");
    if (alpha_row.size() != dim || beta_row.size() != dim)
        throw std::invalid_argument("negll_node_md: parameter rows must have M entries");
    if (!(lambda0 >= 0.0)) throw std::invalid_argument("negll: lambda0 must be >= 0");
    for (std::size_t n = 0; n < dim; ++n) {
        if (!(alpha_row[n] >= 0.0)) throw std::invalid_argument("negll: alpha must be >= 0");
        if (!(beta_row[n] > 0.0)) throw std::invalid_argument("negll: beta must be > 0");
    }

    const std::size_t n_m = pre.n_events[m];
    double log_sum = 0.0;
    if (n_m > 0) {
        log_sum = detail::checked_log(lambda0);
        std::vector<double> r(dim, 0.0);
        for (std::size_t i = 1; i < n_m; ++i) {
            double excitation = 0.0;
            for (std::size_t n = 0; n < dim; ++n) {
                double win = 0.0;
                for (double w : pre.windows[pre.pair_index(m, n)].at(i))
                    win += std::exp(-beta_row[n] * w);
                r[n] = r[n] * std::exp(-beta_row[n] * pre.dt[m][i - 1]) + win;
                excitation += alpha_row[n] * r[n];
            }
            log_sum += detail::checked_log(lambda0 + excitation);
        }
    }

    double comp = 0.0;
    for (std::size_t n = 0; n < dim; ++n)
        comp += (alpha_row[n] / beta_row[n]) *
                detail::compensator_sum(pre.ddt[pre.pair_index(m, n)], beta_row[n]);
    return -(pre.horizon[m] * (1.0 - lambda0) - comp + log_sum);
}

/// Joint negative log-likelihood: the sum of per-node values over the full
/// parameter vector in theta layout.
inline double negll_joint_md(const PrecomputedDiffsMD& pre, std::span<const double> theta_full) {
    const std::size_t dim = pre.dim;
    if (theta_full.size() != theta::size(dim))
        throw std::invalid_argument("negll_joint_md: theta has wrong length");
    double total = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
        const std::span<const double> alpha_row = theta_full.subspan(theta::alpha_index(dim, m, 0), dim);
        const std::span<const double> beta_row = theta_full.subspan(theta::beta_index(dim, m, 0), dim);
        total += negll_node_md(pre, m, theta_full[theta::lambda0_index(dim, m)], alpha_row, beta_row);
    }
    return total;
}

inline double negll_joint_md(const PrecomputedDiffsMD& pre, const ModelMD& model) {
    return negll_joint_md(pre, theta::pack(model));
}

inline constexpr std::size_t kBruteforceCap = 5000;

/// Reference oracle: the same log-likelihood evaluated by direct double
/// summation over event pairs, O(N^2), capped to keep runtimes sane.
inline double negll_bruteforce(const EventSeries& events, double lambda0, double alpha,
                               double beta, double tau,
                               std::optional<double> horizon = {},
                               std::size_t cap = kBruteforceCap) {
    detail::check_params_1d(lambda0, alpha, beta);
    if (!(tau >= 0.0)) throw std::invalid_argument("negll_bruteforce: tau must be >= 0");
    if (events.empty()) throw std::invalid_argument("negll_bruteforce: empty event series");
    if (events.size() > cap)
        throw std::invalid_argument("negll_bruteforce: series exceeds the O(N^2) cap");
    const auto& ts = events.times();
    const double t_end = horizon.value_or(ts.back());

    double log_sum = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double acc = 0.0;
        const double cutoff = ts[i] - tau;
        for (std::size_t k = 0; k < i; ++k)
            if (ts[k] < cutoff) acc += std::exp(-beta * (cutoff - ts[k]));
        log_sum += detail::checked_log(lambda0 + alpha * acc);
    }
    double comp = 0.0;
    for (double t : ts)
        if (t < t_end - tau) comp += 1.0 - std::exp(-beta * (t_end - tau - t));
    comp *= alpha / beta;
    return -(t_end * (1.0 - lambda0) - comp + log_sum);
}

/// Multivariate oracle. The log term for node m counts source events from
/// t_1^m - tau onward (events earlier than the first target event minus the
/// latency carry no recursion state and are reported by the precompute's
/// dropped_pre_first diagnostic instead).
inline double negll_bruteforce_md(std::span<const EventSeries> events, const ModelMD& model,
                                  std::optional<double> horizon = {},
                                  std::size_t cap = kBruteforceCap) {
    model.validate();
    const std::size_t dim = model.dim();
    if (events.size() != dim)
        throw std::invalid_argument("negll_bruteforce_md: expected one series per node");
    std::size_t total_events = 0;
    for (const auto& s : events) total_events += s.size();
    if (total_events > cap)
        throw std::invalid_argument("negll_bruteforce_md: series exceed the O(N^2) cap");

    double total = 0.0;
    for (std::size_t m = 0; m < dim; ++m) {
        const auto& tm = events[m].times();
        double t_end = 0.0;
        if (tm.empty()) {
            if (!horizon)
                throw std::invalid_argument("negll_bruteforce_md: empty node requires a horizon");
            t_end = *horizon;
        } else {
            t_end = horizon.value_or(tm.back());
        }

        double log_sum = 0.0;
        for (std::size_t i = 0; i < tm.size(); ++i) {
            double lam = model.lambda0[m];
            for (std::size_t n = 0; n < dim; ++n) {
                const double tau = model.tau[m][n];
                const double lo = tm[0] - tau;
                const double hi = tm[i] - tau;
                double acc = 0.0;
                for (double tk : events[n].times())
                    if (tk >= lo && tk < hi) acc += std::exp(-model.beta[m][n] * (hi - tk));
                lam += model.alpha[m][n] * acc;
            }
            log_sum += detail::checked_log(lam);
        }

        double comp = 0.0;
        for (std::size_t n = 0; n < dim; ++n) {
            const double tau = model.tau[m][n];
            double acc = 0.0;
            for (double tk : events[n].times())
                if (tk < t_end - tau)
                    acc += 1.0 - std::exp(-model.beta[m][n] * (t_end - tau - tk));
            comp += (model.alpha[m][n] / model.beta[m][n]) * acc;
        }
        total += -(t_end * (1.0 - model.lambda0[m]) - comp + log_sum);
    }
    return total;
}

} // namespace hawkes
