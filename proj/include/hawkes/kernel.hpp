#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hawkes/event_series.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

/// Shifted exponential kernel: 0 before the latency, then a jump to alpha at
/// t = tau followed by exponential decay.
inline double kernel_value(double alpha, double beta, double tau, double t) {
    if (t < tau) return 0.0;
    return alpha * std::exp(-beta * (t - tau));
}

inline double kernel_value(const Model1D& model, double t) {
    return kernel_value(model.alpha, model.beta, model.tau, t);
}

/// Conditional intensity lambda(t) = lambda0 + sum over events with
/// t_i < t - tau of alpha * exp(-beta * (t - tau - t_i)). The inequality is
/// strict: an event exactly tau in the past contributes only for strictly
/// later evaluation times.
inline double intensity_at(const Model1D& model, const EventSeries& events, double t) {
    model.validate();
    double acc = 0.0;
    const double cutoff = t - model.tau;
    const auto& ts = events.times();
    const auto end = std::lower_bound(ts.begin(), ts.end(), cutoff);
    for (auto it = ts.begin(); it != end; ++it)
        acc += std::exp(-model.beta * (cutoff - *it));
    return model.lambda0 + model.alpha * acc;
}

/// Intensity of target node m (0-based) in the multivariate model.
inline double intensity_at_md(const ModelMD& model, std::span<const EventSeries> events,
                              std::size_t m, double t) {
    model.validate();
    const std::size_t dim = model.dim();
    if (m >= dim) throw std::out_of_range("intensity_at_md: node index out of range");
    if (events.size() != dim)
        throw std::invalid_argument("intensity_at_md: expected one series per node");
    double lam = model.lambda0[m];
    for (std::size_t n = 0; n < dim; ++n) {
        const double cutoff = t - model.tau[m][n];
        const auto& ts = events[n].times();
        const auto end = std::lower_bound(ts.begin(), ts.end(), cutoff);
        double acc = 0.0;
        for (auto it = ts.begin(); it != end; ++it)
            acc += std::exp(-model.beta[m][n] * (cutoff - *it));
        lam += model.alpha[m][n] * acc;
    }
    return lam;
}

enum class CurveUnits { seconds, latency_units };

/// One sampled kernel curve for a (target, source) pair. In latency units the
/// abscissa is t / tau (dimensionless); the ordinate stays in 1/s.
struct KernelCurve {
    std::vector<double> abscissa;
    std::vector<double> ordinate;
    std::size_t target = 0;
    std::size_t source = 0;
    CurveUnits units = CurveUnits::seconds;
};

inline KernelCurve kernel_curve(double alpha, double beta, double tau, std::size_t n_points,
                                double horizon, CurveUnits units, std::size_t target = 0,
                                std::size_t source = 0) {
    if (n_points < 2) throw std::invalid_argument("kernel_curve: n_points must be >= 2");
    if (!(horizon > tau)) throw std::invalid_argument("kernel_curve: horizon must exceed tau");
    if (units == CurveUnits::latency_units && !(tau > 0.0))
        throw std::invalid_argument("kernel_curve: latency units require tau > 0");
    KernelCurve curve;
    curve.target = target;
    curve.source = source;
    curve.units = units;
    curve.abscissa.reserve(n_points);
    curve.ordinate.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) {
        const double t = horizon * static_cast<double>(i) / static_cast<double>(n_points - 1);
        curve.abscissa.push_back(units == CurveUnits::latency_units ? t / tau : t);
        curve.ordinate.push_back(kernel_value(alpha, beta, tau, t));
    }
    return curve;
}

inline KernelCurve kernel_curve(const Model1D& model, std::size_t n_points, double horizon,
                                CurveUnits units = CurveUnits::seconds) {
    model.validate();
    return kernel_curve(model.alpha, model.beta, model.tau, n_points, horizon, units);
}

inline KernelCurve kernel_curve(const ModelMD& model, std::size_t m, std::size_t n,
                                std::size_t n_points, double horizon,
                                CurveUnits units = CurveUnits::seconds) {
    model.validate();
    if (m >= model.dim() || n >= model.dim())
        throw std::out_of_range("kernel_curve: pair index out of range");
    return kernel_curve(model.alpha[m][n], model.beta[m][n], model.tau[m][n], n_points, horizon,
                        units, m, n);
}

} // namespace hawkes
