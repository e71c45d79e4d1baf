#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/likelihood.hpp"
#include "hawkes/model.hpp"
#include "hawkes/optimize.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/precompute.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/tying.hpp"

namespace hawkes {

/// Box bounds per parameter kind; all must be positive. The near factors
/// control bound-hit reporting: an estimate within near_lo_factor of its
/// lower bound (or near_hi_factor of its upper) is flagged.
struct Bounds {
    double lambda0_lo = 1e-10, lambda0_hi = 1e3;
    double alpha_lo = 1e-10, alpha_hi = 1e6;
    double beta_lo = 1e-10, beta_hi = 1e6;
    double near_lo_factor = 1e3;
    double near_hi_factor = 1e2;

    void validate() const {
        auto check = [](double lo, double hi, const char* name) {
            if (!(lo > 0.0) || !(hi > lo))
                throw std::invalid_argument(std::string("Bounds: need 0 < lo < hi for ") + name);
        };
        check(lambda0_lo, lambda0_hi, "lambda0");
        check(alpha_lo, alpha_hi, "alpha");
        check(beta_lo, beta_hi, "beta");
    }

    std::pair<double, double> for_kind(theta::ParamKind k) const {
        switch (k) {
        case theta::ParamKind::lambda0: return {lambda0_lo, lambda0_hi};
        case theta::ParamKind::alpha: return {alpha_lo, alpha_hi};
        default: return {beta_lo, beta_hi};
        }
    }
};

struct FitOptions {
    Bounds bounds;
    OptMethod method = OptMethod::powell;
    OptOptions opt;
    std::optional<std::vector<double>> init; // natural space, layout of the entry point
    std::optional<double> horizon;
};

struct FitResult {
    std::vector<double> estimates;
    std::vector<std::string> names;
    double neg_ll = std::numeric_limits<double>::infinity();
    std::size_t n_evals = 0;
    bool converged = false;
    double runtime_s = 0.0;
    std::string method;
    std::vector<std::string> bound_hits; // "name:lower" / "name:upper"
    std::vector<double> trace;           // best objective per optimizer iteration
    std::string error;                   // nonempty when the fit failed outright

    Model1D as_model_1d(double tau = 0.0) const {
        if (estimates.size() != 3)
            throw std::logic_error("FitResult::as_model_1d: not a univariate fit");
        return Model1D{estimates[0], estimates[1], estimates[2], tau};
    }

    ModelMD as_model_md(std::size_t dim, const Matrix& tau) const {
        if (estimates.size() != theta::size(dim))
            throw std::logic_error("FitResult::as_model_md: not a full joint fit");
        return theta::unpack(estimates, dim, tau);
    }
};

namespace detail {

inline const char* method_name(OptMethod m) {
    switch (m) {
    case OptMethod::simplex: return "simplex";
    case OptMethod::powell: return "powell";
    default: return "global";
    }
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

inline void check_in_bounds(double x, std::pair<double, double> b, const std::string& name) {
    if (!(x >= b.first) || !(x <= b.second))
        throw std::invalid_argument("fit: initial " + name + " = " + std::to_string(x) +
                                    " is outside its bounds");
}

inline void flag_bound_hits(FitResult& fit, const Bounds& bounds,
                            const std::vector<theta::ParamKind>& kinds) {
    for (std::size_t i = 0; i < fit.estimates.size(); ++i) {
        const auto [lo, hi] = bounds.for_kind(kinds[i]);
        if (fit.estimates[i] <= lo * bounds.near_lo_factor)
            fit.bound_hits.push_back(fit.names[i] + ":lower");
        else if (fit.estimates[i] >= hi / bounds.near_hi_factor)
            fit.bound_hits.push_back(fit.names[i] + ":upper");
    }
}

/// Shared fit driver: decode maps optimizer coordinates to natural
/// parameters, obj evaluates the target on natural parameters.
inline FitResult run_fit(const std::function<std::vector<double>(std::span<const double>)>& decode,
                         std::vector<double> u0,
                         const std::function<double(const std::vector<double>&)>& obj,
                         const FitOptions& opts, std::vector<std::string> names,
                         const std::vector<theta::ParamKind>& kinds) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> natural;
    auto wrapped = [&](std::span<const double> u) {
        natural = decode(u);
        return obj(natural);
    };
    const OptResult r = minimize(wrapped, std::move(u0), opts.method, opts.opt);

    FitResult fit;
    fit.estimates = decode(r.x);
    fit.names = std::move(names);
    fit.neg_ll = r.f;
    fit.n_evals = r.n_evals;
    fit.converged = r.converged && std::isfinite(r.f);
    fit.trace = r.trace;
    fit.method = method_name(opts.method);
    flag_bound_hits(fit, opts.bounds, kinds);
    fit.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return fit;
}

inline std::vector<double> default_init_1d(const PrecomputedDiffs1D& pre, const Bounds& bounds) {
    double beta = 1.0;
    const double med = median_of(pre.dt);
    if (med > 0.0) beta = 1.0 / med;
    double lambda0 = static_cast<double>(pre.n_events) / (2.0 * pre.horizon);
    const auto clamp_into = [&](double x, std::pair<double, double> b) {
        return std::clamp(x, b.first * 10.0, b.second / 10.0);
    };
    beta = clamp_into(beta, bounds.for_kind(theta::ParamKind::beta));
    lambda0 = clamp_into(lambda0, bounds.for_kind(theta::ParamKind::lambda0));
    return {lambda0, beta / 2.0, beta};
}

} // namespace detail

/// Maximum-likelihood fit of the univariate model. Box bounds hold through
/// the log-scale transform and the stationarity constraint alpha < beta is
/// structural: alpha is parameterized inside (alpha_lo, min(beta, alpha_hi)).
inline FitResult fit_1d(const PrecomputedDiffs1D& pre, const FitOptions& opts = {}) {
    opts.bounds.validate();
    const BoxTransform t_lambda0(opts.bounds.lambda0_lo, opts.bounds.lambda0_hi);
    const BoxTransform t_beta(opts.bounds.beta_lo, opts.bounds.beta_hi);
    const auto alpha_box = [&](double beta) {
        const double hi = std::max(std::min(beta, opts.bounds.alpha_hi),
                                   opts.bounds.alpha_lo * (1.0 + 1e-9));
        return BoxTransform(opts.bounds.alpha_lo, hi);
    };

    std::vector<double> init =
        opts.init ? *opts.init : detail::default_init_1d(pre, opts.bounds);
    if (init.size() != 3) throw std::invalid_argument("fit_1d: init must be (lambda0, alpha, beta)");
    if (opts.init) {
        detail::check_in_bounds(init[0], opts.bounds.for_kind(theta::ParamKind::lambda0), "lambda0");
        detail::check_in_bounds(init[1], opts.bounds.for_kind(theta::ParamKind::alpha), "alpha");
        detail::check_in_bounds(init[2], opts.bounds.for_kind(theta::ParamKind::beta), "beta");
        if (!(init[1] < init[2]))
            throw std::invalid_argument("fit_1d: init must satisfy alpha < beta");
    }

    std::vector<double> u0 = {t_lambda0.to_internal(init[0]),
                              alpha_box(init[2]).to_internal(init[1]),
                              t_beta.to_internal(init[2])};

    const bool zero_latency = pre.tau == 0.0;
    const auto decode = [&, t_lambda0, t_beta](std::span<const double> u) {
        const double lambda0 = t_lambda0.to_natural(u[0]);
        const double beta = t_beta.to_natural(u[2]);
        const double alpha = alpha_box(beta).to_natural(u[1]);
        return std::vector<double>{lambda0, alpha, beta};
    };
    const auto obj = [&](const std::vector<double>& x) {
        return zero_latency ? negll_1d(pre, x[0], x[1], x[2])
                            : negll_1d_latency(pre, x[0], x[1], x[2]);
    };
    return detail::run_fit(decode, std::move(u0), obj, opts, {"lambda0", "alpha", "beta"},
                           {theta::ParamKind::lambda0, theta::ParamKind::alpha,
                            theta::ParamKind::beta});
}

inline FitResult fit_1d(const EventSeries& events, double tau, const FitOptions& opts = {}) {
    return fit_1d(precompute_1d(events, tau, opts.horizon), opts);
}

/// Per-node fit (box bounds only, no stationarity constraint). The estimate
/// layout is {lambda0^m, alpha[m][0..M), beta[m][0..M)}.
inline FitResult fit_node_md(const PrecomputedDiffsMD& pre, std::size_t node,
                             const FitOptions& opts = {}) {
    opts.bounds.validate();
    const std::size_t dim = pre.dim;
    if (node >= dim) throw std::out_of_range("fit_node_md: node index out of range");

    std::vector<theta::ParamKind> kinds;
    std::vector<std::string> names;
    kinds.push_back(theta::ParamKind::lambda0);
    names.push_back("lambda0[" + std::to_string(node) + "]");
    for (std::size_t n = 0; n < dim; ++n) {
        kinds.push_back(theta::ParamKind::alpha);
        names.push_back("alpha[" + std::to_string(node) + "][" + std::to_string(n) + "]");
    }
    for (std::size_t n = 0; n < dim; ++n) {
        kinds.push_back(theta::ParamKind::beta);
        names.push_back("beta[" + std::to_string(node) + "][" + std::to_string(n) + "]");
    }

    std::vector<double> init;
    if (opts.init) {
        init = *opts.init;
        if (init.size() != 1 + 2 * dim)
            throw std::invalid_argument("fit_node_md: init must have 1 + 2M entries");
        for (std::size_t i = 0; i < init.size(); ++i)
            detail::check_in_bounds(init[i], opts.bounds.for_kind(kinds[i]), names[i]);
    } else {
        double beta = 1.0;
        const double med = detail::median_of(pre.dt[node]);
        if (med > 0.0) beta = 1.0 / med;
        beta = std::clamp(beta, opts.bounds.beta_lo * 10.0, opts.bounds.beta_hi / 10.0);
        double lambda0 =
            static_cast<double>(pre.n_events[node]) / (2.0 * pre.horizon[node]);
        lambda0 = std::clamp(lambda0, opts.bounds.lambda0_lo * 10.0, opts.bounds.lambda0_hi / 10.0);
        init.assign(1 + 2 * dim, 0.0);
        init[0] = lambda0;
        for (std::size_t n = 0; n < dim; ++n) {
            init[1 + n] = beta / (2.0 * static_cast<double>(dim));
            init[1 + dim + n] = beta;
        }
    }

    std::vector<BoxTransform> boxes;
    boxes.reserve(kinds.size());
    for (auto k : kinds) {
        const auto [lo, hi] = opts.bounds.for_kind(k);
        boxes.emplace_back(lo, hi);
    }
    std::vector<double> u0(init.size());
    for (std::size_t i = 0; i < init.size(); ++i) u0[i] = boxes[i].to_internal(init[i]);

    const auto decode = [boxes](std::span<const double> u) {
        std::vector<double> x(u.size());
        for (std::size_t i = 0; i < u.size(); ++i) x[i] = boxes[i].to_natural(u[i]);
        return x;
    };
    const auto obj = [&pre, node, dim](const std::vector<double>& x) {
        return negll_node_md(pre, node, x[0], {x.data() + 1, dim}, {x.data() + 1 + dim, dim});
    };
    return detail::run_fit(decode, std::move(u0), obj, opts, std::move(names), kinds);
}

inline FitResult fit_node_md(std::span<const EventSeries> events, const Matrix& tau,
                             std::size_t node, const FitOptions& opts = {}) {
    return fit_node_md(precompute_md(events, tau, opts.horizon), node, opts);
}

/// Joint fit over the free-parameter vector of a tying scheme. Equality
/// constraints are realized by reparameterization; multivariate stationarity
/// is kept by a smooth penalty on the branching spectral radius.
inline FitResult fit_joint_md(const PrecomputedDiffsMD& pre, const TyingScheme& tying,
                              const FitOptions& opts = {}) {
    opts.bounds.validate();
    tying.validate();
    const std::size_t dim = pre.dim;
    if (tying.dim != dim) throw std::invalid_argument("fit_joint_md: tying dimension mismatch");
    const std::size_t full = theta::size(dim);

    std::vector<double> init_full;
    if (opts.init) {
        init_full = *opts.init;
        if (init_full.size() != full)
            throw std::invalid_argument("fit_joint_md: init must use the full theta layout");
        for (std::size_t i = 0; i < full; ++i)
            detail::check_in_bounds(init_full[i], opts.bounds.for_kind(theta::kind(dim, i)),
                                    theta::name(dim, i));
    } else {
        init_full.assign(full, 0.0);
        for (std::size_t m = 0; m < dim; ++m) {
            double beta = 1.0;
            const double med = detail::median_of(pre.dt[m]);
            if (med > 0.0) beta = 1.0 / med;
            beta = std::clamp(beta, opts.bounds.beta_lo * 10.0, opts.bounds.beta_hi / 10.0);
            double lambda0 = static_cast<double>(pre.n_events[m]) / (2.0 * pre.horizon[m]);
            lambda0 =
                std::clamp(lambda0, opts.bounds.lambda0_lo * 10.0, opts.bounds.lambda0_hi / 10.0);
            init_full[theta::lambda0_index(dim, m)] = lambda0;
            for (std::size_t n = 0; n < dim; ++n) {
                init_full[theta::alpha_index(dim, m, n)] = beta / (2.0 * static_cast<double>(dim));
                init_full[theta::beta_index(dim, m, n)] = beta;
            }
        }
    }

    const auto reps = tying.representatives();
    std::vector<BoxTransform> boxes;
    std::vector<theta::ParamKind> free_kinds;
    boxes.reserve(tying.n_free);
    for (std::size_t j = 0; j < tying.n_free; ++j) {
        const auto kind = theta::kind(dim, reps[j]);
        free_kinds.push_back(kind);
        const auto [lo, hi] = opts.bounds.for_kind(kind);
        boxes.emplace_back(lo, hi);
    }
    const std::vector<double> init_free = tying.reduce(init_full);
    std::vector<double> u0(tying.n_free);
    for (std::size_t j = 0; j < tying.n_free; ++j) u0[j] = boxes[j].to_internal(init_free[j]);

    const auto decode = [boxes, &tying](std::span<const double> u) {
        std::vector<double> free_nat(u.size());
        for (std::size_t j = 0; j < u.size(); ++j) free_nat[j] = boxes[j].to_natural(u[j]);
        return tying.expand(free_nat);
    };

    constexpr double kStationarityMargin = 1e-3;
    constexpr double kPenaltyWeight = 1e8;
    const auto obj = [&pre, dim](const std::vector<double>& th) {
        Matrix gamma(dim, std::vector<double>(dim, 0.0));
        for (std::size_t m = 0; m < dim; ++m)
            for (std::size_t n = 0; n < dim; ++n)
                gamma[m][n] = th[theta::alpha_index(dim, m, n)] / th[theta::beta_index(dim, m, n)];
        const double rho = detail::nonneg_spectral_radius(gamma);
        const double excess = std::max(0.0, rho - 1.0 + kStationarityMargin);
        return negll_joint_md(pre, th) + kPenaltyWeight * excess * excess;
    };

    std::vector<std::string> names;
    std::vector<theta::ParamKind> kinds;
    names.reserve(full);
    kinds.reserve(full);
    for (std::size_t i = 0; i < full; ++i) {
        names.push_back(theta::name(dim, i));
        kinds.push_back(theta::kind(dim, i));
    }
    FitResult fit = detail::run_fit(decode, std::move(u0), obj, opts, std::move(names), kinds);
    // report the likelihood itself, not the penalized value, when feasible
    if (std::isfinite(fit.neg_ll)) fit.neg_ll = negll_joint_md(pre, fit.estimates);
    return fit;
}

inline FitResult fit_joint_md(std::span<const EventSeries> events, const Matrix& tau,
                              const TyingScheme& tying, const FitOptions& opts = {}) {
    return fit_joint_md(precompute_md(events, tau, opts.horizon), tying, opts);
}

enum class MultipathMode { per_path, pooled };

struct MultipathSummary {
    std::vector<std::string> names;
    std::vector<double> mean, median, sd;
    double mean_neg_ll = 0.0;
    std::size_t n_fits = 0;
    std::size_t n_converged = 0;
    std::size_t n_excluded = 0; // non-converged fits left out of the summary
};

struct MultipathResult {
    std::vector<FitResult> fits;
    MultipathSummary summary;
};

namespace detail {

inline MultipathSummary summarize(const std::vector<FitResult>& fits) {
    MultipathSummary s;
    s.n_fits = fits.size();
    const FitResult* first_ok = nullptr;
    for (const auto& f : fits)
        if (f.converged) {
            ++s.n_converged;
            if (!first_ok) first_ok = &f;
        }
    s.n_excluded = s.n_fits - s.n_converged;
    if (!first_ok) return s;

    const std::size_t k = first_ok->estimates.size();
    s.names = first_ok->names;
    s.mean.assign(k, 0.0);
    s.median.assign(k, 0.0);
    s.sd.assign(k, 0.0);
    std::vector<std::vector<double>> columns(k);
    double ll_sum = 0.0;
    for (const auto& f : fits) {
        if (!f.converged) continue;
        for (std::size_t i = 0; i < k; ++i) columns[i].push_back(f.estimates[i]);
        ll_sum += f.neg_ll;
    }
    const double n = static_cast<double>(s.n_converged);
    s.mean_neg_ll = ll_sum / n;
    for (std::size_t i = 0; i < k; ++i) {
        double mean = 0.0;
        for (double v : columns[i]) mean += v;
        mean /= n;
        double var = 0.0;
        for (double v : columns[i]) var += (v - mean) * (v - mean);
        s.mean[i] = mean;
        s.sd[i] = s.n_converged > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
        std::sort(columns[i].begin(), columns[i].end());
        s.median[i] = columns[i][columns[i].size() / 2];
    }
    return s;
}

inline FitResult failed_fit(const std::string& message) {
    FitResult f;
    f.converged = false;
    f.error = message;
    return f;
}

// One fit per path: univariate for M = 1, otherwise the per-node fits
// assembled into the full theta layout (node slices are disjoint, so the
// joint optimum separates when no parameters are tied).
inline FitResult fit_one_path(const SimPath& path, const Matrix& tau, const FitOptions& opts) {
    const std::size_t dim = path.nodes.size();
    if (dim == 1) {
        FitResult f = fit_1d(path.nodes[0], tau[0][0], opts);
        return f;
    }
    const auto pre = precompute_md(path.nodes, tau, opts.horizon);
    FitResult joint;
    joint.estimates.assign(theta::size(dim), 0.0);
    joint.names.reserve(theta::size(dim));
    for (std::size_t i = 0; i < theta::size(dim); ++i) joint.names.push_back(theta::name(dim, i));
    joint.neg_ll = 0.0;
    joint.converged = true;
    for (std::size_t m = 0; m < dim; ++m) {
        const FitResult f = fit_node_md(pre, m, opts);
        joint.neg_ll += f.neg_ll;
        joint.n_evals += f.n_evals;
        joint.converged = joint.converged && f.converged;
        joint.runtime_s += f.runtime_s;
        joint.method = f.method;
        for (const auto& h : f.bound_hits) joint.bound_hits.push_back(h);
        joint.estimates[theta::lambda0_index(dim, m)] = f.estimates[0];
        for (std::size_t n = 0; n < dim; ++n) {
            joint.estimates[theta::alpha_index(dim, m, n)] = f.estimates[1 + n];
            joint.estimates[theta::beta_index(dim, m, n)] = f.estimates[1 + dim + n];
        }
    }
    return joint;
}

} // namespace detail

/// Fits every path of a PathSet. per_path mode runs independent fits and
/// summarizes across converged ones; pooled mode minimizes the sum of the
/// per-path negative log-likelihoods once.
inline MultipathResult fit_multipath(const PathSet& set, const Matrix& tau,
                                     const FitOptions& opts = {},
                                     MultipathMode mode = MultipathMode::per_path) {
    if (set.paths.empty()) throw std::invalid_argument("fit_multipath: empty path set");
    const std::size_t dim = set.dim;
    if (tau.size() != dim) throw std::invalid_argument("fit_multipath: tau dimension mismatch");

    MultipathResult result;
    if (mode == MultipathMode::per_path) {
        result.fits.resize(set.paths.size());
        parallel_for(set.paths.size(), [&](std::size_t p) {
            FitOptions path_opts = opts;
            path_opts.opt.seed = path_seed(opts.opt.seed, p);
            try {
                result.fits[p] = detail::fit_one_path(set.paths[p], tau, path_opts);
            } catch (const std::exception& e) {
                result.fits[p] = detail::failed_fit(e.what());
            }
        });
        result.summary = detail::summarize(result.fits);
        return result;
    }

    // pooled
    if (dim == 1) {
        std::vector<PrecomputedDiffs1D> pres(set.paths.size());
        parallel_for(set.paths.size(), [&](std::size_t p) {
            pres[p] = precompute_1d(set.paths[p].nodes[0], tau[0][0], opts.horizon);
        });
        opts.bounds.validate();
        const BoxTransform t_lambda0(opts.bounds.lambda0_lo, opts.bounds.lambda0_hi);
        const BoxTransform t_beta(opts.bounds.beta_lo, opts.bounds.beta_hi);
        const auto alpha_box = [&](double beta) {
            const double hi = std::max(std::min(beta, opts.bounds.alpha_hi),
                                       opts.bounds.alpha_lo * (1.0 + 1e-9));
            return BoxTransform(opts.bounds.alpha_lo, hi);
        };
        std::vector<double> init =
            opts.init ? *opts.init : detail::default_init_1d(pres[0], opts.bounds);
        if (init.size() != 3)
            throw std::invalid_argument("fit_multipath: init must be (lambda0, alpha, beta)");
        std::vector<double> u0 = {t_lambda0.to_internal(init[0]),
                                  alpha_box(init[2]).to_internal(init[1]),
                                  t_beta.to_internal(init[2])};
        const auto decode = [&, t_lambda0, t_beta](std::span<const double> u) {
            const double lambda0 = t_lambda0.to_natural(u[0]);
            const double beta = t_beta.to_natural(u[2]);
            return std::vector<double>{lambda0, alpha_box(beta).to_natural(u[1]), beta};
        };
        const auto obj = [&](const std::vector<double>& x) {
            double total = 0.0;
            for (const auto& pre : pres)
                total += pre.tau == 0.0 ? negll_1d(pre, x[0], x[1], x[2])
                                        : negll_1d_latency(pre, x[0], x[1], x[2]);
            return total;
        };
        result.fits.push_back(detail::run_fit(decode, std::move(u0), obj, opts,
                                              {"lambda0", "alpha", "beta"},
                                              {theta::ParamKind::lambda0, theta::ParamKind::alpha,
                                               theta::ParamKind::beta}));
    } else {
        std::vector<PrecomputedDiffsMD> pres(set.paths.size());
        parallel_for(set.paths.size(), [&](std::size_t p) {
            pres[p] = precompute_md(set.paths[p].nodes, tau, opts.horizon);
        });
        const auto obj_sum = [&pres](const std::vector<double>& th) {
            double total = 0.0;
            for (const auto& pre : pres) total += negll_joint_md(pre, th);
            return total;
        };
        const std::size_t full = theta::size(dim);
        std::vector<double> init_full;
        if (opts.init) {
            init_full = *opts.init;
            if (init_full.size() != full)
                throw std::invalid_argument("fit_multipath: init must use the full theta layout");
        } else {
            init_full.assign(full, 0.0);
            for (std::size_t m = 0; m < dim; ++m) {
                double beta = 1.0;
                const double med = detail::median_of(pres[0].dt[m]);
                if (med > 0.0) beta = 1.0 / med;
                beta = std::clamp(beta, opts.bounds.beta_lo * 10.0, opts.bounds.beta_hi / 10.0);
                double lambda0 = static_cast<double>(pres[0].n_events[m]) /
                                 (2.0 * pres[0].horizon[m]);
                lambda0 = std::clamp(lambda0, opts.bounds.lambda0_lo * 10.0,
                                     opts.bounds.lambda0_hi / 10.0);
                init_full[theta::lambda0_index(dim, m)] = lambda0;
                for (std::size_t n = 0; n < dim; ++n) {
                    init_full[theta::alpha_index(dim, m, n)] =
                        beta / (2.0 * static_cast<double>(dim));
                    init_full[theta::beta_index(dim, m, n)] = beta;
                }
            }
        }
        std::vector<BoxTransform> boxes;
        for (std::size_t i = 0; i < full; ++i) {
            const auto [lo, hi] = opts.bounds.for_kind(theta::kind(dim, i));
            boxes.emplace_back(lo, hi);
        }
        std::vector<double> u0(full);
        for (std::size_t i = 0; i < full; ++i) u0[i] = boxes[i].to_internal(init_full[i]);
        const auto decode = [boxes](std::span<const double> u) {
            std::vector<double> x(u.size());
            for (std::size_t i = 0; i < u.size(); ++i) x[i] = boxes[i].to_natural(u[i]);
            return x;
        };
        std::vector<std::string> names;
        std::vector<theta::ParamKind> kinds;
        for (std::size_t i = 0; i < full; ++i) {
            names.push_back(theta::name(dim, i));
            kinds.push_back(theta::kind(dim, i));
        }
        result.fits.push_back(
            detail::run_fit(decode, std::move(u0), obj_sum, opts, std::move(names), kinds));
    }
    result.summary = detail::summarize(result.fits);
    return result;
}

inline MultipathResult fit_multipath(const PathSet& set, double tau, const FitOptions& opts = {},
                                     MultipathMode mode = MultipathMode::per_path) {
    const Matrix t(set.dim, std::vector<double>(set.dim, tau));
    return fit_multipath(set, t, opts, mode);
}

} // namespace hawkes
