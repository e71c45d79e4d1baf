#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hawkes/rng.hpp"

namespace hawkes {

enum class OptMethod { simplex, powell, global_then_local };

struct OptOptions {
    std::size_t max_evals = 100000;
    double f_tol = 1e-8;        // relative objective change
    double x_tol = 1e-6;        // internal-coordinate change
    std::uint64_t seed = 0;     // global stage only
    std::size_t de_population = 0;   // 0 -> max(20, 10 * dim)
    std::size_t de_generations = 150;
};

struct OptResult {
    std::vector<double> x; // internal coordinates of the best point found
    double f = std::numeric_limits<double>::infinity();
    std::size_t n_evals = 0;
    bool converged = false;
    std::vector<double> trace; // best objective after each outer iteration
};

/// Smooth bijection from the real line onto (lo, hi) on a log scale, so
/// positivity and box bounds hold by construction instead of by clipping.
class BoxTransform {
public:
    BoxTransform(double lo, double hi) : log_lo_(std::log(lo)), log_span_(std::log(hi) - log_lo_) {
        if (!(lo > 0.0) || !(hi > lo))
            throw std::invalid_argument("BoxTransform: requires 0 < lo < hi");
    }

    double to_natural(double u) const { return std::exp(log_lo_ + log_span_ * sigmoid(u)); }

    double to_internal(double x) const {
        double p = (std::log(x) - log_lo_) / log_span_;
        p = std::clamp(p, kEdge, 1.0 - kEdge);
        return std::log(p) - std::log1p(-p);
    }

    static double sigmoid(double u) {
        if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
        const double e = std::exp(u);
        return e / (1.0 + e);
    }

private:
    static constexpr double kEdge = 1e-12;
    double log_lo_;
    double log_span_;
};

namespace detail {

struct BudgetExhausted {};

/// Counts evaluations, tracks the best point seen, and maps likelihood domain
/// errors and NaNs to +inf so optimizers can route around them.
class Objective {
public:
    Objective(std::function<double(std::span<const double>)> fn, std::size_t max_evals)
        : fn_(std::move(fn)), max_evals_(max_evals) {}

    double operator()(std::span<const double> u) {
        if (n_evals_ >= max_evals_) throw BudgetExhausted{};
        ++n_evals_;
        double f;
        try {
            f = fn_(u);
        } catch (const std::domain_error&) {
            f = std::numeric_limits<double>::infinity();
        }
        if (std::isnan(f)) f = std::numeric_limits<double>::infinity();
        if (f < best_f_) {
            best_f_ = f;
            best_x_.assign(u.begin(), u.end());
        }
        return f;
    }

    double best_f() const { return best_f_; }
    const std::vector<double>& best_x() const { return best_x_; }
    std::size_t n_evals() const { return n_evals_; }

private:
    std::function<double(std::span<const double>)> fn_;
    std::size_t max_evals_;
    std::size_t n_evals_ = 0;
    double best_f_ = std::numeric_limits<double>::infinity();
    std::vector<double> best_x_;
};

inline bool nelder_mead(Objective& obj, std::vector<double> x0, const OptOptions& opts,
                        double step, std::vector<double>& trace) {
    const std::size_t k = x0.size();
    std::vector<std::vector<double>> simplex(k + 1, x0);
    for (std::size_t i = 0; i < k; ++i) simplex[i + 1][i] += step;
    std::vector<double> f(k + 1);
    for (std::size_t i = 0; i <= k; ++i) f[i] = obj(simplex[i]);

    std::vector<std::size_t> order(k + 1);
    std::vector<double> centroid(k), xr(k), xe(k), xc(k);

    const std::size_t max_iters = 400 * (k + 1);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        for (std::size_t i = 0; i <= k; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
        const std::size_t best = order[0], worst = order[k], second = order[k - 1];
        trace.push_back(f[best]);

        double diameter = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double lo = simplex[0][i], hi = simplex[0][i];
            for (std::size_t j = 1; j <= k; ++j) {
                lo = std::min(lo, simplex[j][i]);
                hi = std::max(hi, simplex[j][i]);
            }
            diameter = std::max(diameter, hi - lo);
        }
        const double spread = f[worst] - f[best];
        if (spread <= opts.f_tol * (std::abs(f[best]) + 1e-30) && diameter <= opts.x_tol)
            return true;

        for (std::size_t i = 0; i < k; ++i) {
            double c = 0.0;
            for (std::size_t j = 0; j <= k; ++j)
                if (j != worst) c += simplex[j][i];
            centroid[i] = c / static_cast<double>(k);
        }

        for (std::size_t i = 0; i < k; ++i) xr[i] = centroid[i] + (centroid[i] - simplex[worst][i]);
        const double fr = obj(xr);
        if (fr < f[best]) {
            for (std::size_t i = 0; i < k; ++i)
                xe[i] = centroid[i] + 2.0 * (centroid[i] - simplex[worst][i]);
            const double fe = obj(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                f[worst] = fe;
            } else {
                simplex[worst] = xr;
                f[worst] = fr;
            }
            continue;
        }
        if (fr < f[second]) {
            simplex[worst] = xr;
            f[worst] = fr;
            continue;
        }
        const bool outside = fr < f[worst];
        if (outside) {
            for (std::size_t i = 0; i < k; ++i) xc[i] = centroid[i] + 0.5 * (xr[i] - centroid[i]);
        } else {
            for (std::size_t i = 0; i < k; ++i)
                xc[i] = centroid[i] - 0.5 * (centroid[i] - simplex[worst][i]);
        }
        const double fc = obj(xc);
        if (fc < std::min(fr, f[worst])) {
            simplex[worst] = xc;
            f[worst] = fc;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t j = 0; j <= k; ++j) {
            if (j == best) continue;
            for (std::size_t i = 0; i < k; ++i)
                simplex[j][i] = simplex[best][i] + 0.5 * (simplex[j][i] - simplex[best][i]);
            f[j] = obj(simplex[j]);
        }
    }
    return false;
}

// Bracket a minimum along p + x*d starting from x=0 (golden-ratio expansion).
inline void bracket_minimum(const std::function<double(double)>& f1, double& ax, double& bx,
                            double& cx, double& fa, double& fb, double& fc, double scale) {
    constexpr double kGold = 1.618034;
    constexpr double kLimit = 100.0;
    constexpr double kTiny = 1e-20;
    ax = 0.0;
    bx = scale;
    fa = f1(ax);
    fb = f1(bx);
    if (fb > fa) {
        std::swap(ax, bx);
        std::swap(fa, fb);
    }
    cx = bx + kGold * (bx - ax);
    fc = f1(cx);
    while (fb > fc) {
        const double r = (bx - ax) * (fb - fc);
        const double q = (bx - cx) * (fb - fa);
        double denom = 2.0 * (q - r);
        if (std::abs(denom) < kTiny) denom = denom < 0 ? -kTiny : kTiny;
        double u = bx - ((bx - cx) * q - (bx - ax) * r) / denom;
        const double ulim = bx + kLimit * (cx - bx);
        double fu;
        if ((bx - u) * (u - cx) > 0.0) {
            fu = f1(u);
            if (fu < fc) {
                ax = bx;
                bx = u;
                fa = fb;
                fb = fu;
                return;
            }
            if (fu > fb) {
                cx = u;
                fc = fu;
                return;
            }
            u = cx + kGold * (cx - bx);
            fu = f1(u);
        } else if ((cx - u) * (u - ulim) > 0.0) {
            fu = f1(u);
            if (fu < fc) {
                bx = cx;
                cx = u;
                u = cx + kGold * (cx - bx);
                fb = fc;
                fc = fu;
                fu = f1(u);
            }
        } else if ((u - ulim) * (ulim - cx) >= 0.0) {
            u = ulim;
            fu = f1(u);
        } else {
            u = cx + kGold * (cx - bx);
            fu = f1(u);
        }
        ax = bx;
        bx = cx;
        cx = u;
        fa = fb;
        fb = fc;
        fc = fu;
    }
}

inline double brent_line(const std::function<double(double)>& f1, double ax, double bx, double cx,
                         double fb_in, double tol, double& xmin) {
    constexpr double kCGold = 0.3819660;
    constexpr double kZeps = 1e-12;
    double a = std::min(ax, cx), b = std::max(ax, cx);
    double x = bx, w = bx, v = bx;
    double fx = fb_in, fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        const double xm = 0.5 * (a + b);
        const double tol1 = tol * std::abs(x) + kZeps;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool golden = true;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double etemp = e;
            e = d;
            if (!(std::abs(p) >= std::abs(0.5 * q * etemp) || p <= q * (a - x) ||
                  p >= q * (b - x))) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = x >= xm ? a - x : b - x;
            d = kCGold * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + (d >= 0 ? tol1 : -tol1);
        const double fu = f1(u);
        if (fu <= fx) {
            if (u >= x)
                a = x;
            else
                b = x;
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if (u < x)
                a = u;
            else
                b = u;
            if (fu <= fw || w == x) {
                v = w;
                w = u;
                fv = fw;
                fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u;
                fv = fu;
            }
        }
    }
    xmin = x;
    return fx;
}

inline double line_minimize(Objective& obj, std::vector<double>& p, const std::vector<double>& dir,
                            double f_cur, double scale) {
    std::vector<double> probe(p.size());
    const auto f1 = [&](double x) {
        for (std::size_t i = 0; i < p.size(); ++i) probe[i] = p[i] + x * dir[i];
        return obj(probe);
    };
    double ax, bx, cx, fa, fb, fc;
    bracket_minimum(f1, ax, bx, cx, fa, fb, fc, scale);
    double xmin = 0.0;
    const double fmin = brent_line(f1, ax, bx, cx, fb, 1e-8, xmin);
    if (fmin < f_cur) {
        for (std::size_t i = 0; i < p.size(); ++i) p[i] += xmin * dir[i];
        return fmin;
    }
    return f_cur;
}

inline bool powell(Objective& obj, std::vector<double> p, const OptOptions& opts,
                   std::vector<double>& trace) {
    const std::size_t k = p.size();
    std::vector<std::vector<double>> dirs(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) dirs[i][i] = 1.0;

    double fp = obj(p);
    bool fresh_directions = true; // direction replacement can degrade the
                                  // basis; require convergence to hold after
                                  // a reset to the coordinate directions
    const std::size_t max_iters = 500;
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        const double f_start = fp;
        const std::vector<double> p_start = p;
        double biggest_dec = 0.0;
        std::size_t biggest_i = 0;
        for (std::size_t i = 0; i < k; ++i) {
            const double before = fp;
            fp = line_minimize(obj, p, dirs[i], fp, 0.5);
            if (before - fp > biggest_dec) {
                biggest_dec = before - fp;
                biggest_i = i;
            }
        }
        trace.push_back(fp);

        double dx = 0.0;
        for (std::size_t i = 0; i < k; ++i) dx = std::max(dx, std::abs(p[i] - p_start[i]));
        if (2.0 * (f_start - fp) <= opts.f_tol * (std::abs(f_start) + std::abs(fp) + 1e-30) &&
            dx <= opts.x_tol) {
            if (fresh_directions) return true;
            for (auto& row : dirs) std::fill(row.begin(), row.end(), 0.0);
            for (std::size_t i = 0; i < k; ++i) dirs[i][i] = 1.0;
            fresh_directions = true;
            continue;
        }

        // Powell direction update: try the extrapolated point and, when
        // productive, replace the direction of largest decrease.
        std::vector<double> pe(k), xi(k);
        for (std::size_t i = 0; i < k; ++i) {
            pe[i] = 2.0 * p[i] - p_start[i];
            xi[i] = p[i] - p_start[i];
        }
        const double fe = obj(pe);
        if (fe < f_start) {
            const double t = 2.0 * (f_start - 2.0 * fp + fe) *
                                 (f_start - fp - biggest_dec) * (f_start - fp - biggest_dec) -
                             biggest_dec * (f_start - fe) * (f_start - fe);
            if (t < 0.0) {
                fp = line_minimize(obj, p, xi, fp, 1.0);
                dirs[biggest_i] = dirs[k - 1];
                dirs[k - 1] = xi;
                fresh_directions = false;
            }
        }
    }
    return false;
}

inline void differential_evolution(Objective& obj, const std::vector<double>& x0,
                                   const OptOptions& opts, std::vector<double>& trace) {
    const std::size_t k = x0.size();
    const std::size_t pop_size =
        opts.de_population > 0 ? std::max<std::size_t>(opts.de_population, 4)
                               : std::max<std::size_t>(20, 10 * k);
    constexpr double kInitLo = -8.0, kInitHi = 8.0;
    constexpr double kClampLo = -14.0, kClampHi = 14.0;
    constexpr double kF = 0.7, kCR = 0.9;

    Rng rng(path_seed(opts.seed, 0xDEull));
    std::vector<std::vector<double>> pop(pop_size, std::vector<double>(k));
    std::vector<double> f(pop_size);
    pop[0] = x0;
    for (std::size_t i = 1; i < pop_size; ++i)
        for (std::size_t j = 0; j < k; ++j)
            pop[i][j] = kInitLo + (kInitHi - kInitLo) * rng.uniform();
    for (std::size_t i = 0; i < pop_size; ++i) f[i] = obj(pop[i]);

    std::vector<double> trial(k);
    for (std::size_t gen = 0; gen < opts.de_generations; ++gen) {
        for (std::size_t i = 0; i < pop_size; ++i) {
            std::size_t r1, r2, r3;
            do {
                r1 = static_cast<std::size_t>(rng.uniform() * pop_size);
            } while (r1 == i || r1 >= pop_size);
            do {
                r2 = static_cast<std::size_t>(rng.uniform() * pop_size);
            } while (r2 == i || r2 == r1 || r2 >= pop_size);
            do {
                r3 = static_cast<std::size_t>(rng.uniform() * pop_size);
            } while (r3 == i || r3 == r1 || r3 == r2 || r3 >= pop_size);

            const std::size_t jrand = static_cast<std::size_t>(rng.uniform() * k);
            for (std::size_t j = 0; j < k; ++j) {
                if (rng.uniform() < kCR || j == jrand)
                    trial[j] = pop[r1][j] + kF * (pop[r2][j] - pop[r3][j]);
                else
                    trial[j] = pop[i][j];
                trial[j] = std::clamp(trial[j], kClampLo, kClampHi);
            }
            const double ft = obj(trial);
            if (ft <= f[i]) {
                pop[i] = trial;
                f[i] = ft;
            }
        }
        trace.push_back(*std::min_element(f.begin(), f.end()));
    }
}

} // namespace detail

/// Derivative-free minimization over unconstrained internal coordinates.
/// Returns the best point seen even when the evaluation budget runs out.
inline OptResult minimize(std::function<double(std::span<const double>)> fn,
                          std::vector<double> x0, OptMethod method, const OptOptions& opts = {}) {
    if (x0.empty()) throw std::invalid_argument("minimize: empty initial point");
    detail::Objective obj(std::move(fn), opts.max_evals);
    OptResult result;
    bool converged = false;
    try {
        switch (method) {
        case OptMethod::simplex: {
            converged = detail::nelder_mead(obj, x0, opts, 0.5, result.trace);
            if (converged && !obj.best_x().empty())
                converged = detail::nelder_mead(obj, obj.best_x(), opts, 0.05, result.trace);
            break;
        }
        case OptMethod::powell:
            converged = detail::powell(obj, x0, opts, result.trace);
            break;
        case OptMethod::global_then_local: {
            detail::differential_evolution(obj, x0, opts, result.trace);
            std::vector<double> start = obj.best_x().empty() ? x0 : obj.best_x();
            converged = detail::powell(obj, start, opts, result.trace);
            break;
        }
        }
    } catch (const detail::BudgetExhausted&) {
        converged = false;
    }
    result.x = obj.best_x().empty() ? x0 : obj.best_x();
    result.f = obj.best_f();
    result.n_evals = obj.n_evals();
    result.converged = converged;
    return result;
}

} // namespace hawkes
