#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hawkes/event_series.hpp"
#include "hawkes/model.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/rng.hpp"

namespace hawkes {

enum class SimMethod { thinning, cluster };

struct SimConfig {
    double end_time = 0.0;    // T, seconds
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    SimMethod method = SimMethod::thinning;

    void validate() const {
        if (!(end_time > 0.0)) throw std::invalid_argument("SimConfig: end_time must be > 0");
        if (n_paths < 1) throw std::invalid_argument("SimConfig: n_paths must be >= 1");
    }
};

struct SimPath {
    std::vector<EventSeries> nodes;
    std::uint64_t tie_nudges = 0; // full-precision time collisions resolved
};

struct PathSet {
    std::vector<SimPath> paths;
    SimConfig config;
    std::size_t dim = 1;
};

/// Aggregate genealogy diagnostics from the cluster simulator. Spawn counts
/// include offspring that fell beyond the end time and were discarded.
struct ClusterTrace {
    Matrix spawned;                      // [m][n]: children of type m from parents of type n
    std::vector<std::uint64_t> parents;  // events of type n that were expanded
    Matrix min_delay;                    // smallest parent-to-child delay seen per pair

    explicit ClusterTrace(std::size_t m = 0) { reset(m); }

    void reset(std::size_t m) {
        spawned.assign(m, std::vector<double>(m, 0.0));
        parents.assign(m, 0);
        min_delay.assign(m, std::vector<double>(m, std::numeric_limits<double>::infinity()));
    }

    void merge(const ClusterTrace& other) {
        for (std::size_t i = 0; i < spawned.size(); ++i) {
            parents[i] += other.parents[i];
            for (std::size_t j = 0; j < spawned.size(); ++j) {
                spawned[i][j] += other.spawned[i][j];
                min_delay[i][j] = std::min(min_delay[i][j], other.min_delay[i][j]);
            }
        }
    }
};

namespace detail {

// Colliding times are nudged to the next representable double so every
// series stays strictly increasing; nudged past T they are dropped.
inline std::uint64_t sort_and_nudge(std::vector<double>& times, double end_time) {
    std::sort(times.begin(), times.end());
    std::uint64_t nudges = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            times[i] = std::nextafter(times[i - 1], std::numeric_limits<double>::infinity());
            ++nudges;
        }
    }
    while (!times.empty() && times.back() > end_time) times.pop_back();
    return nudges;
}

struct Activation {
    double time;
    std::uint32_t target;
    std::uint32_t source;
};
struct ActivationLater {
    bool operator()(const Activation& a, const Activation& b) const { return a.time > b.time; }
};

inline SimPath thinning_path(const ModelMD& model, double end_time, Rng& rng) {
    const std::size_t m_dim = model.dim();
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> alpha_flat(m_dim * m_dim), beta_flat(m_dim * m_dim);
    for (std::size_t i = 0; i < m_dim; ++i)
        for (std::size_t j = 0; j < m_dim; ++j) {
            alpha_flat[i * m_dim + j] = model.alpha[i][j];
            beta_flat[i * m_dim + j] = model.beta[i][j];
        }

    double lam0_sum = 0.0;
    for (double v : model.lambda0) lam0_sum += v;

    // g holds the right-limit excitation at cur_t for each (target, source)
    // pair. Intensity jumps only at scheduled activation times t_event + tau,
    // so between activations the current value bounds the future intensity.
    std::vector<double> g(m_dim * m_dim, 0.0);
    std::priority_queue<Activation, std::vector<Activation>, ActivationLater> pending;
    std::vector<std::vector<double>> out(m_dim);
    std::vector<double> lam_node(m_dim, 0.0);

    double cur_t = 0.0;
    const auto decay_to = [&](double new_t) {
        const double dt = new_t - cur_t;
        if (dt > 0.0) {
            for (std::size_t k = 0; k < g.size(); ++k)
                if (g[k] != 0.0) g[k] *= std::exp(-beta_flat[k] * dt);
        }
        cur_t = new_t;
    };

    while (true) {
        while (!pending.empty() && pending.top().time <= cur_t) {
            const Activation a = pending.top();
            pending.pop();
            g[a.target * m_dim + a.source] += alpha_flat[a.target * m_dim + a.source];
        }

        double lam_bar = lam0_sum;
        for (double v : g) lam_bar += v;
        const double next_act = pending.empty() ? inf : pending.top().time;

        const double cand = cur_t + rng.exponential(lam_bar);
        if (cand >= next_act || cand > end_time) {
            if (next_act <= end_time && next_act <= cand) {
                decay_to(next_act);
                continue;
            }
            break;
        }

        decay_to(cand);
        double lam_total = 0.0;
        for (std::size_t i = 0; i < m_dim; ++i) {
            double lam = model.lambda0[i];
            for (std::size_t j = 0; j < m_dim; ++j) lam += g[i * m_dim + j];
            lam_node[i] = lam;
            lam_total += lam;
        }

        if (rng.uniform() * lam_bar < lam_total) {
            std::size_t node = 0;
            if (m_dim > 1) {
                const double pick = rng.uniform() * lam_total;
                double cum = 0.0;
                for (std::size_t i = 0; i < m_dim; ++i) {
                    cum += lam_node[i];
                    if (pick < cum || i + 1 == m_dim) {
                        node = i;
                        break;
                    }
                }
            }
            out[node].push_back(cur_t);
            for (std::size_t i = 0; i < m_dim; ++i)
                pending.push({cur_t + model.tau[i][node], static_cast<std::uint32_t>(i),
                              static_cast<std::uint32_t>(node)});
        }
    }

    SimPath path;
    path.nodes.reserve(m_dim);
    for (auto& times : out) {
        path.tie_nudges += sort_and_nudge(times, end_time);
        path.nodes.emplace_back(std::move(times));
    }
    return path;
}

inline SimPath cluster_path(const ModelMD& model, double end_time, Rng& rng,
                            ClusterTrace* trace) {
    const std::size_t m_dim = model.dim();
    std::vector<std::pair<double, std::uint32_t>> queue; // (time, node)

    for (std::size_t n = 0; n < m_dim; ++n) {
        double t = 0.0;
        while (true) {
            t += rng.exponential(model.lambda0[n]);
            if (!(t <= end_time)) break;
            queue.emplace_back(t, static_cast<std::uint32_t>(n));
        }
    }

    // Each event of type n independently spawns, per target type m, a Poisson
    // process with mean alpha/beta; children are delayed by tau plus the
    // inverse of the exponentially decaying cumulative intensity.
    std::size_t idx = 0;
    while (idx < queue.size()) {
        const auto [t, n] = queue[idx++];
        if (trace) ++trace->parents[n];
        for (std::size_t m = 0; m < m_dim; ++m) {
            const double mass = model.alpha[m][n] / model.beta[m][n];
            if (!(mass > 0.0)) continue;
            double u = 0.0;
            while ((u += rng.exponential(1.0)) < mass) {
                const double delay =
                    model.tau[m][n] - std::log1p(-u / mass) / model.beta[m][n];
                if (trace) {
                    trace->spawned[m][n] += 1.0;
                    trace->min_delay[m][n] = std::min(trace->min_delay[m][n], delay);
                }
                const double child = t + delay;
                if (child <= end_time)
                    queue.emplace_back(child, static_cast<std::uint32_t>(m));
            }
        }
    }

    std::vector<std::vector<double>> out(m_dim);
    for (const auto& [t, n] : queue) out[n].push_back(t);

    SimPath path;
    path.nodes.reserve(m_dim);
    for (auto& times : out) {
        path.tie_nudges += sort_and_nudge(times, end_time);
        path.nodes.emplace_back(std::move(times));
    }
    return path;
}

inline void require_simulable(const ModelMD& model, const SimConfig& config) {
    config.validate();
    const auto st = stationarity_check(model);
    if (!st.stable)
        throw std::invalid_argument(
            "simulate: model is not stationary (branching spectral radius " +
            std::to_string(st.spectral_radius) + " >= 1); the process would be runaway");
}

} // namespace detail

inline ModelMD to_md(const Model1D& model) {
    model.validate();
    return ModelMD({model.lambda0}, {{model.alpha}}, {{model.beta}}, model.tau);
}

inline PathSet simulate_thinning(const ModelMD& model, const SimConfig& config) {
    detail::require_simulable(model, config);
    PathSet set;
    set.config = config;
    set.config.method = SimMethod::thinning;
    set.dim = model.dim();
    set.paths.resize(config.n_paths);
    parallel_for(config.n_paths, [&](std::size_t p) {
        Rng rng(path_seed(config.seed, p));
        set.paths[p] = detail::thinning_path(model, config.end_time, rng);
    });
    return set;
}

inline PathSet simulate_cluster(const ModelMD& model, const SimConfig& config,
                                ClusterTrace* trace = nullptr) {
    detail::require_simulable(model, config);
    PathSet set;
    set.config = config;
    set.config.method = SimMethod::cluster;
    set.dim = model.dim();
    set.paths.resize(config.n_paths);
    std::vector<ClusterTrace> local;
    if (trace) {
        trace->reset(model.dim());
        local.assign(config.n_paths, ClusterTrace(model.dim()));
    }
    parallel_for(config.n_paths, [&](std::size_t p) {
        Rng rng(path_seed(config.seed, p));
        set.paths[p] =
            detail::cluster_path(model, config.end_time, rng, trace ? &local[p] : nullptr);
    });
    if (trace)
        for (const auto& t : local) trace->merge(t);
    return set;
}

inline PathSet simulate_thinning(const Model1D& model, const SimConfig& config) {
    return simulate_thinning(to_md(model), config);
}

inline PathSet simulate_cluster(const Model1D& model, const SimConfig& config,
                                ClusterTrace* trace = nullptr) {
    return simulate_cluster(to_md(model), config, trace);
}

template <typename ModelT>
PathSet simulate(const ModelT& model, const SimConfig& config) {
    return config.method == SimMethod::cluster ? simulate_cluster(model, config)
                                               : simulate_thinning(model, config);
}

/// Events per second at one node, pooled across paths.
inline double empirical_rate(const PathSet& set, std::size_t node = 0) {
    if (set.paths.empty()) throw std::invalid_argument("empirical_rate: empty path set");
    if (node >= set.dim) throw std::out_of_range("empirical_rate: node index out of range");
    std::size_t count = 0;
    for (const auto& path : set.paths) count += path.nodes[node].size();
    return static_cast<double>(count) /
           (static_cast<double>(set.paths.size()) * set.config.end_time);
}

} // namespace hawkes
