// Command-line frontend: simulate paths, fit models, compute interval
// statistics and exogeneity ratios, and export kernel curves as CSV.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation failure.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hawkes/hawkes.hpp"

namespace fs = std::filesystem;
using namespace hawkes;

namespace {

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return io::format_double(v); }

std::string pad3(std::size_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03zu", v);
    return buf;
}

Matrix matrix_from_flat(const std::vector<double>& flat, std::size_t dim, const std::string& name) {
    if (flat.size() != dim * dim)
        throw ValidationError(name + " needs dim*dim = " + std::to_string(dim * dim) +
                              " comma-separated values, got " + std::to_string(flat.size()));
    Matrix m(dim, std::vector<double>(dim));
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j) m[i][j] = flat[i * dim + j];
    return m;
}

std::string join_names(const std::vector<std::string>& names, char sep) {
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += sep;
        out += names[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// shared model flags (simulate and curves)

struct ModelFlags {
    std::string model_file;
    std::size_t dim = 1;
    std::vector<double> lambda0, alpha, beta, tau;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", model_file, "Model file (key=value; see fit output)");
        cmd->add_option("--dim", dim, "Number of event types M (default 1)");
        cmd->add_option("--lambda0", lambda0, "Baseline rates, M comma-separated values")
            ->delimiter(',');
        cmd->add_option("--alpha", alpha, "Kernel jumps, M*M row-major values")->delimiter(',');
        cmd->add_option("--beta", beta, "Kernel decays, M*M row-major values")->delimiter(',');
        cmd->add_option("--tau", tau, "Latency: one value or M*M row-major values")
            ->delimiter(',');
    }

    ModelMD build() const {
        if (!model_file.empty()) {
            if (!lambda0.empty() || !alpha.empty() || !beta.empty() || !tau.empty())
                throw ValidationError("--model cannot be combined with explicit parameter flags");
            return io::read_model(model_file);
        }
        if (lambda0.empty() || alpha.empty() || beta.empty())
            throw ValidationError("either --model or all of --lambda0/--alpha/--beta are required");
        if (lambda0.size() != dim)
            throw ValidationError("--lambda0 needs exactly dim values");
        Matrix a = matrix_from_flat(alpha, dim, "--alpha");
        Matrix b = matrix_from_flat(beta, dim, "--beta");
        if (tau.empty()) return ModelMD(lambda0, std::move(a), std::move(b), 0.0);
        if (tau.size() == 1) return ModelMD(lambda0, std::move(a), std::move(b), tau[0]);
        return ModelMD(lambda0, std::move(a), std::move(b), matrix_from_flat(tau, dim, "--tau"));
    }
};

// ---------------------------------------------------------------------------
// simulate

struct SimulateCmd {
    std::string config_file;
    ModelFlags model;
    double end_time = 0.0;
    std::size_t n_paths = 1;
    std::uint64_t seed = 0;
    std::string method = "thinning";
    std::string format = "plain";
    std::string out_dir;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("simulate", "Sample event paths from a model");
        cmd->add_option("--config", config_file, "Read options from a flat key=value file");
        model.attach(cmd);
        cmd->add_option("--end-time", end_time, "Horizon T in seconds")->required();
        cmd->add_option("--paths", n_paths, "Number of independent paths (default 1)");
        cmd->add_option("--seed", seed, "Master seed; path streams derive from it");
        cmd->add_option("--method", method, "thinning | cluster (default thinning)");
        cmd->add_option("--format", format, "plain | long (default plain)");
        cmd->add_option("--out", out_dir, "Output directory")->required();
        cmd->footer("Outputs: plain format writes path<p>_node<n>.txt (one timestamp per line);"
                    "\nlong format writes path<p>.csv ('series,t' rows); plus manifest.txt.");
        cmd->callback([this] { run(); });
    }

    void run() const {
        const ModelMD m = model.build();
        if (method != "thinning" && method != "cluster")
            throw ValidationError("--method must be thinning or cluster");
        if (format != "plain" && format != "long")
            throw ValidationError("--format must be plain or long");
        if (!(end_time > 0.0)) throw ValidationError("--end-time must be positive");
        if (n_paths < 1) throw ValidationError("--paths must be at least 1");
        const auto st = stationarity_check(m);
        if (!st.stable)
            throw ValidationError("model is not stationary: branching spectral radius " +
                                  fmt(st.spectral_radius) + " >= 1");
        fs::create_directories(out_dir);

        const auto t0 = std::chrono::steady_clock::now();
        SimConfig config{end_time, n_paths, seed,
                         method == "cluster" ? SimMethod::cluster : SimMethod::thinning};
        const PathSet set = simulate(m, config);

        std::vector<std::pair<std::string, std::string>> manifest = {
            {"command", "simulate"},
            {"dim", std::to_string(m.dim())},
            {"model", io::join_doubles(theta::pack(m))},
            {"tau", m.uniform_tau() ? fmt(m.tau[0][0]) : [&] {
                 std::vector<double> flat;
                 for (const auto& row : m.tau) flat.insert(flat.end(), row.begin(), row.end());
                 return io::join_doubles(flat);
             }()},
            {"end_time", fmt(end_time)},
            {"paths", std::to_string(n_paths)},
            {"seed", std::to_string(seed)},
            {"method", method},
            {"format", format},
        };

        std::vector<std::string> files;
        for (std::size_t p = 0; p < set.paths.size(); ++p) {
            if (format == "plain") {
                for (std::size_t n = 0; n < set.dim; ++n) {
                    const std::string name = "path" + pad3(p) + "_node" + std::to_string(n) + ".txt";
                    io::write_timestamps_plain(fs::path(out_dir) / name, set.paths[p].nodes[n]);
                    files.push_back(name);
                }
            } else {
                const std::string name = "path" + pad3(p) + ".csv";
                io::write_timestamps_long(fs::path(out_dir) / name, set.paths[p].nodes);
                files.push_back(name);
            }
            for (std::size_t n = 0; n < set.dim; ++n)
                manifest.emplace_back("count_path" + std::to_string(p) + "_node" + std::to_string(n),
                                      std::to_string(set.paths[p].nodes[n].size()));
            if (set.paths[p].tie_nudges)
                manifest.emplace_back("tie_nudges_path" + std::to_string(p),
                                      std::to_string(set.paths[p].tie_nudges));
        }
        manifest.emplace_back("files", join_names(files, ';'));
        manifest.emplace_back(
            "runtime_s",
            fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
        io::write_manifest(fs::path(out_dir) / "manifest.txt", manifest);
    }
};

// ---------------------------------------------------------------------------
// shared input handling (fit and stats)

struct InputFlags {
    std::vector<std::string> inputs;
    std::string format = "plain";
    double session_start = -1.0, session_end = -1.0;
    bool rebase = false;
    double dedup_eps = 0.0;
    bool dedup = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--input", inputs, "Input timestamp files (one path each)")
            ->required()
            ->expected(-1);
        cmd->add_option("--format", format, "plain | long (default plain)");
        cmd->add_option("--session-start", session_start, "Session start, seconds of day");
        cmd->add_option("--session-end", session_end, "Session end, seconds of day");
        cmd->add_flag("--rebase", rebase, "Shift filtered sessions to start at 0");
        cmd->add_flag("--dedup", dedup, "Jitter duplicate timestamps instead of rejecting");
        cmd->add_option("--dedup-eps", dedup_eps,
                        "Jitter step for --dedup in seconds (default 1e-9)");
    }

    // one entry per input file; each entry is the M series of one path
    std::vector<std::vector<EventSeries>> load(std::size_t& dedup_count) const {
        if (format != "plain" && format != "long")
            throw ValidationError("--format must be plain or long");
        const bool has_window = session_start >= 0.0 || session_end >= 0.0;
        SessionWindow window;
        if (has_window) {
            window.start = session_start >= 0.0 ? session_start : 0.0;
            window.end = session_end >= 0.0 ? session_end : 86400.0;
            window.validate();
        }
        io::ReadOptions options;
        if (dedup) options.dedup_jitter_eps = dedup_eps > 0.0 ? dedup_eps : 1e-9;

        std::vector<std::vector<EventSeries>> paths;
        for (const auto& file : inputs) {
            std::vector<EventSeries> series;
            if (format == "plain") {
                std::size_t d = 0;
                series.push_back(io::read_timestamps_plain(file, options, &d));
                dedup_count += d;
            } else {
                auto result = io::read_timestamps_long(file, options);
                dedup_count += result.dedup_count;
                series = std::move(result.series);
            }
            if (has_window)
                for (auto& s : series) s = filter_session(s, window, rebase);
            if (!paths.empty() && series.size() != paths.front().size())
                throw ValidationError("input files disagree on the number of series");
            paths.push_back(std::move(series));
        }
        return paths;
    }
};

// ---------------------------------------------------------------------------
// fit

struct FitCmd {
    std::string config_file;
    InputFlags input;
    double latency = 0.0;
    std::vector<double> tau_matrix;
    std::string mode = "1d";
    std::size_t node = 0;
    std::string tying_file;
    std::string method = "powell";
    std::uint64_t seed = 0;
    std::size_t max_evals = 100000;
    double horizon = -1.0;
    bool pooled = false;
    std::vector<double> init;
    double lambda0_max = 1e3, alpha_max = 1e6, beta_max = 1e6, lower = 1e-10;
    std::string out_dir;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("fit", "Maximum-likelihood fit of input paths");
        cmd->add_option("--config", config_file, "Read options from a flat key=value file");
        input.attach(cmd);
        cmd->add_option("--latency", latency, "Kernel latency tau in seconds (default 0)");
        cmd->add_option("--tau-matrix", tau_matrix, "Per-pair latencies, M*M row-major values")
            ->delimiter(',');
        cmd->add_option("--mode", mode, "1d | node | joint (default 1d)");
        cmd->add_option("--node", node, "Target node for --mode node (0-based)");
        cmd->add_option("--tying", tying_file, "Tie-spec file for --mode joint");
        cmd->add_option("--method", method, "simplex | powell | global (default powell)");
        cmd->add_option("--seed", seed, "Seed for the global optimizer stage");
        cmd->add_option("--max-evals", max_evals, "Objective evaluation budget (default 1e5)");
        cmd->add_option("--horizon", horizon, "Observation horizon override in seconds");
        cmd->add_flag("--pooled", pooled, "Minimize the pooled likelihood across paths");
        cmd->add_option("--init", init, "Initial parameters (entry-point layout)")->delimiter(',');
        cmd->add_option("--lower", lower, "Lower bound for all parameters (default 1e-10)");
        cmd->add_option("--lambda0-max", lambda0_max, "Upper bound for lambda0 (default 1e3)");
        cmd->add_option("--alpha-max", alpha_max, "Upper bound for alpha (default 1e6)");
        cmd->add_option("--beta-max", beta_max, "Upper bound for beta (default 1e6)");
        cmd->add_option("--out", out_dir, "Output directory")->required();
        cmd->footer("Outputs: fits.csv (path,node,converged,n_evals,neg_ll,<params...>,"
                    "bound_hits,error),\nsummary.csv (param,mean,median,sd), model files "
                    "(modes 1d/joint), manifest.txt.");
        cmd->callback([this] { run(); });
    }

    FitOptions make_options() const {
        FitOptions opts;
        opts.bounds.lambda0_lo = opts.bounds.alpha_lo = opts.bounds.beta_lo = lower;
        opts.bounds.lambda0_hi = lambda0_max;
        opts.bounds.alpha_hi = alpha_max;
        opts.bounds.beta_hi = beta_max;
        opts.bounds.validate();
        if (method == "simplex")
            opts.method = OptMethod::simplex;
        else if (method == "powell")
            opts.method = OptMethod::powell;
        else if (method == "global")
            opts.method = OptMethod::global_then_local;
        else
            throw ValidationError("--method must be simplex, powell or global");
        opts.opt.max_evals = max_evals;
        opts.opt.seed = seed;
        if (!init.empty()) opts.init = init;
        if (horizon > 0.0) opts.horizon = horizon;
        return opts;
    }

    void run() const {
        if (mode != "1d" && mode != "node" && mode != "joint")
            throw ValidationError("--mode must be 1d, node or joint");
        if (pooled && mode == "node")
            throw ValidationError("--pooled supports modes 1d and joint only");
        if (pooled && !tying_file.empty())
            throw ValidationError("--pooled cannot be combined with --tying");
        const FitOptions opts = make_options();

        std::size_t dedup_count = 0;
        const auto paths = input.load(dedup_count);
        const std::size_t dim = paths.front().size();
        if (mode == "1d" && dim != 1)
            throw ValidationError("--mode 1d requires univariate inputs (one series per path)");
        if (mode == "node" && node >= dim) throw ValidationError("--node out of range");

        Matrix tau(dim, std::vector<double>(dim, latency));
        if (!tau_matrix.empty()) tau = matrix_from_flat(tau_matrix, dim, "--tau-matrix");

        TyingScheme tying = TyingScheme::identity(dim);
        if (!tying_file.empty()) {
            if (mode != "joint") throw ValidationError("--tying requires --mode joint");
            tying = parse_tying_file(tying_file, dim);
        }
        fs::create_directories(out_dir);

        const auto t0 = std::chrono::steady_clock::now();
        std::vector<FitResult> fits;
        if (pooled) {
            PathSet set;
            set.dim = dim;
            set.config.end_time = horizon > 0.0 ? horizon : 1.0;
            for (const auto& p : paths) set.paths.push_back(SimPath{p, 0});
            fits = fit_multipath(set, tau, opts, MultipathMode::pooled).fits;
        } else {
            fits.resize(paths.size());
            parallel_for(paths.size(), [&](std::size_t p) {
                FitOptions path_opts = opts;
                path_opts.opt.seed = path_seed(seed, p);
                try {
                    if (mode == "1d")
                        fits[p] = fit_1d(paths[p][0], tau[0][0], path_opts);
                    else if (mode == "node")
                        fits[p] = fit_node_md(paths[p], tau, node, path_opts);
                    else
                        fits[p] = fit_joint_md(paths[p], tau, tying, path_opts);
                } catch (const std::exception& e) {
                    fits[p].converged = false;
                    fits[p].error = e.what();
                }
            });
        }
        write_outputs(fits, dim, tau, dedup_count, t0);
    }

    void write_outputs(const std::vector<FitResult>& fits, std::size_t dim, const Matrix& tau,
                       std::size_t dedup_count,
                       std::chrono::steady_clock::time_point t0) const {
        const std::vector<std::string>* names = nullptr;
        for (const auto& f : fits)
            if (!f.names.empty()) {
                names = &f.names;
                break;
            }
        if (!names) throw std::runtime_error("all fits failed; no parameter layout to report");

        // fits.csv: one row per path (or the single pooled row)
        std::string csv = "path,node,converged,n_evals,neg_ll," + join_names(*names, ',') +
                          ",bound_hits,error\n";
        const std::string node_label = mode == "node" ? std::to_string(node)
                                       : mode == "joint" ? "joint"
                                                         : "0";
        for (std::size_t p = 0; p < fits.size(); ++p) {
            const auto& f = fits[p];
            csv += (pooled ? std::string("pooled") : std::to_string(p)) + "," + node_label + "," +
                   (f.converged ? "1" : "0") + "," + std::to_string(f.n_evals) + "," +
                   (f.estimates.empty() ? "" : fmt(f.neg_ll)) + ",";
            if (f.estimates.empty()) {
                csv += std::string(names->size() > 1 ? names->size() - 1 : 0, ',');
            } else {
                for (std::size_t i = 0; i < f.estimates.size(); ++i) {
                    if (i) csv += ',';
                    csv += fmt(f.estimates[i]);
                }
            }
            csv += "," + join_names(f.bound_hits, ';') + "," + f.error + "\n";
        }
        io::write_file_atomic(fs::path(out_dir) / "fits.csv", csv);

        // summary.csv: mean / median / sd per parameter over converged fits
        std::vector<const FitResult*> ok;
        for (const auto& f : fits)
            if (f.converged) ok.push_back(&f);
        if (ok.empty()) // keep best-effort estimates usable downstream
            for (const auto& f : fits)
                if (f.error.empty() && !f.estimates.empty()) ok.push_back(&f);
        std::string summary = "param,mean,median,sd\n";
        if (!ok.empty()) {
            const std::size_t k = (*names).size();
            for (std::size_t i = 0; i <= k; ++i) { // last row: neg_ll
                std::vector<double> column;
                for (const auto* f : ok)
                    column.push_back(i < k ? f->estimates[i] : f->neg_ll);
                double mean = 0.0;
                for (double v : column) mean += v;
                mean /= static_cast<double>(column.size());
                double var = 0.0;
                for (double v : column) var += (v - mean) * (v - mean);
                const double sd = column.size() > 1
                                      ? std::sqrt(var / static_cast<double>(column.size() - 1))
                                      : 0.0;
                std::sort(column.begin(), column.end());
                const double median = column[column.size() / 2];
                summary += (i < k ? (*names)[i] : std::string("neg_ll")) + "," + fmt(mean) + "," +
                           fmt(median) + "," + fmt(sd) + "\n";
            }
        }
        io::write_file_atomic(fs::path(out_dir) / "summary.csv", summary);

        // model files for full-parameter modes
        if (mode == "1d" || mode == "joint") {
            const auto to_model = [&](const FitResult& f) {
                return mode == "1d" ? ModelMD({f.estimates[0]}, {{f.estimates[1]}},
                                              {{f.estimates[2]}}, tau[0][0])
                                    : f.as_model_md(dim, tau);
            };
            for (std::size_t p = 0; p < fits.size(); ++p)
                if (fits[p].error.empty() && !fits[p].estimates.empty())
                    io::write_model(fs::path(out_dir) /
                                        (pooled ? std::string("model_pooled.txt")
                                                : "model_p" + pad3(p) + ".txt"),
                                    to_model(fits[p]));
            if (!ok.empty()) {
                std::vector<double> mean((*names).size(), 0.0);
                for (const auto* f : ok)
                    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += f->estimates[i];
                for (auto& v : mean) v /= static_cast<double>(ok.size());
                FitResult mean_fit;
                mean_fit.estimates = mean;
                io::write_model(fs::path(out_dir) / "model_mean.txt",
                                mode == "1d" ? ModelMD({mean[0]}, {{mean[1]}}, {{mean[2]}},
                                                       tau[0][0])
                                             : mean_fit.as_model_md(dim, tau));
            }
        }

        std::vector<std::pair<std::string, std::string>> manifest = {
            {"command", "fit"},
            {"inputs", join_names(input.inputs, ';')},
            {"format", input.format},
            {"mode", mode},
            {"method", method},
            {"dim", std::to_string(dim)},
            {"latency", fmt(latency)},
            {"seed", std::to_string(seed)},
            {"max_evals", std::to_string(max_evals)},
            {"pooled", pooled ? "1" : "0"},
        };
        if (!tau_matrix.empty()) manifest.emplace_back("tau_matrix", io::join_doubles(tau_matrix));
        if (!tying_file.empty()) manifest.emplace_back("tying", tying_file);
        if (horizon > 0.0) manifest.emplace_back("horizon", fmt(horizon));
        if (input.session_start >= 0.0 || input.session_end >= 0.0) {
            manifest.emplace_back("session_start", fmt(input.session_start));
            manifest.emplace_back("session_end", fmt(input.session_end));
            manifest.emplace_back("rebase", input.rebase ? "1" : "0");
        }
        if (dedup_count) manifest.emplace_back("dedup_count", std::to_string(dedup_count));
        std::size_t failures = 0, unconverged = 0;
        for (const auto& f : fits) {
            if (!f.error.empty()) ++failures;
            if (!f.converged) ++unconverged;
        }
        manifest.emplace_back("fits", std::to_string(fits.size()));
        manifest.emplace_back("failed", std::to_string(failures));
        manifest.emplace_back("unconverged", std::to_string(unconverged));
        for (std::size_t p = 0; p < fits.size(); ++p)
            manifest.emplace_back("runtime_s_fit" + std::to_string(p), fmt(fits[p].runtime_s));
        manifest.emplace_back(
            "runtime_s",
            fmt(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()));
        io::write_manifest(fs::path(out_dir) / "manifest.txt", manifest);

        if (failures == fits.size())
            throw std::runtime_error("all " + std::to_string(fits.size()) + " fits failed");
    }
};

// ---------------------------------------------------------------------------
// stats

struct StatsCmd {
    std::string config_file;
    InputFlags input;
    double latency = 0.0;
    std::vector<double> lambda0;
    double session_seconds = 0.0;
    std::string out_dir;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("stats", "Inter-event statistics and exogeneity ratios");
        cmd->add_option("--config", config_file, "Read options from a flat key=value file");
        input.attach(cmd);
        cmd->add_option("--latency", latency, "Latency threshold for the below-latency fraction");
        cmd->add_option("--lambda0", lambda0,
                        "Baseline rates (one per series) to compute exogeneity ratios")
            ->delimiter(',');
        cmd->add_option("--session-seconds", session_seconds,
                        "Session length used for the exogeneity denominator");
        cmd->add_option("--out", out_dir, "Output directory")->required();
        cmd->footer("Outputs: stats.csv (path,series,n_events,q10,q15,q25,q50,q75,q90,mean_dt,"
                    "\nbelow_latency_fraction,fat_tailed[,lambda0,exogeneity_ratio]), manifest.txt.");
        cmd->callback([this] { run(); });
    }

    void run() const {
        const bool ratios = !lambda0.empty();
        if (ratios && !(session_seconds > 0.0))
            throw ValidationError("--lambda0 requires --session-seconds");
        std::size_t dedup_count = 0;
        const auto paths = input.load(dedup_count);
        fs::create_directories(out_dir);

        std::string csv = "path,series,n_events,q10,q15,q25,q50,q75,q90,mean_dt,"
                          "below_latency_fraction,fat_tailed";
        if (ratios) csv += ",lambda0,exogeneity_ratio";
        csv += "\n";
        for (std::size_t p = 0; p < paths.size(); ++p) {
            if (ratios && lambda0.size() != paths[p].size())
                throw ValidationError("--lambda0 needs one value per series");
            for (std::size_t n = 0; n < paths[p].size(); ++n) {
                const auto s = interval_stats(paths[p][n], latency);
                csv += std::to_string(p) + "," + std::to_string(n) + "," +
                       std::to_string(s.n_events) + "," + fmt(s.q10) + "," + fmt(s.q15) + "," +
                       fmt(s.q25) + "," + fmt(s.q50) + "," + fmt(s.q75) + "," + fmt(s.q90) + "," +
                       fmt(s.mean_dt) + "," + fmt(s.below_latency_fraction) + "," +
                       (s.fat_tailed ? "1" : "0");
                if (ratios)
                    csv += "," + fmt(lambda0[n]) + "," +
                           fmt(exogeneity_ratio(lambda0[n], paths[p][n].size(), session_seconds));
                csv += "\n";
            }
        }
        io::write_file_atomic(fs::path(out_dir) / "stats.csv", csv);

        std::vector<std::pair<std::string, std::string>> manifest = {
            {"command", "stats"},
            {"inputs", join_names(input.inputs, ';')},
            {"format", input.format},
            {"latency", fmt(latency)},
        };
        if (ratios) {
            manifest.emplace_back("lambda0", io::join_doubles(lambda0));
            manifest.emplace_back("session_seconds", fmt(session_seconds));
        }
        if (dedup_count) manifest.emplace_back("dedup_count", std::to_string(dedup_count));
        io::write_manifest(fs::path(out_dir) / "manifest.txt", manifest);
    }
};

// ---------------------------------------------------------------------------
// curves

struct CurvesCmd {
    std::string config_file;
    ModelFlags model;
    std::size_t points = 200;
    double horizon = 0.0;
    std::string units = "seconds";
    std::string out_dir;

    void attach(CLI::App& app) {
        auto* cmd = app.add_subcommand("curves", "Export sampled kernel curves per (m,n) pair");
        cmd->add_option("--config", config_file, "Read options from a flat key=value file");
        model.attach(cmd);
        cmd->add_option("--points", points, "Samples per curve (default 200)");
        cmd->add_option("--horizon", horizon, "Curve horizon in seconds")->required();
        cmd->add_option("--units", units, "seconds | latency (default seconds)");
        cmd->add_option("--out", out_dir, "Output directory")->required();
        cmd->footer("Outputs: curve_m<target>_n<source>.csv per pair ('t,phi' or "
                    "'t_over_tau,phi'), manifest.txt.");
        cmd->callback([this] { run(); });
    }

    void run() const {
        const ModelMD m = model.build();
        if (units != "seconds" && units != "latency")
            throw ValidationError("--units must be seconds or latency");
        const CurveUnits cu = units == "latency" ? CurveUnits::latency_units : CurveUnits::seconds;
        // surface bad combinations (tau = 0 with latency units, horizon <= tau)
        // before any file is written
        for (std::size_t i = 0; i < m.dim(); ++i)
            for (std::size_t j = 0; j < m.dim(); ++j) {
                try {
                    kernel_curve(m, i, j, 2, horizon, cu);
                } catch (const std::exception& e) {
                    throw ValidationError("curve (" + std::to_string(i) + "," + std::to_string(j) +
                                          "): " + e.what());
                }
            }
        fs::create_directories(out_dir);

        std::vector<std::string> files;
        for (std::size_t i = 0; i < m.dim(); ++i)
            for (std::size_t j = 0; j < m.dim(); ++j) {
                const auto curve = kernel_curve(m, i, j, points, horizon, cu);
                std::string csv = cu == CurveUnits::latency_units ? "t_over_tau,phi\n" : "t,phi\n";
                for (std::size_t k = 0; k < curve.abscissa.size(); ++k)
                    csv += fmt(curve.abscissa[k]) + "," + fmt(curve.ordinate[k]) + "\n";
                const std::string name =
                    "curve_m" + std::to_string(i) + "_n" + std::to_string(j) + ".csv";
                io::write_file_atomic(fs::path(out_dir) / name, csv);
                files.push_back(name);
            }

        io::write_manifest(fs::path(out_dir) / "manifest.txt",
                           {{"command", "curves"},
                            {"dim", std::to_string(m.dim())},
                            {"model", io::join_doubles(theta::pack(m))},
                            {"points", std::to_string(points)},
                            {"horizon", fmt(horizon)},
                            {"units", units},
                            {"files", join_names(files, ';')}});
    }
};

// Flat key=value config support: tokens derived from the file are injected
// right after the subcommand name, and only for options the user did not pass
// explicitly, so command-line flags always win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    std::ifstream in(config_path);
    if (!in) throw ValidationError("cannot open config file '" + config_path + "'");

    const auto given = [&](const std::string& name) {
        for (const auto& a : args)
            if (a == name || a.rfind(name + "=", 0) == 0) return true;
        return false;
    };

    std::vector<std::string> injected;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(config_path + ":" + std::to_string(line_no) +
                                  ": expected key=value");
        auto trim = [](std::string v) {
            const auto a = v.find_first_not_of(" \t\r");
            const auto b = v.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key == "config")
            throw ValidationError(config_path + ":" + std::to_string(line_no) + ": bad key");
        const std::string name = "--" + key;
        if (given(name)) continue;
        if (value == "true" || value == "false") {
            if (value == "true") injected.push_back(name);
            continue;
        }
        injected.push_back(name);
        std::istringstream vs(value);
        std::string token;
        while (vs >> token) injected.push_back(token);
    }

    // place injected tokens immediately after the subcommand name
    std::vector<std::string> out;
    bool placed = false;
    for (const auto& a : args) {
        out.push_back(a);
        if (!placed && !a.empty() && a[0] != '-') {
            out.insert(out.end(), injected.begin(), injected.end());
            placed = true;
        }
    }
    if (!placed)
        throw ValidationError("--config requires a subcommand");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and maximum-likelihood fitting of Hawkes processes with "
                 "latency-shifted exponential kernels"};
    app.require_subcommand(1);
    app.footer("Environment: HAWKES_THREADS caps worker threads (default: hardware concurrency).\n"
               "File formats: plain = one timestamp per line; long = 'series,t' CSV rows.\n"
               "Exit codes: 0 success, 1 runtime failure, 2 usage/validation failure.");

    SimulateCmd simulate_cmd;
    FitCmd fit_cmd;
    StatsCmd stats_cmd;
    CurvesCmd curves_cmd;
    simulate_cmd.attach(app);
    fit_cmd.attach(app);
    stats_cmd.attach(app);
    curves_cmd.attach(app);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end()); // CLI11 consumes back to front
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
