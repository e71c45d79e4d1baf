#pragma once

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hawkes/event_series.hpp"
#include "hawkes/model.hpp"

namespace hawkes {

namespace io {

/// Full-precision decimal rendering; round-trips every double exactly.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& text, const std::string& where) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || errno == ERANGE)
        throw std::runtime_error(where + ": cannot parse real number '" + text + "'");
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    if (*end != '\0')
        throw std::runtime_error(where + ": trailing characters after number '" + text + "'");
    return v;
}

/// Writes via a temporary file and an atomic rename so no partial file is
/// ever observable at the target path.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() +
                                 "': " + ec.message());
    }
}

struct ReadOptions {
    /// When set, the k-th duplicate of a timestamp is perturbed by k * eps
    /// instead of being rejected; the count of perturbed values is reported.
    std::optional<double> dedup_jitter_eps;
};

namespace detail_io {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

// Applies jitter to exact duplicates and checks strict monotonicity,
// reporting the first offending input line on failure.
inline std::vector<double> finalize_series(const std::vector<std::pair<double, std::size_t>>& values,
                                           const std::string& path, const ReadOptions& options,
                                           std::size_t& dedup_count) {
    std::vector<double> out;
    out.reserve(values.size());
    std::size_t run = 0; // duplicates seen in the current equal-valued run
    for (std::size_t i = 0; i < values.size(); ++i) {
        double t = values[i].first;
        if (i > 0 && values[i].first == values[i - 1].first) {
            if (!options.dedup_jitter_eps)
                throw std::runtime_error(path + ":" + std::to_string(values[i].second) +
                                         ": duplicate timestamp " + format_double(t));
            ++run;
            t += static_cast<double>(run) * *options.dedup_jitter_eps;
            ++dedup_count;
        } else {
            run = 0;
        }
        if (!out.empty() && t <= out.back())
            throw std::runtime_error(path + ":" + std::to_string(values[i].second) +
                                     ": timestamps are not strictly increasing (" +
                                     format_double(t) + " after " + format_double(out.back()) + ")");
        out.push_back(t);
    }
    return out;
}

} // namespace detail_io

/// Plain format: one decimal timestamp per line, strictly increasing.
inline EventSeries read_timestamps_plain(const std::filesystem::path& path,
                                         const ReadOptions& options = {},
                                         std::size_t* dedup_count = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::vector<std::pair<double, std::size_t>> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail_io::trim(line);
        if (t.empty()) continue;
        values.emplace_back(parse_double(t, path.string() + ":" + std::to_string(line_no)),
                            line_no);
    }
    if (values.empty()) throw std::runtime_error(path.string() + ": no timestamps found");
    std::size_t dedup = 0;
    auto out = detail_io::finalize_series(values, path.string(), options, dedup);
    if (dedup_count) *dedup_count = dedup;
    return EventSeries(std::move(out), path.filename().string());
}

struct LongFormatResult {
    std::vector<std::string> ids;    // sorted: numerically when all numeric
    std::vector<EventSeries> series; // aligned with ids
    std::size_t dedup_count = 0;
};

/// Long format: "series_id,t" per line with an optional "series,t" header.
inline LongFormatResult read_timestamps_long(const std::filesystem::path& path,
                                             const ReadOptions& options = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");

    std::map<std::string, std::vector<std::pair<double, std::size_t>>> buckets;
    std::string line;
    std::size_t line_no = 0;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail_io::trim(line);
        if (t.empty()) continue;
        const std::size_t comma = t.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected 'series_id,t'");
        const std::string id = detail_io::trim(t.substr(0, comma));
        const std::string value = detail_io::trim(t.substr(comma + 1));
        if (first_content_line) {
            first_content_line = false;
            if (id == "series" && value == "t") continue; // header
        }
        buckets[id].emplace_back(
            parse_double(value, path.string() + ":" + std::to_string(line_no)), line_no);
    }
    if (buckets.empty()) throw std::runtime_error(path.string() + ": no timestamps found");

    std::vector<std::string> ids;
    for (const auto& [id, _] : buckets) ids.push_back(id);
    const bool all_numeric = std::all_of(ids.begin(), ids.end(), [](const std::string& s) {
        return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    });
    std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
        if (all_numeric) return std::stoull(a) < std::stoull(b);
        return a < b;
    });

    LongFormatResult result;
    result.ids = ids;
    for (const auto& id : ids) {
        std::size_t dedup = 0;
        auto out = detail_io::finalize_series(buckets[id], path.string(), options, dedup);
        result.dedup_count += dedup;
        result.series.emplace_back(std::move(out), id);
    }
    return result;
}

inline void write_timestamps_plain(const std::filesystem::path& path, const EventSeries& series) {
    std::string content;
    content.reserve(series.size() * 20);
    for (double t : series) {
        content += format_double(t);
        content += '\n';
    }
    write_file_atomic(path, content);
}

inline void write_timestamps_long(const std::filesystem::path& path,
                                  std::span<const EventSeries> series) {
    std::string content = "series,t\n";
    for (std::size_t n = 0; n < series.size(); ++n)
        for (double t : series[n]) {
            content += std::to_string(n);
            content += ',';
            content += format_double(t);
            content += '\n';
        }
    write_file_atomic(path, content);
}

// -- model files: flat key=value text ---------------------------------------

inline std::string join_doubles(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += format_double(values[i]);
    }
    return out;
}

inline std::vector<double> split_doubles(const std::string& text, const std::string& where) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        if (comma == std::string::npos) comma = text.size();
        const std::string item = detail_io::trim(text.substr(pos, comma - pos));
        if (!item.empty()) out.push_back(parse_double(item, where));
        pos = comma + 1;
    }
    return out;
}

inline std::string model_to_text(const ModelMD& model) {
    const std::size_t m = model.dim();
    std::string out;
    out += "dim=" + std::to_string(m) + "\n";
    out += "lambda0=" + join_doubles(model.lambda0) + "\n";
    std::vector<double> flat;
    flat.reserve(m * m);
    for (const auto& row : model.alpha) flat.insert(flat.end(), row.begin(), row.end());
    out += "alpha=" + join_doubles(flat) + "\n";
    flat.clear();
    for (const auto& row : model.beta) flat.insert(flat.end(), row.begin(), row.end());
    out += "beta=" + join_doubles(flat) + "\n";
    if (model.uniform_tau()) {
        out += "tau=" + format_double(model.tau[0][0]) + "\n";
    } else {
        flat.clear();
        for (const auto& row : model.tau) flat.insert(flat.end(), row.begin(), row.end());
        out += "tau=" + join_doubles(flat) + "\n";
    }
    return out;
}

inline void write_model(const std::filesystem::path& path, const ModelMD& model) {
    write_file_atomic(path, model_to_text(model));
}

inline void write_model(const std::filesystem::path& path, const Model1D& model) {
    write_model(path, ModelMD({model.lambda0}, {{model.alpha}}, {{model.beta}}, model.tau));
}

inline ModelMD read_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = detail_io::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        kv[detail_io::trim(t.substr(0, eq))] = detail_io::trim(t.substr(eq + 1));
    }
    const auto need = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw std::runtime_error(path.string() + ": missing key '" + key + "'");
        return it->second;
    };
    const std::size_t m = static_cast<std::size_t>(
        parse_double(need("dim"), path.string() + ": dim"));
    if (m == 0) throw std::runtime_error(path.string() + ": dim must be positive");
    const auto as_matrix = [&](const std::string& key) {
        const auto flat = split_doubles(need(key), path.string() + ": " + key);
        if (flat.size() != m * m)
            throw std::runtime_error(path.string() + ": '" + key + "' needs dim*dim entries");
        Matrix mat(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) mat[i][j] = flat[i * m + j];
        return mat;
    };
    const auto lambda0 = split_doubles(need("lambda0"), path.string() + ": lambda0");
    if (lambda0.size() != m)
        throw std::runtime_error(path.string() + ": 'lambda0' needs dim entries");
    const auto tau_values = split_doubles(need("tau"), path.string() + ": tau");
    if (tau_values.size() == 1)
        return ModelMD(lambda0, as_matrix("alpha"), as_matrix("beta"), tau_values[0]);
    if (tau_values.size() == m * m) {
        Matrix tau(m, std::vector<double>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) tau[i][j] = tau_values[i * m + j];
        return ModelMD(lambda0, as_matrix("alpha"), as_matrix("beta"), tau);
    }
    throw std::runtime_error(path.string() + ": 'tau' needs 1 or dim*dim entries");
}

// -- manifests: ordered key=value text ---------------------------------------

inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out;
    for (const auto& [key, value] : entries) out += key + "=" + value + "\n";
    write_file_atomic(path, out);
}

} // namespace io

} // namespace hawkes
