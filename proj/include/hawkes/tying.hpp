#pragma once

#include <cstddef>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hawkes/model.hpp"

namespace hawkes {

/// Many-to-one map from the full theta layout onto a free-parameter vector.
/// Tied coordinates share one free slot, so equality constraints hold by
/// reparameterization and tied outputs are bitwise equal.
struct TyingScheme {
    std::size_t dim = 0;
    std::size_t n_free = 0;
    std::vector<std::size_t> map; // full index -> free index

    static TyingScheme identity(std::size_t m) {
        TyingScheme s;
        s.dim = m;
        s.n_free = theta::size(m);
        s.map.resize(s.n_free);
        std::iota(s.map.begin(), s.map.end(), 0);
        return s;
    }

    void validate() const {
        if (map.size() != theta::size(dim))
            throw std::invalid_argument("TyingScheme: map must cover the full theta layout");
        std::vector<bool> seen(n_free, false);
        for (std::size_t v : map) {
            if (v >= n_free) throw std::invalid_argument("TyingScheme: free index out of range");
            seen[v] = true;
        }
        for (bool s : seen)
            if (!s) throw std::invalid_argument("TyingScheme: map must be surjective");
    }

    std::vector<double> expand(std::span<const double> free_params) const {
        std::vector<double> full(map.size());
        for (std::size_t i = 0; i < map.size(); ++i) full[i] = free_params[map[i]];
        return full;
    }

    /// First full coordinate mapped to each free slot.
    std::vector<std::size_t> representatives() const {
        std::vector<std::size_t> rep(n_free, map.size());
        for (std::size_t i = 0; i < map.size(); ++i)
            if (rep[map[i]] == map.size()) rep[map[i]] = i;
        return rep;
    }

    std::vector<double> reduce(std::span<const double> full) const {
        const auto rep = representatives();
        std::vector<double> free_params(n_free);
        for (std::size_t j = 0; j < n_free; ++j) free_params[j] = full[rep[j]];
        return free_params;
    }
};

namespace detail {

inline std::size_t parse_param_name(const std::string& token, std::size_t dim) {
    auto fail = [&]() -> std::size_t {
        throw std::invalid_argument("tying: cannot parse parameter name '" + token + "'");
    };
    auto read_index = [&](std::size_t& pos) {
        if (pos >= token.size() || token[pos] != '[') fail();
        const std::size_t close = token.find(']', pos);
        if (close == std::string::npos) fail();
        const std::string digits = token.substr(pos + 1, close - pos - 1);
        if (digits.empty()) fail();
        std::size_t v = 0;
        for (char c : digits) {
            if (c < '0' || c > '9') fail();
            v = v * 10 + static_cast<std::size_t>(c - '0');
        }
        if (v >= dim) throw std::invalid_argument("tying: index out of range in '" + token + "'");
        pos = close + 1;
        return v;
    };

    if (token.rfind("lambda0", 0) == 0) {
        std::size_t pos = 7;
        const std::size_t m = read_index(pos);
        if (pos != token.size()) fail();
        return theta::lambda0_index(dim, m);
    }
    if (token.rfind("alpha", 0) == 0) {
        std::size_t pos = 5;
        const std::size_t m = read_index(pos);
        const std::size_t n = read_index(pos);
        if (pos != token.size()) fail();
        return theta::alpha_index(dim, m, n);
    }
    if (token.rfind("beta", 0) == 0) {
        std::size_t pos = 4;
        const std::size_t m = read_index(pos);
        const std::size_t n = read_index(pos);
        if (pos != token.size()) fail();
        return theta::beta_index(dim, m, n);
    }
    return fail();
}

} // namespace detail

/// Tie specs are plain text: one `tie <name> <name> ...` directive per line,
/// names like lambda0[0], alpha[0][1], beta[1][1] (0-based). Lines starting
/// with '#' and blank lines are ignored; parameters never mentioned stay free.
inline TyingScheme parse_tying(std::istream& in, std::size_t dim) {
    const std::size_t full = theta::size(dim);
    // union-find over full indices
    std::vector<std::size_t> parent(full);
    std::iota(parent.begin(), parent.end(), 0);
    const auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string word;
        if (!(ls >> word) || word[0] == '#') continue;
        if (word != "tie")
            throw std::invalid_argument("tying: line " + std::to_string(line_no) +
                                        ": expected 'tie', got '" + word + "'");
        std::vector<std::size_t> group;
        while (ls >> word) {
            if (word[0] == '#') break;
            group.push_back(detail::parse_param_name(word, dim));
        }
        if (group.size() < 2)
            throw std::invalid_argument("tying: line " + std::to_string(line_no) +
                                        ": a tie needs at least two parameters");
        const auto kind0 = theta::kind(dim, group[0]);
        for (std::size_t idx : group) {
            if (theta::kind(dim, idx) != kind0)
                throw std::invalid_argument("tying: line " + std::to_string(line_no) +
                                            ": cannot tie parameters of different kinds");
            parent[find(idx)] = find(group[0]);
        }
    }

    TyingScheme scheme;
    scheme.dim = dim;
    scheme.map.assign(full, full);
    std::vector<std::size_t> slot_of_root(full, full);
    std::size_t next_free = 0;
    for (std::size_t i = 0; i < full; ++i) {
        const std::size_t root = find(i);
        if (slot_of_root[root] == full) slot_of_root[root] = next_free++;
        scheme.map[i] = slot_of_root[root];
    }
    scheme.n_free = next_free;
    scheme.validate();
    return scheme;
}

inline TyingScheme parse_tying_file(const std::string& path, std::size_t dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("tying: cannot open '" + path + "'");
    return parse_tying(in, dim);
}

} // namespace hawkes
