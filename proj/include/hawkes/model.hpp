#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hawkes {

using Matrix = std::vector<std::vector<double>>;

/// Univariate exponential-kernel model with latency: the kernel is
/// alpha * exp(-beta * (t - tau)) for t >= tau and zero before tau.
/// tau = 0 recovers the classic exponential Hawkes model.
struct Model1D {
    double lambda0 = 0.0; // baseline rate, events/s
    double alpha = 0.0;   // intensity jump, 1/s
    double beta = 1.0;    // decay, 1/s
    double tau = 0.0;     // latency, s

    void validate() const {
        if (!(lambda0 >= 0.0)) throw std::invalid_argument("Model1D: lambda0 must be >= 0");
        if (!(alpha >= 0.0)) throw std::invalid_argument("Model1D: alpha must be >= 0");
        if (!(beta > 0.0)) throw std::invalid_argument("Model1D: beta must be > 0");
        if (!(tau >= 0.0)) throw std::invalid_argument("Model1D: tau must be >= 0");
    }

    double branching_ratio() const { return alpha / beta; }
};

/// M-dimensional model. alpha[m][n] / beta[m][n] / tau[m][n] describe the
/// kernel from source node n into target node m. A scalar latency is
/// broadcast to all M*M kernels; a full matrix supports distinct latencies
/// per kernel pair.
struct ModelMD {
    std::vector<double> lambda0; // size M
    Matrix alpha;                // M x M
    Matrix beta;                 // M x M
    Matrix tau;                  // M x M

    ModelMD() = default;

    ModelMD(std::vector<double> lambda0_in, Matrix alpha_in, Matrix beta_in, double tau_scalar)
        : lambda0(std::move(lambda0_in)), alpha(std::move(alpha_in)), beta(std::move(beta_in)) {
        tau.assign(lambda0.size(), std::vector<double>(lambda0.size(), tau_scalar));
        validate();
    }

    ModelMD(std::vector<double> lambda0_in, Matrix alpha_in, Matrix beta_in, Matrix tau_in)
        : lambda0(std::move(lambda0_in)),
          alpha(std::move(alpha_in)),
          beta(std::move(beta_in)),
          tau(std::move(tau_in)) {
        validate();
    }

    std::size_t dim() const noexcept { return lambda0.size(); }

    bool uniform_tau() const {
        for (const auto& row : tau)
            for (double v : row)
                if (v != tau[0][0]) return false;
        return true;
    }

    void validate() const {
        const std::size_t m = lambda0.size();
        if (m == 0) throw std::invalid_argument("ModelMD: dimension must be positive");
        auto check_shape = [m](const Matrix& mat, const char* name) {
            if (mat.size() != m) throw std::invalid_argument(std::string("ModelMD: ") + name + " has wrong row count");
            for (const auto& row : mat)
                if (row.size() != m)
                    throw std::invalid_argument(std::string("ModelMD: ") + name + " has wrong column count");
        };
        check_shape(alpha, "alpha");
        check_shape(beta, "beta");
        check_shape(tau, "tau");
        for (double v : lambda0)
            if (!(v >= 0.0)) throw std::invalid_argument("ModelMD: lambda0 entries must be >= 0");
        for (const auto& row : alpha)
            for (double v : row)
                if (!(v >= 0.0)) throw std::invalid_argument("ModelMD: alpha entries must be >= 0");
        for (const auto& row : beta)
            for (double v : row)
                if (!(v > 0.0)) throw std::invalid_argument("ModelMD: beta entries must be > 0");
        for (const auto& row : tau)
            for (double v : row)
                if (!(v >= 0.0)) throw std::invalid_argument("ModelMD: tau entries must be >= 0");
    }

    /// Branching matrix: expected direct offspring of type m per event of type n.
    Matrix branching_matrix() const {
        const std::size_t m = dim();
        Matrix g(m, std::vector<double>(m, 0.0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) g[i][j] = alpha[i][j] / beta[i][j];
        return g;
    }
};

struct StationarityResult {
    bool stable = false;
    double spectral_radius = 0.0;
};

namespace detail {

// Spectral radius of a non-negative matrix by normalized repeated squaring:
// rho = lim ||A^(2^k)||^(2^-k) with the max-row-sum norm.
inline double nonneg_spectral_radius(const Matrix& a) {
    const std::size_t m = a.size();
    if (m == 1) return a[0][0];

    auto norm_inf = [m](const Matrix& x) {
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += x[i][j];
            if (s > best) best = s;
        }
        return best;
    };

    Matrix p = a;
    const double n0 = norm_inf(p);
    if (n0 == 0.0) return 0.0;
    for (auto& row : p)
        for (double& v : row) v /= n0;

    // Invariant: A^(2^k) = exp(s * 2^k) * P with ||P|| = 1, so s estimates
    // log(rho). Each squaring refines s by log||P^2|| / 2^(k+1).
    double s = std::log(n0);
    double weight = 0.5;
    Matrix q(m, std::vector<double>(m, 0.0));
    for (int iter = 0; iter < 64; ++iter) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                double acc = 0.0;
                for (std::size_t k = 0; k < m; ++k) acc += p[i][k] * p[k][j];
                q[i][j] = acc;
            }
        const double nq = norm_inf(q);
        if (nq == 0.0) return 0.0; // nilpotent
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) p[i][j] = q[i][j] / nq;
        s += std::log(nq) * weight;
        weight *= 0.5;
    }
    return std::exp(s);
}

} // namespace detail

inline StationarityResult stationarity_check(const Model1D& model) {
    model.validate();
    const double rho = model.alpha / model.beta;
    return {rho < 1.0, rho};
}

inline StationarityResult stationarity_check(const ModelMD& model) {
    model.validate();
    const double rho = detail::nonneg_spectral_radius(model.branching_matrix());
    return {rho < 1.0, rho};
}

/// Unconditional expected intensity lambda0 / (1 - alpha/beta). The latency
/// shifts the kernel without changing its mass alpha/beta, so the value does
/// not depend on tau.
inline double expected_intensity(const Model1D& model) {
    const auto st = stationarity_check(model);
    if (!st.stable)
        throw std::domain_error("expected_intensity: model is not stationary (alpha/beta >= 1)");
    return model.lambda0 / (1.0 - st.spectral_radius);
}

// Parameter-vector layout used by the joint likelihood and the optimizer:
// [lambda0 (M) | alpha row-major (M*M) | beta row-major (M*M)].
namespace theta {

enum class ParamKind { lambda0, alpha, beta };

inline std::size_t size(std::size_t m) { return m + 2 * m * m; }
inline std::size_t lambda0_index(std::size_t m, std::size_t i) {
    (void)m;
    return i;
}
inline std::size_t alpha_index(std::size_t m, std::size_t i, std::size_t j) { return m + i * m + j; }
inline std::size_t beta_index(std::size_t m, std::size_t i, std::size_t j) {
    return m + m * m + i * m + j;
}

inline ParamKind kind(std::size_t m, std::size_t index) {
    if (index < m) return ParamKind::lambda0;
    if (index < m + m * m) return ParamKind::alpha;
    return ParamKind::beta;
}

inline std::string name(std::size_t m, std::size_t index) {
    if (index < m) return "lambda0[" + std::to_string(index) + "]";
    if (index < m + m * m) {
        const std::size_t k = index - m;
        return "alpha[" + std::to_string(k / m) + "][" + std::to_string(k % m) + "]";
    }
    const std::size_t k = index - m - m * m;
    return "beta[" + std::to_string(k / m) + "][" + std::to_string(k % m) + "]";
}

inline std::vector<double> pack(const ModelMD& model) {
    const std::size_t m = model.dim();
    std::vector<double> v(size(m));
    for (std::size_t i = 0; i < m; ++i) v[lambda0_index(m, i)] = model.lambda0[i];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            v[alpha_index(m, i, j)] = model.alpha[i][j];
            v[beta_index(m, i, j)] = model.beta[i][j];
        }
    return v;
}

inline ModelMD unpack(const std::vector<double>& v, std::size_t m, const Matrix& tau) {
    if (v.size() != size(m)) throw std::invalid_argument("theta::unpack: wrong vector length");
    std::vector<double> lambda0(m);
    Matrix alpha(m, std::vector<double>(m)), beta(m, std::vector<double>(m));
    for (std::size_t i = 0; i < m; ++i) lambda0[i] = v[lambda0_index(m, i)];
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            alpha[i][j] = v[alpha_index(m, i, j)];
            beta[i][j] = v[beta_index(m, i, j)];
        }
    return ModelMD(std::move(lambda0), std::move(alpha), std::move(beta), tau);
}

} // namespace theta

} // namespace hawkes
