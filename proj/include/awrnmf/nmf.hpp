#ifndef AWRNMF_NMF_HPP
#define AWRNMF_NMF_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "awrnmf/errors.hpp"
#include "awrnmf/rng.hpp"

namespace awrnmf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Method { EucNMF, FWRNMF, EWRNMF };

inline std::string method_name(Method m) {
    switch (m) {
        case Method::EucNMF: return "EucNMF";
        case Method::FWRNMF: return "FWRNMF";
        case Method::EWRNMF: return "EWRNMF";
    }
    return "?";
}

inline Method method_from_name(const std::string& s) {
    if (s == "EucNMF") return Method::EucNMF;
    if (s == "FWRNMF") return Method::FWRNMF;
    if (s == "EWRNMF") return Method::EWRNMF;
    throw config_error("unknown method: " + s);
}

struct SolverOptions {
    int max_iterations = 500;
    double rel_tolerance = 1e-6;
    double epsilon_guard = 1e-12;
    std::uint64_t rng_seed = 0;
    double hyper_p = 2.0;      // FWRNMF fuzzifier, must be > 1
    double hyper_gamma = 1.0;  // EWRNMF entropy coefficient, must be > 0
};

// W (M x L), H (L x N), per-column weights Q (length N, on the simplex).
struct Factorization {
    Matrix W;
    Matrix H;
    Vector Q;
    Eigen::Index rank = 0;
    std::vector<double> objective_trace;
    int iterations_run = 0;
    bool converged = false;
};

namespace detail {

inline void check_nonneg(const Matrix& X) {
    if ((X.array() < 0.0).any())
        throw nonnegativity_error("data matrix has a negative entry");
}

inline void check_shapes(const Matrix& X, const Matrix& W, const Matrix& H) {
    if (W.rows() != X.rows() || H.cols() != X.cols() || W.cols() != H.rows())
        throw shape_error("factor shapes do not conform: X is " +
                          std::to_string(X.rows()) + "x" + std::to_string(X.cols()) +
                          ", W is " + std::to_string(W.rows()) + "x" +
                          std::to_string(W.cols()) + ", H is " +
                          std::to_string(H.rows()) + "x" + std::to_string(H.cols()));
}

}  // namespace detail

inline Factorization init_factors(Eigen::Index m, Eigen::Index l, Eigen::Index n,
                                  std::uint64_t seed, double eps = 1e-12) {
    if (m < 1 || l < 1 || n < 1)
        throw dimension_error("all dimensions must be positive");
    if (l > std::min(m, n))
        throw dimension_error("rank " + std::to_string(l) + " exceeds min(" +
                              std::to_string(m) + "," + std::to_string(n) + ")");
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(eps, 1.0);
    Factorization f;
    f.rank = l;
    f.W = Matrix::NullaryExpr(m, l, [&]() { return unif(rng); });
    f.H = Matrix::NullaryExpr(l, n, [&]() { return unif(rng); });
    f.Q = Vector::Constant(n, 1.0 / static_cast<double>(n));
    return f;
}

// Z_j = sum_i (X - WH)_ij^2
inline Vector column_residuals(const Matrix& X, const Matrix& W, const Matrix& H) {
    detail::check_shapes(X, W, H);
    return (X - W * H).colwise().squaredNorm().transpose();
}

inline Matrix euc_update_w(const Matrix& X, const Matrix& W, const Matrix& H,
                           double eps = 1e-12) {
    detail::check_shapes(X, W, H);
    Matrix num = X * H.transpose();
    Matrix den = W * (H * H.transpose());
    return W.array() * num.array() / den.array().max(eps);
}

inline Matrix euc_update_h(const Matrix& X, const Matrix& W, const Matrix& H,
                           double eps = 1e-12) {
    detail::check_shapes(X, W, H);
    Matrix num = W.transpose() * X;
    Matrix den = (W.transpose() * W) * H;
    return H.array() * num.array() / den.array().max(eps);
}

// The H rule is the same for all three methods: the column weight scales
// every term of column j's subproblem and cancels from the ratio.
inline Matrix shared_update_h(const Matrix& X, const Matrix& W, const Matrix& H,
                              double eps = 1e-12) {
    return euc_update_h(X, W, H, eps);
}

// Q_j proportional to (1/Z_j)^{1/(p-1)}, normalized onto the simplex.
// Computed in the log domain so tiny residuals neither overflow nor
// collapse the ranking. Only residuals that are zero for all practical
// purposes (below the subnormal-safe floor, where the formula itself
// diverges) take the limit: uniform weight over the zero-residual columns,
// zero elsewhere.
inline Vector fwrnmf_weights(const Vector& Z, double p, double /*eps*/ = 1e-12) {
    if (p <= 1.0)
        throw hyperparameter_error("fuzzifier p must be > 1");
    constexpr double zero_floor = 1e-300;
    const Eigen::Index n = Z.size();
    std::vector<Eigen::Index> zero_cols;
    for (Eigen::Index j = 0; j < n; ++j)
        if (Z[j] <= zero_floor) zero_cols.push_back(j);
    Vector q = Vector::Zero(n);
    if (!zero_cols.empty()) {
        for (Eigen::Index j : zero_cols) q[j] = 1.0 / static_cast<double>(zero_cols.size());
        return q;
    }
    Vector logt = -Z.array().log() / (p - 1.0);
    double shift = logt.maxCoeff();
    q = (logt.array() - shift).exp();
    return q / q.sum();
}

// Softmax of -Z/gamma, stabilized by subtracting min_j Z_j first.
inline Vector ewrnmf_weights(const Vector& Z, double gamma, double /*eps*/ = 1e-12) {
    if (gamma <= 0.0)
        throw hyperparameter_error("entropy coefficient gamma must be > 0");
    Vector q = (-(Z.array() - Z.minCoeff()) / gamma).exp();
    return q / q.sum();
}

inline Matrix fwrnmf_update_w(const Matrix& X, const Matrix& W, const Matrix& H,
                              const Vector& Q, double p, double eps = 1e-12) {
    detail::check_shapes(X, W, H);
    if (Q.size() != X.cols())
        throw shape_error("weight vector length does not match column count");
    if (p <= 1.0)
        throw hyperparameter_error("fuzzifier p must be > 1");
    Vector qp = Q.array().pow(p);
    Matrix Hw = H.array().rowwise() * qp.transpose().array();
    Matrix num = X * Hw.transpose();
    Matrix den = W * (Hw * H.transpose());
    return W.array() * num.array() / den.array().max(eps);
}

inline Matrix ewrnmf_update_w(const Matrix& X, const Matrix& W, const Matrix& H,
                              const Vector& Q, double eps = 1e-12) {
    detail::check_shapes(X, W, H);
    if (Q.size() != X.cols())
        throw shape_error("weight vector length does not match column count");
    Matrix Hw = H.array().rowwise() * Q.transpose().array();
    Matrix num = X * Hw.transpose();
    Matrix den = W * (Hw * H.transpose());
    return W.array() * num.array() / den.array().max(eps);
}

// Method objective: EucNMF ||X-WH||_F^2; FWRNMF sum_j Q_j^p Z_j;
// EWRNMF sum_j Q_j Z_j + gamma * sum_j Q_j ln Q_j (with 0 ln 0 = 0).
inline double objective(const Matrix& X, const Matrix& W, const Matrix& H,
                        const Vector& Q, Method method, const SolverOptions& opts = {}) {
    detail::check_shapes(X, W, H);
    switch (method) {
        case Method::EucNMF:
            return (X - W * H).squaredNorm();
        case Method::FWRNMF: {
            Vector z = column_residuals(X, W, H);
            return (Q.array().pow(opts.hyper_p) * z.array()).sum();
        }
        case Method::EWRNMF: {
            Vector z = column_residuals(X, W, H);
            double fit = (Q.array() * z.array()).sum();
            double ent = 0.0;
            for (Eigen::Index j = 0; j < Q.size(); ++j)
                if (Q[j] > 0.0) ent += Q[j] * std::log(Q[j]);
            return fit + opts.hyper_gamma * ent;
        }
    }
    throw config_error("unknown method");
}

// Alternating loop: [weights ->] W-update -> H-update, objective recorded
// after each full sweep. Stops on relative objective change < rel_tolerance
// or when the iteration cap is hit.
inline Factorization fit(const Matrix& X, Eigen::Index rank, Method method,
                         const SolverOptions& opts = {}) {
    detail::check_nonneg(X);
    if (opts.max_iterations < 1 || opts.rel_tolerance <= 0.0 || opts.epsilon_guard <= 0.0)
        throw config_error("invalid solver options");
    if (method == Method::FWRNMF && opts.hyper_p <= 1.0)
        throw hyperparameter_error("fuzzifier p must be > 1");
    if (method == Method::EWRNMF && opts.hyper_gamma <= 0.0)
        throw hyperparameter_error("entropy coefficient gamma must be > 0");

    const double eps = opts.epsilon_guard;
    Factorization f = init_factors(X.rows(), rank, X.cols(), opts.rng_seed, eps);

    double prev = 0.0;
    for (int t = 0; t < opts.max_iterations; ++t) {
        switch (method) {
            case Method::EucNMF:
                f.W = euc_update_w(X, f.W, f.H, eps);
                break;
            case Method::FWRNMF:
                f.Q = fwrnmf_weights(column_residuals(X, f.W, f.H), opts.hyper_p, eps);
                f.W = fwrnmf_update_w(X, f.W, f.H, f.Q, opts.hyper_p, eps);
                break;
            case Method::EWRNMF:
                f.Q = ewrnmf_weights(column_residuals(X, f.W, f.H), opts.hyper_gamma, eps);
                f.W = ewrnmf_update_w(X, f.W, f.H, f.Q, eps);
                break;
        }
        f.H = shared_update_h(X, f.W, f.H, eps);
        double obj = objective(X, f.W, f.H, f.Q, method, opts);
        f.objective_trace.push_back(obj);
        f.iterations_run = t + 1;
        if (t > 0 && std::abs(obj - prev) / std::max(std::abs(prev), eps) < opts.rel_tolerance) {
            f.converged = true;
            break;
        }
        prev = obj;
    }
    return f;
}

}  // namespace awrnmf

#endif
