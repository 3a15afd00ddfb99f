// lanczos.hpp: lowest eigenpairs of a real symmetric sparse matrix
//
// Explicitly restarted Lanczos with full reorthogonalization. Converged Ritz
// pairs are locked one at a time and deflated from later Krylov spaces, so the
// k lowest eigenpairs come out in ascending order.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cstddef>
#include <random>
#include <vector>

#include "dicke/params.hpp"

namespace dicke {

struct LanczosOptions {
    std::size_t krylov_dim{80};
    std::size_t max_restarts{400};
    double residual_tol{1e-11}; // relative to the matrix norm bound
    unsigned seed{20061u};
};

struct EigenPairs {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns
    std::size_t iterations{0};
};

namespace detail {

inline double row_sum_norm(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
        double row = 0.0;
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, r); it; ++it)
            row += std::abs(it.value());
        best = std::max(best, row);
    }
    return best;
}

// Two passes of classical Gram-Schmidt against the columns of basis[0, count).
inline void orthogonalize(Eigen::VectorXd& v, const Eigen::MatrixXd& basis, Eigen::Index count) {
    if (count == 0) return;
    for (int pass = 0; pass < 2; ++pass) {
        const Eigen::VectorXd coeff = basis.leftCols(count).transpose() * v;
        v.noalias() -= basis.leftCols(count) * coeff;
    }
}

} // namespace detail

inline EigenPairs lanczos_lowest(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, std::size_t k,
                                 const LanczosOptions& opts = {}) {
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw invalid_input("lanczos_lowest: matrix must be square");
    if (k == 0 || static_cast<Eigen::Index>(k) > n)
        throw invalid_input("lanczos_lowest: need 1 <= k <= dim");

    const double norm = std::max(detail::row_sum_norm(a), 1e-300);
    const double tol = opts.residual_tol * norm;

    Eigen::MatrixXd locked(n, static_cast<Eigen::Index>(k));
    Eigen::VectorXd locked_values(static_cast<Eigen::Index>(k));
    Eigen::Index n_locked = 0;
    std::size_t iterations = 0;

    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);

    while (n_locked < static_cast<Eigen::Index>(k)) {
        Eigen::VectorXd start(n);
        for (Eigen::Index i = 0; i < n; ++i) start[i] = uni(rng);
        detail::orthogonalize(start, locked, n_locked);
        start.normalize();

        bool converged = false;
        for (std::size_t restart = 0; restart <= opts.max_restarts && !converged; ++restart) {
            const Eigen::Index m_max =
                std::min<Eigen::Index>(static_cast<Eigen::Index>(opts.krylov_dim), n - n_locked);
            Eigen::MatrixXd q(n, m_max);
            Eigen::VectorXd alpha(m_max), beta(m_max);
            q.col(0) = start;
            Eigen::Index m = 0;
            for (; m < m_max; ++m) {
                Eigen::VectorXd w = a * q.col(m);
                ++iterations;
                alpha[m] = q.col(m).dot(w);
                detail::orthogonalize(w, locked, n_locked);
                detail::orthogonalize(w, q, m + 1);
                beta[m] = w.norm();
                if (m + 1 < m_max) {
                    if (beta[m] < 1e-14 * norm) {
                        ++m; // invariant subspace found
                        break;
                    }
                    q.col(m + 1) = w / beta[m];
                }
            }

            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                t(i, i) = alpha[i];
                if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
            const double theta = tri.eigenvalues()[0];
            Eigen::VectorXd x = q.leftCols(m) * tri.eigenvectors().col(0);
            detail::orthogonalize(x, locked, n_locked);
            x.normalize();
            const double residual = (a * x - theta * x).norm();
            if (residual <= tol) {
                locked.col(n_locked) = x;
                locked_values[n_locked] = x.dot(a * x);
                ++n_locked;
                converged = true;
            } else {
                start = x;
            }
        }
        if (!converged)
            throw convergence_error("lanczos_lowest: eigenpair " + std::to_string(n_locked) +
                                        " did not reach residual tolerance",
                                    iterations);
    }

    // Locking order is ascending up to round-off; sort to be safe.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < k; ++i) order[i] = static_cast<Eigen::Index>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return locked_values[x] < locked_values[y]; });
    EigenPairs out;
    out.values.resize(static_cast<Eigen::Index>(k));
    out.vectors.resize(n, static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        out.values[static_cast<Eigen::Index>(i)] = locked_values[order[i]];
        out.vectors.col(static_cast<Eigen::Index>(i)) = locked.col(order[i]);
    }
    out.iterations = iterations;
    return out;
}

} // namespace dicke
