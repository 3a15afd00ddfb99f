// entanglement.hpp: atomic reduced state, linear entropy and coupling scans

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dicke/hilbert.hpp"
#include "dicke/parallel.hpp"
#include "dicke/params.hpp"
#include "dicke/spectra.hpp"

namespace dicke {

// Spin-J density matrix in the |J, m> basis, m ascending from -J.
struct DensityMatrix {
    double j{0.5};
    Eigen::MatrixXcd entries;

    int dim() const noexcept { return static_cast<int>(entries.rows()); }

    void validate(double tol = 1e-12) const {
        if (entries.rows() != twice(j) + 1 || entries.cols() != entries.rows())
            throw invalid_input("DensityMatrix: dimension must be 2J+1");
        if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > tol)
            throw invalid_input("DensityMatrix: not Hermitian");
        if (std::abs(entries.trace() - std::complex<double>(1.0)) > tol)
            throw invalid_input("DensityMatrix: trace != 1");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(entries);
        if (es.eigenvalues().minCoeff() < -tol) throw invalid_input("DensityMatrix: not positive semidefinite");
    }
};

inline DensityMatrix reduced_atomic_dm(const Eigen::VectorXd& state, const HilbertBasis& basis) {
    if (static_cast<std::size_t>(state.size()) != basis.dim())
        throw invalid_input("reduced_atomic_dm: state length " + std::to_string(state.size()) +
                            " does not match basis dimension " + std::to_string(basis.dim()));
    return {basis.j(), trace_out_boson(state, basis.spin_dim()).cast<std::complex<double>>()};
}

inline DensityMatrix reduced_atomic_dm(const EigenResult& gs) {
    if (!gs.basis) throw invalid_input("reduced_atomic_dm: result carries no basis");
    return reduced_atomic_dm(gs.vector, *gs.basis);
}

struct LinearEntropy {
    double purity{1.0};  // Tr rho^2
    double entropy{0.0}; // 1 - Tr rho^2
};

inline LinearEntropy linear_entropy(const DensityMatrix& rho) {
    // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho
    const double purity = rho.entries.squaredNorm();
    return {purity, 1.0 - purity};
}

inline constexpr double default_participation_threshold = 1e-6;

// Number of basis states with |c|^2 > threshold.
inline std::size_t participation_count(const Eigen::VectorXd& state,
                                       double threshold = default_participation_threshold) {
    if (!(threshold > 0.0 && threshold < 1.0))
        throw invalid_input("participation_count: threshold must lie in (0, 1)");
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < state.size(); ++i)
        if (state[i] * state[i] > threshold) ++count;
    return count;
}

inline std::size_t participation_count(const EigenResult& gs, double threshold = default_participation_threshold) {
    return participation_count(gs.vector, threshold);
}

struct EntropyScanRow {
    double lambda{0.0};      // G / eps
    double lambda_plus{0.0}; // (G + G') / eps
    double energy{0.0};
    double entropy{0.0};       // left limit at exact ties
    double entropy_right{0.0}; // other tied sector; equals entropy when not degenerate
    std::size_t participation{0};
    long block_label{0};
    bool degenerate{false};
};

struct EntropyScan {
    ScanMode mode{ScanMode::integrable};
    ModelParams tmpl;
    int n_max{0};
    double participation_threshold{default_participation_threshold};
    std::vector<EntropyScanRow> rows;
};

struct ScanOptions {
    std::optional<int> n_max;       // skip truncation convergence when set
    double truncation_tol{1e-10};
    unsigned threads{default_thread_count()};
    double participation_threshold{default_participation_threshold};
    SolverOptions solver{};
};

inline void require_increasing(const std::vector<double>& grid, const char* who) {
    if (grid.empty()) throw invalid_input(std::string(who) + ": empty coupling grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw invalid_input(std::string(who) + ": grid must be strictly increasing");
    if (!(grid.front() >= 0.0)) throw invalid_input(std::string(who) + ": couplings must be >= 0");
}

inline EntropyScanRow entropy_row(const ModelParams& p, int n_max, double threshold, const SolverOptions& solver) {
    const EigenResult gs = solve_ground_state(p, n_max, solver);
    EntropyScanRow row;
    row.lambda = p.lambda();
    row.lambda_plus = p.lambda_plus();
    row.energy = gs.energy;
    row.entropy = linear_entropy(reduced_atomic_dm(gs)).entropy;
    row.entropy_right = gs.tied_vector
                            ? linear_entropy(reduced_atomic_dm(*gs.tied_vector, *gs.basis)).entropy
                            : row.entropy;
    row.participation = participation_count(gs, threshold);
    row.block_label = gs.block_label;
    row.degenerate = gs.degenerate;
    return row;
}

// Ground-state entropy along a coupling grid (see ScanMode for the grid variable).
// The truncation is converged once, at the largest grid value.
inline EntropyScan entropy_scan(const ModelParams& tmpl, const std::vector<double>& grid, ScanMode mode,
                                const ScanOptions& opts = {}) {
    require_increasing(grid, "entropy_scan");
    tmpl.validate();
    EntropyScan scan;
    scan.mode = mode;
    scan.tmpl = tmpl;
    scan.participation_threshold = opts.participation_threshold;
    scan.n_max = opts.n_max ? *opts.n_max
                            : converge_truncation(tmpl, mode, grid.back(), opts.truncation_tol, {}, opts.solver);
    scan.rows.resize(grid.size());
    parallel_for(grid.size(), opts.threads, [&](std::size_t i) {
        try {
            scan.rows[i] = entropy_row(params_at(tmpl, mode, grid[i]), scan.n_max, opts.participation_threshold,
                                       opts.solver);
        } catch (const convergence_error& e) {
            throw convergence_error(std::string("entropy_scan at coupling ") + std::to_string(grid[i]) + ": " +
                                        e.what(),
                                    e.iterations());
        }
    });
    return scan;
}

} // namespace dicke
