// spectra.hpp: ground states and low spectra of the Dicke Hamiltonian
//
// Every solve is split into conserved sectors first: parity (-1)^{N_exc} for
// any couplings, excitation number N_exc when G' = 0. Sectors up to
// `dense_limit` are diagonalized densely, larger ones with restarted Lanczos.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "dicke/hilbert.hpp"
#include "dicke/lanczos.hpp"
#include "dicke/params.hpp"

namespace dicke {

struct SolverOptions {
    std::size_t dense_limit{4000};
    double residual_tol{1e-9}; // accepted residual relative to the norm bound of H
    LanczosOptions lanczos{};
};

struct EigenResult {
    double energy{0.0};
    Eigen::VectorXd vector;         // unit norm over the full basis, first nonzero amplitude > 0
    long block_label{0};            // N_exc (blockwise) or parity +/-1
    bool degenerate{false};         // another sector's minimum ties within tolerance
    double residual{0.0};           // ||H v - E v||
    std::shared_ptr<const HilbertBasis> basis;
    // Ground state of the competing tied sector (right limit at a level crossing).
    std::optional<Eigen::VectorXd> tied_vector;
    long tied_label{0};
};

// Flip the global sign so the first amplitude above 1e-12 is positive.
inline void apply_sign_convention(Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-12) {
            if (v[i] < 0.0) v = -v;
            return;
        }
    }
}

namespace detail {

struct SectorSolution {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors; // in sector coordinates
};

inline SectorSolution solve_sector(const HamiltonianMatrix& h, const std::vector<std::size_t>& idx,
                                   std::size_t k, const SolverOptions& opts) {
    k = std::min(k, idx.size());
    if (idx.size() <= opts.dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(extract_block(h, idx));
        if (es.info() != Eigen::Success)
            throw convergence_error("dense eigensolver failed", 0);
        return {es.eigenvalues().head(static_cast<Eigen::Index>(k)),
                es.eigenvectors().leftCols(static_cast<Eigen::Index>(k))};
    }
    auto pairs = lanczos_lowest(extract_sparse_block(h, idx), k, opts.lanczos);
    return {std::move(pairs.values), std::move(pairs.vectors)};
}

inline Eigen::VectorXd embed(const Eigen::VectorXd& local, const std::vector<std::size_t>& idx,
                             std::size_t dim) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t a = 0; a < idx.size(); ++a) out[static_cast<Eigen::Index>(idx[a])] = local[static_cast<Eigen::Index>(a)];
    return out;
}

struct SectorMinimum {
    long label;
    double energy;
    Eigen::VectorXd vector; // full basis
};

// Picks the lowest sector minimum. Sectors within tie_tol of it count as tied
// and the earliest one in `minima` order wins.
inline EigenResult select_minimum(const HamiltonianMatrix& h, std::vector<SectorMinimum> minima,
                                  double tie_tol, const SolverOptions& opts) {
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& s : minima) lowest = std::min(lowest, s.energy);
    std::size_t best = 0;
    while (!(std::abs(minima[best].energy - lowest) < tie_tol)) ++best;

    EigenResult r;
    r.basis = h.basis;
    r.energy = minima[best].energy;
    r.block_label = minima[best].label;
    r.vector = std::move(minima[best].vector);
    apply_sign_convention(r.vector);
    for (std::size_t i = 0; i < minima.size(); ++i) {
        if (i == best) continue;
        if (std::abs(minima[i].energy - r.energy) < tie_tol) {
            r.degenerate = true;
            Eigen::VectorXd v = minima[i].vector;
            apply_sign_convention(v);
            r.tied_vector = std::move(v);
            r.tied_label = minima[i].label;
            break;
        }
    }
    r.residual = (h.entries * r.vector - r.energy * r.vector).norm();
    const double bound = opts.residual_tol * std::max(h.norm_bound(), 1e-300);
    if (!(r.residual <= bound))
        throw convergence_error("ground state residual " + std::to_string(r.residual) +
                                    " exceeds tolerance " + std::to_string(bound),
                                0);
    return r;
}

inline double tie_tolerance(const ModelParams& p) { return 1e-10 * std::max(p.epsilon, p.omega); }

} // namespace detail

// Lowest eigenpair of H, solved per parity sector. block_label is the parity.
inline EigenResult ground_state(const HamiltonianMatrix& h, const SolverOptions& opts = {}) {
    if (!h.basis) throw invalid_input("ground_state: Hamiltonian has no basis");
    std::vector<detail::SectorMinimum> minima;
    for (const auto& block : parity_blocks(*h.basis)) {
        if (block.indices.empty()) continue;
        auto sol = detail::solve_sector(h, block.indices, 1, opts);
        minima.push_back({block.label, sol.values[0],
                          detail::embed(sol.vectors.col(0), block.indices, h.dim())});
    }
    return detail::select_minimum(h, std::move(minima), detail::tie_tolerance(h.params), opts);
}

// Integrable case only: diagonalize each N_exc block separately and return the
// global minimum. At an exact crossing the lower N_exc block wins and the
// result is flagged degenerate (tolerance 1e-10*eps).
inline EigenResult ground_state_blockwise(const ModelParams& params, int n_max,
                                          const SolverOptions& opts = {}) {
    params.validate();
    if (params.g_prime != 0.0)
        throw invalid_input("ground_state_blockwise: requires g_prime == 0 (integrable case)");
    const auto h = assemble_hamiltonian(params, build_basis(params.j, n_max));
    std::vector<detail::SectorMinimum> minima;
    for (const auto& block : excitation_blocks(*h.basis)) {
        auto sol = detail::solve_sector(h, block.indices, 1, opts);
        minima.push_back({block.label, sol.values[0],
                          detail::embed(sol.vectors.col(0), block.indices, h.dim())});
    }
    return detail::select_minimum(h, std::move(minima), 1e-10 * params.epsilon, opts);
}

// Ground state with the cheapest exact route for the given couplings.
inline EigenResult solve_ground_state(const ModelParams& params, int n_max, const SolverOptions& opts = {}) {
    if (params.g_prime == 0.0) return ground_state_blockwise(params, n_max, opts);
    return ground_state(assemble_hamiltonian(params, build_basis(params.j, n_max)), opts);
}

// k lowest eigenvalues, ascending (merged across parity sectors).
inline std::vector<double> low_spectrum(const HamiltonianMatrix& h, std::size_t k,
                                        const SolverOptions& opts = {}) {
    if (!h.basis) throw invalid_input("low_spectrum: Hamiltonian has no basis");
    if (k < 1 || k > h.dim()) throw invalid_input("low_spectrum: need 1 <= k <= dim");
    std::vector<double> all;
    const double bound = opts.residual_tol * std::max(h.norm_bound(), 1e-300);
    for (const auto& block : parity_blocks(*h.basis)) {
        if (block.indices.empty()) continue;
        auto sol = detail::solve_sector(h, block.indices, k, opts);
        for (Eigen::Index i = 0; i < sol.values.size(); ++i) {
            const Eigen::VectorXd v = detail::embed(sol.vectors.col(i), block.indices, h.dim());
            const double res = (h.entries * v - sol.values[i] * v).norm();
            if (!(res <= bound))
                throw convergence_error("low_spectrum: residual " + std::to_string(res) + " too large", 0);
            all.push_back(sol.values[i]);
        }
    }
    std::sort(all.begin(), all.end());
    all.resize(k);
    return all;
}

// Linear entropy of the atomic reduced state, S = 1 - Tr rho_A^2.
inline double atomic_linear_entropy(const Eigen::VectorXd& state, int spin_dim) {
    const Eigen::MatrixXd rho = trace_out_boson(state, spin_dim);
    return 1.0 - rho.squaredNorm();
}

struct TruncationOptions {
    int step{10};
    int cap{400};
};

// Smallest n_max (multiple of 10) with |E0(n) - E0(n+10)| < tol and
// |S(n) - S(n+10)| < 10 tol at the largest coupling of the scan.
inline int converge_truncation(const ModelParams& tmpl, ScanMode mode, double lambda_max, double tol,
                               const TruncationOptions& topts = {}, const SolverOptions& opts = {}) {
    if (!(tol > 0.0)) throw invalid_input("converge_truncation: tol must be > 0");
    const ModelParams p = params_at(tmpl, mode, lambda_max);
    p.validate();
    struct Sample {
        double energy;
        double entropy;
    };
    auto sample = [&](int n_max) {
        const auto gs = solve_ground_state(p, n_max, opts);
        return Sample{gs.energy, atomic_linear_entropy(gs.vector, p.spin_dim())};
    };
    Sample cur = sample(0);
    for (int n = 0; n + topts.step <= topts.cap; n += topts.step) {
        const Sample next = sample(n + topts.step);
        if (std::abs(cur.energy - next.energy) < tol && std::abs(cur.entropy - next.entropy) < 10.0 * tol)
            return n;
        cur = next;
    }
    throw convergence_error("converge_truncation: not converged by n_max cap " + std::to_string(topts.cap) +
                                " at coupling " + std::to_string(lambda_max),
                            static_cast<std::size_t>(topts.cap / topts.step));
}

} // namespace dicke
