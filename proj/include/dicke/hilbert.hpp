// hilbert.hpp: truncated |n, m> product basis and the Dicke Hamiltonian on it
//
//   H = hbar*omega a^+a + hbar*eps Jz
//     + G /sqrt(2J) (a J+  + a^+ J-)
//     + G'/sqrt(2J) (a^+ J+ + a J-)
//
// The basis is ordered lexicographically in (n, m), so the amplitude of |n, m>
// sits at n*(2J+1) + (m+J) and the boson partial trace is a strided sum.

#pragma once

#include <Eigen/Sparse>

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "dicke/params.hpp"

namespace dicke {

struct BasisState {
    int n{0};      // boson occupation
    double m{0.0}; // Jz eigenvalue, half-integer

    // N_exc = n + m + J
    long excitation(double j) const noexcept { return std::lround(n + m + j); }
    int parity(double j) const noexcept { return (excitation(j) % 2 == 0) ? +1 : -1; }

    friend bool operator==(const BasisState&, const BasisState&) = default;
};

class HilbertBasis {
public:
    HilbertBasis(double j, int n_max) : j_(j), n_max_(n_max) {
        if (!(j > 0.0) || !is_half_integer(j))
            throw invalid_input("build_basis: j must be a positive multiple of 1/2");
        if (n_max < 0) throw invalid_input("build_basis: n_max must be >= 0");
        const int d = spin_dim();
        states_.reserve(static_cast<std::size_t>(n_max + 1) * d);
        for (int n = 0; n <= n_max; ++n)
            for (int k = 0; k < d; ++k) states_.push_back({n, -j + k});
    }

    double j() const noexcept { return j_; }
    int n_max() const noexcept { return n_max_; }
    int spin_dim() const noexcept { return twice(j_) + 1; }
    std::size_t dim() const noexcept { return states_.size(); }
    const std::vector<BasisState>& states() const noexcept { return states_; }
    const BasisState& operator[](std::size_t i) const { return states_.at(i); }

    std::optional<std::size_t> index_of(const BasisState& s) const noexcept {
        if (s.n < 0 || s.n > n_max_) return std::nullopt;
        const double k = s.m + j_;
        if (k < -1e-9 || k > 2.0 * j_ + 1e-9 || !is_half_integer(s.m) ||
            std::abs(k - std::round(k)) > 1e-9)
            return std::nullopt;
        return static_cast<std::size_t>(s.n) * spin_dim() + static_cast<std::size_t>(std::lround(k));
    }

private:
    double j_;
    int n_max_;
    std::vector<BasisState> states_;
};

inline std::shared_ptr<const HilbertBasis> build_basis(double j, int n_max) {
    return std::make_shared<const HilbertBasis>(j, n_max);
}

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct HamiltonianMatrix {
    ModelParams params;
    std::shared_ptr<const HilbertBasis> basis;
    SparseMatrix entries;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries.rows()); }

    // max absolute row sum; bounds the spectral radius
    double norm_bound() const {
        double best = 0.0;
        for (Eigen::Index r = 0; r < entries.outerSize(); ++r) {
            double row = 0.0;
            for (SparseMatrix::InnerIterator it(entries, r); it; ++it) row += std::abs(it.value());
            best = std::max(best, row);
        }
        return best;
    }
};

// <m+1| J+ |m>
inline double raising_element(double j, double m) noexcept {
    return std::sqrt(std::max(0.0, j * (j + 1.0) - m * (m + 1.0)));
}

inline HamiltonianMatrix assemble_hamiltonian(const ModelParams& params,
                                              std::shared_ptr<const HilbertBasis> basis) {
    params.validate();
    if (!basis) throw invalid_input("assemble_hamiltonian: null basis");
    if (twice(params.j) != twice(basis->j()))
        throw invalid_input("assemble_hamiltonian: basis built for a different j");

    const double j = params.j;
    const double scale = 1.0 / std::sqrt(2.0 * j);
    const auto& states = basis->states();

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(states.size() * 5);
    auto couple = [&](std::size_t a, std::size_t b, double v) {
        if (v == 0.0) return;
        triplets.emplace_back(static_cast<int>(a), static_cast<int>(b), v);
        triplets.emplace_back(static_cast<int>(b), static_cast<int>(a), v);
    };

    for (std::size_t i = 0; i < states.size(); ++i) {
        const auto [n, m] = states[i];
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(i),
                              params.hbar * (params.omega * n + params.epsilon * m));
        if (m + 0.5 > j) continue; // J+ annihilates m = J
        const double jp = raising_element(j, m);
        // a J+ : |n, m> -> |n-1, m+1>
        if (n >= 1) {
            const auto k = basis->index_of({n - 1, m + 1.0});
            couple(i, *k, params.g * scale * std::sqrt(static_cast<double>(n)) * jp);
        }
        // a^+ J+ : |n, m> -> |n+1, m+1>
        if (n + 1 <= basis->n_max()) {
            const auto k = basis->index_of({n + 1, m + 1.0});
            couple(i, *k, params.g_prime * scale * std::sqrt(static_cast<double>(n + 1)) * jp);
        }
    }

    HamiltonianMatrix h{params, std::move(basis), SparseMatrix(static_cast<Eigen::Index>(states.size()),
                                                               static_cast<Eigen::Index>(states.size()))};
    h.entries.setFromTriplets(triplets.begin(), triplets.end());
    h.entries.makeCompressed();
    return h;
}

struct Block {
    long label{0}; // N_exc for excitation blocks, +1/-1 for parity blocks
    std::vector<std::size_t> indices;
};

// Partition by N_exc = n + m + J, ascending labels. For G' = 0 the Hamiltonian
// has no elements between different blocks.
inline std::vector<Block> excitation_blocks(const HilbertBasis& basis) {
    std::map<long, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < basis.dim(); ++i) by_label[basis[i].excitation(basis.j())].push_back(i);
    std::vector<Block> out;
    out.reserve(by_label.size());
    for (auto& [label, idx] : by_label) out.push_back({label, std::move(idx)});
    return out;
}

// Two blocks, parity +1 first. Conserved for every G, G'.
inline std::vector<Block> parity_blocks(const HilbertBasis& basis) {
    std::vector<Block> out{{+1, {}}, {-1, {}}};
    for (std::size_t i = 0; i < basis.dim(); ++i)
        out[basis[i].parity(basis.j()) > 0 ? 0 : 1].indices.push_back(i);
    return out;
}

// Dense principal submatrix H[idx, idx].
inline Eigen::MatrixXd extract_block(const HamiltonianMatrix& h, const std::vector<std::size_t>& idx) {
    std::vector<long> local(h.dim(), -1);
    for (std::size_t a = 0; a < idx.size(); ++a) local[idx[a]] = static_cast<long>(a);
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (SparseMatrix::InnerIterator it(h.entries, static_cast<Eigen::Index>(idx[a])); it; ++it) {
            const long b = local[static_cast<std::size_t>(it.col())];
            if (b >= 0) out(static_cast<Eigen::Index>(a), b) = it.value();
        }
    }
    return out;
}

// Sparse principal submatrix H[idx, idx].
inline SparseMatrix extract_sparse_block(const HamiltonianMatrix& h, const std::vector<std::size_t>& idx) {
    std::vector<long> local(h.dim(), -1);
    for (std::size_t a = 0; a < idx.size(); ++a) local[idx[a]] = static_cast<long>(a);
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(idx.size() * 5);
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (SparseMatrix::InnerIterator it(h.entries, static_cast<Eigen::Index>(idx[a])); it; ++it) {
            const long b = local[static_cast<std::size_t>(it.col())];
            if (b >= 0) triplets.emplace_back(static_cast<int>(a), static_cast<int>(b), it.value());
        }
    }
    const auto n = static_cast<Eigen::Index>(idx.size());
    SparseMatrix out(n, n);
    out.setFromTriplets(triplets.begin(), triplets.end());
    out.makeCompressed();
    return out;
}

// (rho_A)_{m m'} = sum_n c_{n,m} c_{n,m'} for a real state in the (n, m) ordering.
inline Eigen::MatrixXd trace_out_boson(const Eigen::VectorXd& state, int spin_dim) {
    if (spin_dim <= 0 || state.size() % spin_dim != 0)
        throw invalid_input("trace_out_boson: state length is not a multiple of 2J+1");
    const Eigen::Index rows = state.size() / spin_dim;
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> c(
        state.data(), rows, spin_dim);
    return c.transpose() * c;
}

} // namespace dicke
