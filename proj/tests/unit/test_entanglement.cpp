#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dicke/entanglement.hpp"

using namespace dicke;

namespace {

ModelParams resonant(double j, double g, double g_prime) {
    ModelParams p;
    p.j = j;
    p.g = g;
    p.g_prime = g_prime;
    return p;
}

DensityMatrix diagonal(double j, std::vector<double> d) {
    DensityMatrix rho{j, Eigen::MatrixXcd::Zero(twice(j) + 1, twice(j) + 1)};
    for (std::size_t i = 0; i < d.size(); ++i) rho.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return rho;
}

} // namespace

TEST(ReducedDm, ProductState) {
    const double j = 2.5;
    const auto basis = build_basis(j, 3);
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->dim()));
    psi[0] = 1.0;
    const auto rho = reduced_atomic_dm(psi, *basis);
    EXPECT_EQ(rho.dim(), 6);
    EXPECT_EQ(rho.entries(0, 0), std::complex<double>(1.0));
    EXPECT_EQ(rho.entries.cwiseAbs().sum(), 1.0);
    EXPECT_NEAR(linear_entropy(rho).entropy, 0.0, 1e-15);
}

TEST(ReducedDm, FirstJumpState) {
    const double j = 4.5;
    const auto basis = build_basis(j, 3);
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis->dim()));
    psi[static_cast<Eigen::Index>(*basis->index_of({1, -j}))] = 1.0 / std::sqrt(2.0);
    psi[static_cast<Eigen::Index>(*basis->index_of({0, -j + 1}))] = 1.0 / std::sqrt(2.0);
    const auto rho = reduced_atomic_dm(psi, *basis);
    EXPECT_NEAR(rho.entries(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rho.entries(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rho.entries(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(linear_entropy(rho).entropy, 0.5, 1e-15);
    rho.validate();
}

TEST(ReducedDm, IntegrableGroundStateIsDiagonal) {
    const auto gs = ground_state_blockwise(resonant(4.5, 1.5, 0), 60);
    const auto rho = reduced_atomic_dm(gs);
    Eigen::MatrixXcd off = rho.entries;
    off.diagonal().setZero();
    EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-14);
    rho.validate();
}

TEST(ReducedDm, DimensionMismatch) {
    const auto basis = build_basis(1.5, 2);
    EXPECT_THROW(reduced_atomic_dm(Eigen::VectorXd::Ones(7), *basis), invalid_input);
}

TEST(LinearEntropy, ReferenceStates) {
    EXPECT_NEAR(linear_entropy(diagonal(4.5, {0.5, 0.5})).entropy, 0.5, 1e-15);
    for (double j : {0.5, 1.5, 4.5, 7.5}) {
        const int d = twice(j) + 1;
        const auto mixed = diagonal(j, std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
        const auto r = linear_entropy(mixed);
        EXPECT_NEAR(r.purity, 1.0 / d, 1e-15);
        EXPECT_NEAR(r.entropy, 1.0 - 1.0 / d, 1e-15);
    }
    // pure but not diagonal
    Eigen::VectorXcd v(3);
    v << 0.6, std::complex<double>(0.0, 0.8), 0.0;
    DensityMatrix pure{1.0, v * v.adjoint()};
    pure.validate();
    EXPECT_NEAR(linear_entropy(pure).entropy, 0.0, 1e-15);
}

TEST(LinearEntropy, ValidateRejectsBadMatrices) {
    EXPECT_THROW(diagonal(1.0, {0.5, 0.4, 0.0}).validate(), invalid_input); // trace
    EXPECT_THROW(diagonal(1.0, {1.2, -0.2, 0.0}).validate(), invalid_input); // negative
    DensityMatrix wrong{1.5, Eigen::MatrixXcd::Identity(3, 3) / 3.0};
    EXPECT_THROW(wrong.validate(), invalid_input);
}

TEST(Participation, CountsContributingStates) {
    EXPECT_EQ(participation_count(ground_state_blockwise(resonant(4.5, 0.8, 0), 20)), 1u);
    EXPECT_EQ(participation_count(ground_state_blockwise(resonant(4.5, 1.001, 0), 20)), 2u);
    std::mt19937 rng(7);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::VectorXd v(30);
        for (auto& x : v) x = n01(rng);
        v.normalize();
        EXPECT_LE(participation_count(v, 0.9), 1u);
    }
    EXPECT_THROW(participation_count(Eigen::VectorXd::Ones(2), 0.0), invalid_input);
    EXPECT_THROW(participation_count(Eigen::VectorXd::Ones(2), 1.0), invalid_input);
}

TEST(EntropyScan, IntegrableBelowAndAboveCritical) {
    const ModelParams tmpl = resonant(4.5, 0, 0);
    const auto below = entropy_scan(tmpl, {0.5, 0.9, 0.99}, ScanMode::integrable);
    for (const auto& row : below.rows) {
        EXPECT_EQ(row.entropy, 0.0);
        EXPECT_EQ(row.participation, 1u);
    }
    const auto above = entropy_scan(tmpl, {1.001}, ScanMode::integrable);
    EXPECT_NEAR(above.rows[0].entropy, 0.5, 1e-6);
    EXPECT_EQ(above.rows[0].block_label, 1);
}

TEST(EntropyScan, ExactTieReportsBothLimits) {
    const auto scan = entropy_scan(resonant(4.5, 0, 0), {1.0}, ScanMode::integrable, {.n_max = 20});
    EXPECT_TRUE(scan.rows[0].degenerate);
    EXPECT_EQ(scan.rows[0].entropy, 0.0);
    EXPECT_NEAR(scan.rows[0].entropy_right, 0.5, 1e-12);
}

TEST(EntropyScan, StaircaseMonotoneAndBounded) {
    const double j = 1.5;
    const auto scan = entropy_scan(resonant(j, 0, 0), make_grid(0.0, 3.0, 0.02), ScanMode::integrable);
    for (std::size_t i = 1; i < scan.rows.size(); ++i)
        EXPECT_GE(scan.rows[i].entropy, scan.rows[i - 1].entropy - 1e-12) << scan.rows[i].lambda;
    for (const auto& row : scan.rows) {
        EXPECT_GE(row.entropy, 0.0);
        EXPECT_LE(row.entropy, 1.0 - 1.0 / (2 * j + 1) + 1e-12);
    }
}

TEST(EntropyScan, SymmetricRowsArePhysical) {
    ScanOptions opts;
    opts.truncation_tol = 1e-8;
    const auto scan = entropy_scan(resonant(2.5, 0, 0), make_grid(0.2, 1.6, 0.2), ScanMode::symmetric, opts);
    for (const auto& row : scan.rows) {
        EXPECT_NEAR(row.lambda_plus, 2 * row.lambda, 1e-15);
        EXPECT_GE(row.entropy, -1e-12);
        EXPECT_LE(row.entropy, 1.0 - 1.0 / 6.0 + 1e-12);
    }
    // full symmetric-mode state keeps a unit-trace reduced matrix
    const auto gs = solve_ground_state(params_at(resonant(2.5, 0, 0), ScanMode::symmetric, 1.4), scan.n_max);
    const auto rho = reduced_atomic_dm(gs);
    rho.validate();
    EXPECT_LE(linear_entropy(rho).purity, 1.0 + 1e-12);
}

TEST(EntropyScan, DeterministicAcrossThreadCounts) {
    const auto grid = make_grid(0.5, 1.5, 0.1);
    ScanOptions one, many;
    one.threads = 1;
    many.threads = 4;
    one.n_max = many.n_max = 30;
    const auto a = entropy_scan(resonant(2.5, 0, 0), grid, ScanMode::symmetric, one);
    const auto b = entropy_scan(resonant(2.5, 0, 0), grid, ScanMode::symmetric, many);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].entropy, b.rows[i].entropy);
        EXPECT_EQ(a.rows[i].energy, b.rows[i].energy);
    }
}

TEST(EntropyScan, RejectsBadGrid) {
    EXPECT_THROW(entropy_scan(resonant(1.5, 0, 0), {0.5, 0.5}, ScanMode::integrable), invalid_input);
    EXPECT_THROW(entropy_scan(resonant(1.5, 0, 0), {}, ScanMode::integrable), invalid_input);
    EXPECT_THROW(make_grid(0, 1, 0), invalid_input);
}
