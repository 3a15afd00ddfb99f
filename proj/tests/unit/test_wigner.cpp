#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dicke/classical.hpp"
#include "dicke/wigner.hpp"

using namespace dicke;

namespace {

ModelParams resonant(double j, double g, double g_prime) {
    ModelParams p;
    p.j = j;
    p.g = g;
    p.g_prime = g_prime;
    return p;
}

EigenResult ground(const ModelParams& p) {
    return solve_ground_state(p, converge_truncation(p, ScanMode::custom, p.lambda(), 1e-10));
}

DensityMatrix random_dm(double j, std::mt19937& rng) {
    const int d = twice(j) + 1;
    std::normal_distribution<double> n01;
    Eigen::MatrixXcd a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) a(r, c) = {n01(rng), n01(rng)};
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace();
    return {j, rho};
}

} // namespace

TEST(Multipoles, MaximallyMixedIsScalar) {
    const double j = 2.5;
    const auto d = multipole_decompose({j, Eigen::MatrixXcd::Identity(6, 6) / 6.0});
    for (int k = 0; k <= d.rank(); ++k)
        for (int q = -k; q <= k; ++q) {
            if (k == 0) {
                EXPECT_NEAR(d.at(0, 0).real(), 1.0 / std::sqrt(6.0), 1e-15);
            } else {
                EXPECT_LT(std::abs(d.at(k, q)), 1e-15);
            }
        }
}

TEST(Multipoles, DiagonalCouplesOnlyToZeroQ) {
    const double j = 4.5;
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(10, 10);
    rho(0, 0) = rho(1, 1) = 0.5;
    const auto d = multipole_decompose({j, rho});
    for (int k = 0; k <= d.rank(); ++k)
        for (int q = -k; q <= k; ++q) {
            if (q != 0) {
                EXPECT_LT(std::abs(d.at(k, q)), 1e-15);
            }
        }
}

TEST(Multipoles, ParsevalAndHermiticity) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const double j = 0.5 * (1 + trial % 9);
        const auto rho = random_dm(j, rng);
        const auto d = multipole_decompose(rho);
        double sum = 0.0;
        for (const auto& c : d.components) sum += std::norm(c);
        EXPECT_NEAR(sum, linear_entropy(rho).purity, 1e-10);
        for (int k = 0; k <= d.rank(); ++k)
            for (int q = 1; q <= k; ++q)
                EXPECT_LT(std::abs(d.at(k, -q) - (q % 2 ? -1.0 : 1.0) * std::conj(d.at(k, q))), 1e-12);
    }
}

TEST(Multipoles, ReconstructsDensityMatrix) {
    // rho = sum_KQ rho_KQ T_KQ
    std::mt19937 rng(9);
    const double j = 1.5;
    const auto rho = random_dm(j, rng);
    const auto d = multipole_decompose(rho);
    Eigen::MatrixXcd back = Eigen::MatrixXcd::Zero(4, 4);
    for (int k = 0; k <= 3; ++k)
        for (int q = -k; q <= k; ++q)
            for (int i = 0; i < 4; ++i) {
                if (i + q < 0 || i + q >= 4) continue;
                back(i + q, i) += d.at(k, q) * tensor_element(j, k, q, i - j);
            }
    EXPECT_LT((back - rho.entries).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(WignerIdentities, UnitIntegralAndParseval) {
    std::mt19937 rng(5);
    for (double j : {0.5, 1.5, 4.5, 7.5}) {
        const auto rho = random_dm(j, rng);
        const auto d = multipole_decompose(rho);
        EXPECT_NEAR(unit_integral(d), 1.0, 1e-12);
        EXPECT_NEAR(squared_integral(d), linear_entropy(rho).purity, 1e-12);
    }
}

TEST(WignerIdentities, GridQuadratureApproachesUnity) {
    const auto d = wigner_decomposition(ground(resonant(4.5, 1.5, 0)));
    const auto grid = evaluate_wigner_plane(d, {256, 0.999}, 1);
    EXPECT_NEAR(grid_integral(grid), 1.0, 1e-4);
    EXPECT_LT(grid.max_imag_residue, 1e-12);
}

TEST(WignerPlane, CoherentStatePeaksAtOrigin) {
    // |J,-J> sits at the plane origin
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(10, 10);
    rho(0, 0) = 1.0;
    const auto d = multipole_decompose({4.5, rho});
    EXPECT_GT(wigner_at(d, 0, 0), wigner_at(d, 0.3, 0.1));
    const auto grid = evaluate_wigner_plane(d, {101, 0.95}, 1);
    const auto peaks = local_maxima(grid);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_NEAR(peaks[0].x, 0.0, 1e-12);
    EXPECT_NEAR(peaks[0].y, 0.0, 1e-12);
    EXPECT_EQ(ridge_radius(grid), 0.0);
    EXPECT_THROW(wigner_at(d, 0.8, 0.6), invalid_input);
}

TEST(WignerPlane, BelowCriticalSinglePeak) {
    for (const auto& p : {resonant(4.5, 0.5, 0), resonant(4.5, 0.3, 0.3)}) {
        const auto grid = evaluate_wigner_plane(wigner_decomposition(ground(p)), {128, 0.999}, 1);
        const auto peaks = local_maxima(grid);
        ASSERT_EQ(peaks.size(), 1u);
        EXPECT_LT(std::hypot(peaks[0].x, peaks[0].y), grid.h());
    }
}

TEST(WignerPlane, IntegrableRingIsAzimuthal) {
    const auto d = wigner_decomposition(ground(resonant(4.5, 1.5, 0)));
    const auto grid = evaluate_wigner_plane(d, {128, 0.999}, 1);
    const double r = ridge_radius(grid);
    EXPECT_GT(r, 0.3);
    EXPECT_LT(r, 0.999);
    EXPECT_LT(azimuthal_variation(d, r), 1e-8);
}

TEST(WignerPlane, RidgeIsNotTheClassicalRadius) {
    const auto d = wigner_decomposition(ground(resonant(10.5, 1.5, 0)));
    const double r = ridge_radius(evaluate_wigner_plane(d, {128, 0.999}, 1));
    const double classical = std::sqrt((1.0 - 1.0 / 2.25) / 2.0);
    EXPECT_NEAR(classical, 0.527, 1e-3);
    EXPECT_GT(std::abs(r - classical), 1e-3);
}

TEST(WignerPlane, SymmetricPairOfPeaks) {
    const ModelParams p = resonant(4.5, 0.75, 0.75);
    const auto grid = evaluate_wigner_plane(wigner_decomposition(ground(p)), {256, 0.999}, 1);
    const auto peaks = local_maxima(grid);
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].x, 0.0, 1e-12);
    EXPECT_NEAR(peaks[1].x, 0.0, 1e-12);
    EXPECT_NEAR(peaks[0].y, -peaks[1].y, 1e-12);
    EXPECT_NEAR(peaks[0].value, peaks[1].value, 1e-10);
    // same side of the plane as the classical pitchfork pair
    EXPECT_NEAR(std::abs(peaks[0].y), std::sqrt(5.0 / 18.0), 0.05);
    const int n = grid.n();
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (grid.inside(ix, iy)) {
                EXPECT_NEAR(grid.at(ix, iy), grid.at(ix, n - 1 - iy), 1e-12);
            }
    EXPECT_THROW(ridge_radius(grid), invalid_input);
}

TEST(Diagnostics, HalfHeightAreaOfCoherentState) {
    // |J,-J>: W depends on cos(theta) only, so the half-height set is a disk;
    // its radius is found from the exact profile by bisection.
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(10, 10);
    rho(0, 0) = 1.0;
    const auto d = multipole_decompose({4.5, rho});
    const double top = wigner_at(d, 0, 0);
    double lo = 0.0, hi = 0.9;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        (wigner_at(d, 0, mid) > 0.5 * top ? lo : hi) = mid;
    }
    const double exact = std::numbers::pi * lo * lo * 18.0; // unscaled area, 4J = 18
    const auto grid = evaluate_wigner_plane(d, {512, 0.999}, 1);
    const auto a = half_height_area(grid, 9);
    EXPECT_NEAR(a.area, exact, 1e-3 * exact);
    EXPECT_NEAR(a.per_atom, a.area / 9, 1e-15);
}

TEST(Diagnostics, HalfHeightSelfConvergence) {
    const auto d = wigner_decomposition(ground(resonant(4.5, 1.5, 0)));
    const double coarse = half_height_area(evaluate_wigner_plane(d, {256, 0.999}, 1), 10).area;
    const double fine = half_height_area(evaluate_wigner_plane(d, {512, 0.999}, 1), 10).area;
    EXPECT_LT(std::abs(coarse - fine) / fine, 0.01);
}

TEST(Diagnostics, RejectsDegenerateGrids) {
    WignerGrid flat;
    flat.j = 1.5;
    flat.spec = {4, 0.5};
    flat.values.assign(16, 0.25);
    EXPECT_THROW(half_height_area(flat, 3), invalid_input);
    flat.values.assign(16, -0.25);
    EXPECT_THROW(half_height_area(flat, 3), invalid_input);
    EXPECT_THROW(GridSpec({512, 1.0}).validate(), invalid_input);
    EXPECT_THROW(GridSpec({2, 0.5}).validate(), invalid_input);
}

TEST(Diagnostics, NegativityOrdering) {
    const auto integrable = evaluate_wigner_plane(wigner_decomposition(ground(resonant(4.5, 1.5, 0))), {256, 0.999}, 1);
    const auto symmetric = evaluate_wigner_plane(wigner_decomposition(ground(resonant(4.5, 0.75, 0.75))), {256, 0.999}, 1);
    const auto a = negativity_volume(integrable), b = negativity_volume(symmetric);
    EXPECT_LT(a.min_value, 0.0);
    EXPECT_LT(b.min_value, 0.0);
    EXPECT_LT(a.min_value, b.min_value);
    EXPECT_GT(b.negative_area, a.negative_area);
    EXPECT_GT(a.volume, 0.0);

    WignerGrid positive;
    positive.j = 0.5;
    positive.spec = {3, 0.5};
    positive.values.assign(9, 0.1);
    const auto n = negativity_volume(positive);
    EXPECT_EQ(n.volume, 0.0);
    EXPECT_GE(n.min_value, 0.0);
}

TEST(Diagnostics, ThreadCountDoesNotChangeGrid) {
    const auto d = wigner_decomposition(ground(resonant(2.5, 0.6, 0.6)));
    const auto a = evaluate_wigner_plane(d, {64, 0.999}, 1);
    const auto b = evaluate_wigner_plane(d, {64, 0.999}, 3);
    for (std::size_t i = 0; i < a.values.size(); ++i)
        if (!std::isnan(a.values[i])) {
            EXPECT_EQ(a.values[i], b.values[i]);
        }
}
