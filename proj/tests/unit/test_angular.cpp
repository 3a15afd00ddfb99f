#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "dicke/angular.hpp"

using namespace dicke;

TEST(ClebschGordan, ScalarCoupling) {
    for (double j : {0.5, 1.0, 4.5, 10.5})
        for (double m = -j; m <= j; m += 1.0) EXPECT_NEAR(clebsch_gordan(j, m, 0, 0, j, m), 1.0, 1e-14);
}

TEST(ClebschGordan, FrozenTable) {
    // reference values from an exact symbolic evaluation
    struct Row {
        double j1, m1, j2, m2, j, m, value;
    };
    const Row rows[] = {
        {0.5, 0.5, 0.5, -0.5, 0, 0, 0.70710678118654757},
        {1, 1, 1, -1, 1, 0, 0.70710678118654757},
        {1.5, 0.5, 1, 0, 1.5, 0.5, 0.2581988897471611},
        {4.5, -2.5, 3, 1, 3.5, -1.5, -0.44038550605054422},
        {10.5, 1.5, 7, -2, 10.5, -0.5, 0.10110303691029207},
        {2, 1, 2, -1, 2, 0, 0.2672612419124244},
        {4.5, 4.5, 9, -9, 4.5, -4.5, 0.72547625011001171},
    };
    for (const auto& r : rows) EXPECT_NEAR(clebsch_gordan(r.j1, r.m1, r.j2, r.m2, r.j, r.m), r.value, 1e-13);
}

TEST(ClebschGordan, SelectionRules) {
    EXPECT_EQ(clebsch_gordan(1, 1, 1, 0, 1, 0), 0.0);     // m mismatch
    EXPECT_EQ(clebsch_gordan(1, 0, 1, 0, 3, 0), 0.0);     // triangle
    EXPECT_EQ(clebsch_gordan(1, 2, 1, -2, 1, 0), 0.0);    // |m1| > j1
    EXPECT_EQ(clebsch_gordan(0.5, 0, 0.5, 0, 1, 0), 0.0); // j1 + m1 not integer
    EXPECT_THROW(clebsch_gordan(0.3, 0.3, 1, 0, 1, 0.3), invalid_input);
}

TEST(ClebschGordan, Orthogonality) {
    for (double j1 : {1.0, 2.5}) {
        const double j2 = j1;
        for (double a = 0; a <= j1 + j2; ++a)
            for (double b = 0; b <= j1 + j2; ++b)
                for (double m = -std::min(a, b); m <= std::min(a, b); ++m) {
                    double sum = 0.0;
                    for (double m1 = -j1; m1 <= j1; ++m1)
                        sum += clebsch_gordan(j1, m1, j2, m - m1, a, m) * clebsch_gordan(j1, m1, j2, m - m1, b, m);
                    EXPECT_NEAR(sum, a == b ? 1.0 : 0.0, 1e-13) << j1 << " " << a << " " << b << " " << m;
                }
    }
}

TEST(SphericalHarmonics, MatchesStandardLibrary) {
    SphericalHarmonics y(21);
    std::vector<std::complex<double>> out;
    for (double theta : {0.0, 0.3, 1.1, 1.5707963, 2.4, 3.1}) {
        const double phi = 0.7;
        y.evaluate(std::cos(theta), std::sin(theta), phi, out);
        for (int l = 0; l <= 21; ++l)
            for (int m = 0; m <= l; ++m) {
                const double ref = std::sph_legendre(static_cast<unsigned>(l), static_cast<unsigned>(m), theta);
                const auto v = out[SphericalHarmonics::index(l, m)];
                EXPECT_NEAR(v.real(), ref * std::cos(m * phi), 1e-12) << l << " " << m;
                EXPECT_NEAR(v.imag(), ref * std::sin(m * phi), 1e-12) << l << " " << m;
                const auto neg = out[SphericalHarmonics::index(l, -m)];
                EXPECT_NEAR(std::abs(neg - (m % 2 ? -1.0 : 1.0) * std::conj(v)), 0.0, 1e-15);
            }
    }
}

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
    for (int n : {1, 2, 5, 12, 23}) {
        const auto [x, w] = gauss_legendre(n);
        ASSERT_EQ(x.size(), static_cast<std::size_t>(n));
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) sum += w[i] * std::pow(x[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            EXPECT_NEAR(sum, exact, 1e-13) << n << " " << d;
        }
        for (std::size_t i = 1; i < x.size(); ++i) EXPECT_LT(x[i - 1], x[i]);
    }
    EXPECT_THROW(gauss_legendre(0), invalid_input);
}
