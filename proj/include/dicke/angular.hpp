// angular.hpp: Clebsch-Gordan coefficients, spherical harmonics, Gauss-Legendre rule

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dicke/params.hpp"

namespace dicke {

namespace detail {

inline long double factorial(int n) {
    long double f = 1.0L;
    for (int k = 2; k <= n; ++k) f *= static_cast<long double>(k);
    return f;
}

// exact integer test for a doubled angular-momentum value
inline int doubled(double x, const char* what) {
    const double t = 2.0 * x;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) throw invalid_input(std::string("clebsch_gordan: ") + what + " is not a half-integer");
    return static_cast<int>(r);
}

} // namespace detail

// <j1 m1; j2 m2 | j m> with the Condon-Shortley phase (Racah's closed form).
// Returns 0 unless the triangle rule holds, m = m1 + m2 and every |m| <= its j.
inline double clebsch_gordan(double j1, double m1, double j2, double m2, double j, double m) {
    const int tj1 = detail::doubled(j1, "j1"), tm1 = detail::doubled(m1, "m1");
    const int tj2 = detail::doubled(j2, "j2"), tm2 = detail::doubled(m2, "m2");
    const int tj = detail::doubled(j, "j"), tm = detail::doubled(m, "m");
    if (tj1 < 0 || tj2 < 0 || tj < 0) return 0.0;
    if (tm1 + tm2 != tm) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tm) > tj) return 0.0;
    if ((tj1 + tm1) % 2 || (tj2 + tm2) % 2 || (tj + tm) % 2) return 0.0;
    if (tj < std::abs(tj1 - tj2) || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2) return 0.0;

    // all quantities below are integers
    const int a = (tj1 + tj2 - tj) / 2, b = (tj1 - tj2 + tj) / 2, c = (-tj1 + tj2 + tj) / 2;
    const int s = (tj1 + tj2 + tj) / 2 + 1;
    const int p1 = (tj1 + tm1) / 2, q1 = (tj1 - tm1) / 2;
    const int p2 = (tj2 + tm2) / 2, q2 = (tj2 - tm2) / 2;
    const int p = (tj + tm) / 2, q = (tj - tm) / 2;

    using detail::factorial;
    const long double prefactor = std::sqrt(static_cast<long double>(tj + 1) * factorial(a) * factorial(b) *
                                            factorial(c) / factorial(s)) *
                                  std::sqrt(factorial(p1) * factorial(q1) * factorial(p2) * factorial(q2) *
                                            factorial(p) * factorial(q));
    const int k_min = std::max({0, (tj2 - tj - tm1) / 2, (tj1 - tj + tm2) / 2});
    const int k_max = std::min({a, q1, p2});
    long double sum = 0.0L;
    for (int k = k_min; k <= k_max; ++k) {
        const long double term = factorial(k) * factorial(a - k) * factorial(q1 - k) * factorial(p2 - k) *
                                 factorial((tj - tj2 + tm1) / 2 + k) * factorial((tj - tj1 - tm2) / 2 + k);
        sum += (k % 2 ? -1.0L : 1.0L) / term;
    }
    return static_cast<double>(prefactor * sum);
}

// Orthonormal spherical harmonics Y_lm(theta, phi), l = 0..l_max, m = -l..l,
// stored at index l*l + l + m. Condon-Shortley phase.
class SphericalHarmonics {
public:
    explicit SphericalHarmonics(int l_max) : l_max_(l_max) {
        if (l_max < 0) throw invalid_input("SphericalHarmonics: l_max must be >= 0");
        a_.assign(size(), 0.0);
        b_.assign(size(), 0.0);
        for (int m = 0; m <= l_max; ++m)
            for (int l = m + 2; l <= l_max; ++l) {
                const double l2 = double(l) * l, m2 = double(m) * m, lm1 = double(l - 1) * (l - 1);
                a_[index(l, m)] = std::sqrt((4.0 * l2 - 1.0) / (l2 - m2));
                b_[index(l, m)] = std::sqrt((lm1 - m2) / (4.0 * lm1 - 1.0));
            }
        legendre_.assign(size(), 0.0);
    }

    int l_max() const noexcept { return l_max_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>((l_max_ + 1) * (l_max_ + 1)); }
    static std::size_t index(int l, int m) noexcept { return static_cast<std::size_t>(l * l + l + m); }

    // Normalized associated Legendre values, Y_lm(theta, 0) for m >= 0.
    const std::vector<double>& legendre(double cos_theta, double sin_theta) {
        auto& p = legendre_;
        double pmm = 0.5 / std::sqrt(std::numbers::pi);
        for (int m = 0; m <= l_max_; ++m) {
            if (m > 0) pmm *= -std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * sin_theta;
            p[index(m, m)] = pmm;
            if (m + 1 > l_max_) continue;
            p[index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * cos_theta * pmm;
            for (int l = m + 2; l <= l_max_; ++l)
                p[index(l, m)] = a_[index(l, m)] * (cos_theta * p[index(l - 1, m)] - b_[index(l, m)] * p[index(l - 2, m)]);
        }
        return p;
    }

    // Fills out[index(l, m)] = Y_lm(theta, phi) for all l, m.
    void evaluate(double cos_theta, double sin_theta, double phi, std::vector<std::complex<double>>& out) {
        out.resize(size());
        const auto& p = legendre(cos_theta, sin_theta);
        for (int m = 0; m <= l_max_; ++m) {
            const std::complex<double> e = std::polar(1.0, m * phi);
            const double sign = m % 2 ? -1.0 : 1.0; // Y_{l,-m} = (-1)^m conj(Y_lm)
            for (int l = m; l <= l_max_; ++l) {
                const std::complex<double> y = p[index(l, m)] * e;
                out[index(l, m)] = y;
                if (m > 0) out[index(l, -m)] = sign * std::conj(y);
            }
        }
    }

private:
    int l_max_;
    std::vector<double> a_, b_, legendre_;
};

// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    if (n < 1) throw invalid_input("gauss_legendre: need at least one node");
    std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const auto lo = static_cast<std::size_t>(i), hi = static_cast<std::size_t>(n - 1 - i);
        x[lo] = -z;
        x[hi] = z;
        w[lo] = w[hi] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return {x, w};
}

} // namespace dicke
