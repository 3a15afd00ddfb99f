// params.hpp: model constants, derived couplings, scan modes and error types

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dicke {

// Thrown for physically or structurally invalid inputs (bad J, negative couplings, ...).
class invalid_input : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical failure: an iterative method did not reach its tolerance.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& what, std::size_t iterations)
        : std::runtime_error(what + " (after " + std::to_string(iterations) + " iterations)")
        , iterations_(iterations) {}

    std::size_t iterations() const noexcept { return iterations_; }

private:
    std::size_t iterations_;
};

// Evaluation outside the classical phase-space domain q1^2 + p1^2 < 4J.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Returns true if x is an integer multiple of 1/2 (within rounding of typed-in values).
inline bool is_half_integer(double x) noexcept {
    const double twice = 2.0 * x;
    return std::isfinite(x) && std::abs(twice - std::round(twice)) < 1e-9;
}

// Number of 1/2 units in x, i.e. round(2x). Caller checks is_half_integer first.
inline int twice(double x) noexcept { return static_cast<int>(std::lround(2.0 * x)); }

struct ModelParams {
    double omega{1.0};     // field frequency
    double epsilon{1.0};   // atomic level splitting
    double g{0.0};         // co-rotating coupling G
    double g_prime{0.0};   // counter-rotating coupling G'
    double j{0.5};         // collective spin, N = 2J atoms
    double hbar{1.0};

    double g_plus() const noexcept { return g + g_prime; }
    double g_minus() const noexcept { return g - g_prime; }
    double lambda() const noexcept { return g / epsilon; }
    double lambda_plus() const noexcept { return g_plus() / epsilon; }
    double lambda_minus() const noexcept { return g_minus() / epsilon; }
    int atoms() const noexcept { return twice(j); }
    int spin_dim() const noexcept { return twice(j) + 1; }
    bool integrable() const noexcept { return g_prime == 0.0; }

    void validate() const {
        if (!(omega > 0.0) || !std::isfinite(omega))
            throw invalid_input("ModelParams: omega must be > 0");
        if (!(epsilon > 0.0) || !std::isfinite(epsilon))
            throw invalid_input("ModelParams: epsilon must be > 0");
        if (!(g >= 0.0) || !std::isfinite(g))
            throw invalid_input("ModelParams: g must be >= 0");
        if (!(g_prime >= 0.0) || !std::isfinite(g_prime))
            throw invalid_input("ModelParams: g_prime must be >= 0");
        if (!(hbar > 0.0) || !std::isfinite(hbar))
            throw invalid_input("ModelParams: hbar must be > 0");
        if (!(j > 0.0) || !is_half_integer(j))
            throw invalid_input("ModelParams: j must be a positive multiple of 1/2 (got " +
                                std::to_string(j) + ")");
    }
};

// How a scan coupling value maps onto (G, G').
//   integrable: G = lambda*eps, G' = 0
//   symmetric:  G = G' = lambda_plus*eps/2   (grid variable is lambda_plus)
//   custom:     G = lambda*eps, G' fixed at the template value
enum class ScanMode { integrable, symmetric, custom };

inline std::string_view to_string(ScanMode m) noexcept {
    switch (m) {
    case ScanMode::integrable: return "integrable";
    case ScanMode::symmetric: return "symmetric";
    case ScanMode::custom: return "custom";
    }
    return "custom";
}

inline ScanMode parse_scan_mode(std::string_view s) {
    if (s == "integrable") return ScanMode::integrable;
    if (s == "symmetric") return ScanMode::symmetric;
    if (s == "custom") return ScanMode::custom;
    throw invalid_input("unknown mode '" + std::string(s) + "' (expected integrable|symmetric|custom)");
}

// start, start+step, ..., up to end inclusive (end is hit when (end-start)/step
// is within 1e-9 of an integer). Points are start + i*step, never accumulated.
inline std::vector<double> make_grid(double start, double end, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw invalid_input("grid step must be > 0");
    if (!(end >= start)) throw invalid_input("grid end must be >= start");
    const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = start + static_cast<double>(i) * step;
    return out;
}

inline ModelParams params_at(ModelParams tmpl, ScanMode mode, double coupling) {
    switch (mode) {
    case ScanMode::integrable:
        tmpl.g = coupling * tmpl.epsilon;
        tmpl.g_prime = 0.0;
        break;
    case ScanMode::symmetric:
        tmpl.g = 0.5 * coupling * tmpl.epsilon;
        tmpl.g_prime = tmpl.g;
        break;
    case ScanMode::custom:
        tmpl.g = coupling * tmpl.epsilon;
        break;
    }
    return tmpl;
}

} // namespace dicke
