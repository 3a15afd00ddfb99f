// wigner.hpp: atomic (spin-J) Wigner function on the planar (q1, p1) disk
//
// Kernel: W(theta, phi) = sqrt(4 pi / (2J+1)) sum_KQ rho_KQ Y_KQ(theta, phi)
// with rho_KQ = Tr(rho T_KQ^dagger) over orthonormal tensor operators.
//
// Plane map, scaled coordinates x = q1/sqrt(4J), y = p1/sqrt(4J):
//   cos(theta) = 2 (x^2 + y^2) - 1     (|J,-J> sits at the origin)
//   phi        = -atan2(x, y)
// The map is area-preserving, so the normalized measure
//   dmu = (2J+1)/(4 pi) dOmega = (2J+1)/pi dx dy
// makes both  int W dmu = 1  and  int W^2 dmu = Tr rho^2  hold.

#pragma once

#include <Eigen/Dense>

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dicke/angular.hpp"
#include "dicke/entanglement.hpp"
#include "dicke/parallel.hpp"
#include "dicke/params.hpp"

namespace dicke {

struct MultipoleDecomposition {
    double j{0.5};
    std::vector<std::complex<double>> components; // index K*K + K + Q

    int rank() const noexcept { return twice(j); } // K runs 0..2J
    static std::size_t index(int k, int q) noexcept { return static_cast<std::size_t>(k * k + k + q); }
    std::complex<double> at(int k, int q) const { return components.at(index(k, q)); }
};

// (T_KQ)_{m', m} for m' = m + Q; zero otherwise.
inline double tensor_element(double j, int k, int q, double m) {
    return std::sqrt((2.0 * k + 1.0) / (2.0 * j + 1.0)) * clebsch_gordan(j, m, k, q, j, m + q);
}

inline MultipoleDecomposition multipole_decompose(const DensityMatrix& rho) {
    rho.validate(1e-10);
    const double j = rho.j;
    const int d = rho.dim();
    MultipoleDecomposition out;
    out.j = j;
    out.components.assign(static_cast<std::size_t>(d * d), 0.0);
    for (int k = 0; k < d; ++k)
        for (int q = -k; q <= k; ++q) {
            std::complex<double> sum = 0.0;
            // Tr(rho T^dagger) = sum_{m} rho_{m+Q, m} T_{m+Q, m}  (T is real)
            for (int i = std::max(0, -q); i < std::min(d, d - q); ++i) {
                const double m = i - j;
                sum += rho.entries(i + q, i) * tensor_element(j, k, q, m);
            }
            out.components[MultipoleDecomposition::index(k, q)] = sum;
        }
    return out;
}

struct SpherePoint {
    double cos_theta;
    double sin_theta;
    double phi;
};

inline SpherePoint plane_to_sphere(double x, double y) {
    const double rho2 = x * x + y * y;
    if (!(rho2 < 1.0))
        throw invalid_input("wigner: point (" + std::to_string(x) + ", " + std::to_string(y) +
                            ") is outside the open unit disk");
    return {2.0 * rho2 - 1.0, 2.0 * std::sqrt(rho2 * (1.0 - rho2)), -std::atan2(x, y)};
}

// Evaluates W at sphere points, skipping vanishing multipoles.
class WignerKernel {
public:
    explicit WignerKernel(const MultipoleDecomposition& decomp, double zero_tol = 1e-15)
        : prefactor_(std::sqrt(4.0 * std::numbers::pi / (2.0 * decomp.j + 1.0))),
          harmonics_(decomp.rank()) {
        for (int k = 0; k <= decomp.rank(); ++k)
            for (int q = -k; q <= k; ++q) {
                const auto c = decomp.at(k, q);
                if (std::abs(c) > zero_tol) terms_.push_back({k, q, c});
            }
    }

    // Real part; the imaginary residue is returned through `imag` when requested.
    double operator()(const SpherePoint& s, double* imag = nullptr) {
        const auto& p = harmonics_.legendre(s.cos_theta, s.sin_theta);
        std::complex<double> w = 0.0;
        for (const auto& t : terms_) {
            // Y_{K,-Q} = (-1)^Q conj(Y_KQ)
            const int aq = std::abs(t.q);
            std::complex<double> y = p[SphericalHarmonics::index(t.k, aq)] * std::polar(1.0, aq * s.phi);
            if (t.q < 0) y = (aq % 2 ? -1.0 : 1.0) * std::conj(y);
            w += t.c * y;
        }
        if (imag) *imag = prefactor_ * w.imag();
        return prefactor_ * w.real();
    }

    double at_plane(double x, double y) { return (*this)(plane_to_sphere(x, y)); }

private:
    struct Term {
        int k, q;
        std::complex<double> c;
    };
    double prefactor_;
    SphericalHarmonics harmonics_;
    std::vector<Term> terms_;
};

inline double wigner_at(const MultipoleDecomposition& decomp, double x, double y) {
    WignerKernel kernel(decomp);
    return kernel.at_plane(x, y);
}

// Exact quadrature over the sphere: Gauss-Legendre in cos(theta), uniform in phi.
// W is a polynomial of degree <= 2J in cos(theta) times e^{iQ phi}, |Q| <= 2J,
// so these node counts integrate W and W^2 exactly.
template <class F>
double sphere_quadrature(double j, F&& integrand) {
    const int two_j = twice(j);
    const auto [nodes, weights] = gauss_legendre(two_j + 2);
    const int n_phi = 4 * two_j + 2;
    double total = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double c = nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        double ring = 0.0;
        for (int k = 0; k < n_phi; ++k) ring += integrand(SpherePoint{c, s, 2.0 * std::numbers::pi * k / n_phi});
        total += weights[i] * ring * (2.0 * std::numbers::pi / n_phi);
    }
    return total * (2.0 * j + 1.0) / (4.0 * std::numbers::pi);
}

inline double unit_integral(const MultipoleDecomposition& decomp) {
    WignerKernel kernel(decomp);
    return sphere_quadrature(decomp.j, [&](const SpherePoint& s) { return kernel(s); });
}

inline double squared_integral(const MultipoleDecomposition& decomp) {
    WignerKernel kernel(decomp);
    return sphere_quadrature(decomp.j, [&](const SpherePoint& s) {
        const double w = kernel(s);
        return w * w;
    });
}

struct GridSpec {
    int n{512};
    double radius{0.999}; // half-width of the square, scaled units

    void validate() const {
        if (n < 3) throw invalid_input("GridSpec: n must be >= 3");
        if (!(radius > 0.0 && radius < 1.0)) throw invalid_input("GridSpec: radius must lie in (0, 1)");
    }
    double cell() const noexcept { return 2.0 * radius / n; }
    double coord(int i) const noexcept { return -radius + (i + 0.5) * cell(); }
};

// Cell-centered samples of W over [-R, R]^2 in scaled coordinates; NaN outside the disk.
struct WignerGrid {
    double j{0.5};
    GridSpec spec;
    std::vector<double> values; // row-major: values[iy * n + ix]
    double max_imag_residue{0.0};
    MultipoleDecomposition decomposition;

    int n() const noexcept { return spec.n; }
    double h() const noexcept { return spec.cell(); }
    double x(int ix) const noexcept { return spec.coord(ix); }
    double y(int iy) const noexcept { return spec.coord(iy); }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * spec.n + ix]; }
    bool inside(int ix, int iy) const { return ix >= 0 && iy >= 0 && ix < spec.n && iy < spec.n && !std::isnan(at(ix, iy)); }
    // normalized measure of one cell
    double cell_measure() const noexcept { return (2.0 * j + 1.0) / std::numbers::pi * h() * h(); }
    // one cell in unscaled (q1, p1) units
    double cell_area() const noexcept { return 4.0 * j * h() * h(); }
    double max_value() const;
    double min_value() const;
};

inline double WignerGrid::max_value() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values)
        if (!std::isnan(v)) m = std::max(m, v);
    return m;
}

inline double WignerGrid::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values)
        if (!std::isnan(v)) m = std::min(m, v);
    return m;
}

inline WignerGrid evaluate_wigner_plane(const MultipoleDecomposition& decomp, const GridSpec& spec = {},
                                        unsigned threads = default_thread_count()) {
    spec.validate();
    WignerGrid grid;
    grid.j = decomp.j;
    grid.spec = spec;
    grid.decomposition = decomp;
    const int n = spec.n;
    grid.values.assign(static_cast<std::size_t>(n) * n, std::numeric_limits<double>::quiet_NaN());
    std::vector<double> row_residue(static_cast<std::size_t>(n), 0.0);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iy) {
        WignerKernel kernel(decomp);
        const double y = spec.coord(static_cast<int>(iy));
        for (int ix = 0; ix < n; ++ix) {
            const double x = spec.coord(ix);
            if (x * x + y * y >= 1.0) continue;
            double imag = 0.0;
            grid.values[iy * static_cast<std::size_t>(n) + static_cast<std::size_t>(ix)] =
                kernel(plane_to_sphere(x, y), &imag);
            row_residue[iy] = std::max(row_residue[iy], std::abs(imag));
        }
    });
    grid.max_imag_residue = *std::max_element(row_residue.begin(), row_residue.end());
    return grid;
}

inline MultipoleDecomposition wigner_decomposition(const EigenResult& gs) {
    return multipole_decompose(reduced_atomic_dm(gs));
}

// Riemann sum of W over the grid with the normalized measure.
inline double grid_integral(const WignerGrid& grid) {
    double sum = 0.0;
    for (double v : grid.values)
        if (!std::isnan(v)) sum += v;
    return sum * grid.cell_measure();
}

struct HalfHeightArea {
    double threshold{0.0}; // half of max W
    double area{0.0};      // unscaled (q1, p1) units, divided by hbar
    double per_atom{0.0};  // area / N
};

// Area of {W >= max/2}. Cells straddling the level get the fraction
// 0.5 + (W - level) / (|grad W| h), clamped to [0, 1].
inline HalfHeightArea half_height_area(const WignerGrid& grid, int n_atoms, double hbar = 1.0) {
    if (n_atoms < 1) throw invalid_input("half_height_area: n_atoms must be >= 1");
    if (!(hbar > 0.0)) throw invalid_input("half_height_area: hbar must be > 0");
    const double top = grid.max_value();
    const double bottom = grid.min_value();
    if (!(top > 0.0)) throw invalid_input("half_height_area: grid has no positive maximum");
    if (!(top - bottom > 1e-14 * std::abs(top))) throw invalid_input("half_height_area: grid is flat");

    HalfHeightArea out;
    out.threshold = 0.5 * top;
    const int n = grid.n();
    const double h = grid.h();
    double cells = 0.0;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            if (!grid.inside(ix, iy)) continue;
            const double w = grid.at(ix, iy);
            auto slope = [&](int dx, int dy) {
                const bool fwd = grid.inside(ix + dx, iy + dy), back = grid.inside(ix - dx, iy - dy);
                if (fwd && back) return (grid.at(ix + dx, iy + dy) - grid.at(ix - dx, iy - dy)) / (2.0 * h);
                if (fwd) return (grid.at(ix + dx, iy + dy) - w) / h;
                if (back) return (w - grid.at(ix - dx, iy - dy)) / h;
                return 0.0;
            };
            const double gx = slope(1, 0), gy = slope(0, 1);
            const double reach = std::hypot(gx, gy) * h;
            double frac;
            if (reach > 0.0 && std::abs(w - out.threshold) < reach)
                frac = std::clamp(0.5 + (w - out.threshold) / reach, 0.0, 1.0);
            else
                frac = w >= out.threshold ? 1.0 : 0.0;
            cells += frac;
        }
    out.area = cells * grid.cell_area() / hbar;
    out.per_atom = out.area / n_atoms;
    return out;
}

struct Negativity {
    double volume{0.0};        // int max(0, -W) dmu
    double min_value{0.0};
    double negative_area{0.0}; // unscaled (q1, p1) area of {W < 0}
};

inline Negativity negativity_volume(const WignerGrid& grid) {
    Negativity out;
    out.min_value = grid.min_value();
    std::size_t negative = 0;
    for (double v : grid.values)
        if (!std::isnan(v) && v < 0.0) {
            out.volume -= v;
            ++negative;
        }
    out.volume *= grid.cell_measure();
    out.negative_area = static_cast<double>(negative) * grid.cell_area();
    return out;
}

// Spread max - min of W over `samples` equally spaced angles on the scaled circle of radius r.
inline double azimuthal_variation(const MultipoleDecomposition& decomp, double r, int samples = 360) {
    WignerKernel kernel(decomp);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int k = 0; k < samples; ++k) {
        const double a = 2.0 * std::numbers::pi * k / samples;
        const double w = kernel.at_plane(r * std::sin(a), r * std::cos(a));
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    return hi - lo;
}

struct RidgeOptions {
    double symmetry_tol{1e-8}; // on azimuthal variation, relative to max |W|
    int coarse_samples{2000};
};

// Scaled radius maximizing the azimuthal average of W. Azimuthally
// symmetric states only: others are rejected in favour of local_maxima.
inline double ridge_radius(const WignerGrid& grid, const RidgeOptions& opts = {}) {
    const auto& decomp = grid.decomposition;
    const double r_max = grid.spec.radius;
    WignerKernel kernel(decomp);
    const double scale = std::max(std::abs(grid.max_value()), std::abs(grid.min_value()));
    for (double r : {0.1, 0.3, 0.5, 0.7, 0.9})
        if (r < r_max && azimuthal_variation(decomp, r) > opts.symmetry_tol * scale)
            throw invalid_input("ridge_radius: Wigner function is not azimuthally symmetric; use local_maxima");

    auto profile = [&](double r) { return kernel.at_plane(0.0, r); };
    int best = 0;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= opts.coarse_samples; ++i) {
        const double v = profile(r_max * i / opts.coarse_samples);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    if (best == 0) return 0.0;
    const double lo = r_max * (best - 1) / opts.coarse_samples;
    const double hi = r_max * std::min(best + 1, opts.coarse_samples) / opts.coarse_samples;
    const auto found =
        boost::math::tools::brent_find_minima([&](double r) { return -profile(r); }, lo, hi, 40);
    return found.first;
}

struct LocalMaximum {
    double x{0.0}, y{0.0}; // scaled coordinates of the plateau centroid
    double value{0.0};
    std::size_t cells{0};
};

// Cells not below any of their 8 neighbours (all neighbours inside the disk),
// with touching cells merged into one maximum. Sorted by value, largest first.
// Ripples of the finite-J kernel below min_relative_height * max W are dropped.
inline std::vector<LocalMaximum> local_maxima(const WignerGrid& grid, double min_relative_height = 0.01) {
    const int n = grid.n();
    const double floor = min_relative_height * grid.max_value();
    std::vector<char> candidate(static_cast<std::size_t>(n) * n, 0);
    for (int iy = 1; iy + 1 < n; ++iy)
        for (int ix = 1; ix + 1 < n; ++ix) {
            if (!grid.inside(ix, iy)) continue;
            const double w = grid.at(ix, iy);
            bool peak = true;
            for (int dy = -1; dy <= 1 && peak; ++dy)
                for (int dx = -1; dx <= 1 && peak; ++dx) {
                    if (!dx && !dy) continue;
                    if (!grid.inside(ix + dx, iy + dy) || grid.at(ix + dx, iy + dy) > w) peak = false;
                }
            if (peak && w >= floor) candidate[static_cast<std::size_t>(iy) * n + ix] = 1;
        }

    std::vector<LocalMaximum> out;
    std::vector<std::pair<int, int>> stack;
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            if (!candidate[static_cast<std::size_t>(iy) * n + ix]) continue;
            LocalMaximum m;
            m.value = -std::numeric_limits<double>::infinity();
            stack.assign(1, {ix, iy});
            candidate[static_cast<std::size_t>(iy) * n + ix] = 0;
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                m.x += grid.x(cx);
                m.y += grid.y(cy);
                m.value = std::max(m.value, grid.at(cx, cy));
                ++m.cells;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= n || ny >= n) continue;
                        auto& flag = candidate[static_cast<std::size_t>(ny) * n + nx];
                        if (flag) {
                            flag = 0;
                            stack.push_back({nx, ny});
                        }
                    }
            }
            m.x /= static_cast<double>(m.cells);
            m.y /= static_cast<double>(m.cells);
            out.push_back(m);
        }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.value > b.value; });
    return out;
}

} // namespace dicke
