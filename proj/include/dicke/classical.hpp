// classical.hpp: coherent-state (mean-field) limit of the Dicke Hamiltonian
//
//   H(q1,p1,q2,p2) = omega/2 (q2^2+p2^2) + eps/2 (q1^2+p1^2) - eps J
//                  + sqrt(4J - q1^2 - p1^2)/sqrt(4J) (G+ p1 p2 + G- q1 q2)
//
// Equations of motion use the canonical convention dq/dt = dH/dp,
// dp/dt = -dH/dq, derived from H directly.

#pragma once

#include <Eigen/Dense>

#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dicke/parallel.hpp"
#include "dicke/params.hpp"

namespace dicke {

struct PhasePoint {
    double q1{0.0}, p1{0.0}; // atomic plane
    double q2{0.0}, p2{0.0}; // field plane

    double h1() const noexcept { return 0.5 * (q1 * q1 + p1 * p1); }
    std::array<double, 4> as_array() const noexcept { return {q1, p1, q2, p2}; }
    static PhasePoint from_array(const std::array<double, 4>& a) noexcept { return {a[0], a[1], a[2], a[3]}; }
};

using Vec4 = std::array<double, 4>;

namespace detail {

// f = sqrt(4J - s)/sqrt(4J) with s = q1^2 + p1^2, and g = -(df/ds)*2 = 1/(sqrt(4J) sqrt(4J - s))
struct Envelope {
    double room; // 4J - s
    double f;
    double g;
};

inline Envelope envelope(const PhasePoint& x, double j, bool strict) {
    const double room = 4.0 * j - (x.q1 * x.q1 + x.p1 * x.p1);
    if (room < 0.0 || (strict && room <= 0.0))
        throw domain_error("classical: q1^2 + p1^2 = " + std::to_string(4.0 * j - room) +
                           " outside the atomic disk of radius^2 4J = " + std::to_string(4.0 * j));
    const double f = std::sqrt(room / (4.0 * j));
    const double g = room > 0.0 ? 1.0 / (std::sqrt(4.0 * j) * std::sqrt(room)) : 0.0;
    return {room, f, g};
}

} // namespace detail

inline double classical_energy(const PhasePoint& x, const ModelParams& p) {
    const auto env = detail::envelope(x, p.j, false);
    return 0.5 * p.omega * (x.q2 * x.q2 + x.p2 * x.p2) + 0.5 * p.epsilon * (x.q1 * x.q1 + x.p1 * x.p1) -
           p.epsilon * p.j + env.f * (p.g_plus() * x.p1 * x.p2 + p.g_minus() * x.q1 * x.q2);
}

// (dH/dq1, dH/dp1, dH/dq2, dH/dp2)
inline Vec4 energy_gradient(const PhasePoint& x, const ModelParams& p) {
    const auto [room, f, g] = detail::envelope(x, p.j, true);
    const double gp = p.g_plus(), gm = p.g_minus();
    const double c = gp * x.p1 * x.p2 + gm * x.q1 * x.q2;
    return {p.epsilon * x.q1 - x.q1 * g * c + f * gm * x.q2,
            p.epsilon * x.p1 - x.p1 * g * c + f * gp * x.p2,
            p.omega * x.q2 + f * gm * x.q1,
            p.omega * x.p2 + f * gp * x.p1};
}

// Velocity (dq1/dt, dp1/dt, dq2/dt, dp2/dt).
inline Vec4 eom_rhs(const PhasePoint& x, const ModelParams& p) {
    const Vec4 d = energy_gradient(x, p);
    return {d[1], -d[0], d[3], -d[2]};
}

inline double norm(const Vec4& v) noexcept {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
}

// Second derivatives of H in (q1, p1, q2, p2) order.
inline Eigen::Matrix4d energy_hessian(const PhasePoint& x, const ModelParams& p) {
    const auto [room, f, g] = detail::envelope(x, p.j, true);
    const double gp = p.g_plus(), gm = p.g_minus();
    const double c = gp * x.p1 * x.p2 + gm * x.q1 * x.q2;
    const double k = g / room; // d g / d s * 2
    Eigen::Matrix4d h;
    const double hq1q1 = p.epsilon - g * c - x.q1 * x.q1 * k * c - 2.0 * x.q1 * x.q2 * g * gm;
    const double hp1p1 = p.epsilon - g * c - x.p1 * x.p1 * k * c - 2.0 * x.p1 * x.p2 * g * gp;
    const double hq1p1 = -x.q1 * x.p1 * k * c - x.q1 * g * gp * x.p2 - x.p1 * g * gm * x.q2;
    const double hq1q2 = f * gm - x.q1 * x.q1 * g * gm;
    const double hq1p2 = -x.q1 * x.p1 * g * gp;
    const double hp1q2 = -x.p1 * x.q1 * g * gm;
    const double hp1p2 = f * gp - x.p1 * x.p1 * g * gp;
    h << hq1q1, hq1p1, hq1q2, hq1p2,
         hq1p1, hp1p1, hp1q2, hp1p2,
         hq1q2, hp1q2, p.omega, 0.0,
         hq1p2, hp1p2, 0.0, p.omega;
    return h;
}

// Symplectic form: velocity = omega_matrix * gradient.
inline Eigen::Matrix4d symplectic_form() {
    Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
    s(0, 1) = 1.0;
    s(1, 0) = -1.0;
    s(2, 3) = 1.0;
    s(3, 2) = -1.0;
    return s;
}

inline Eigen::Matrix4d eom_jacobian(const PhasePoint& x, const ModelParams& p) {
    return symplectic_form() * energy_hessian(x, p);
}

enum class FixedPointKind { trivial, hopf_circle, pitchfork_I, pitchfork_II };
enum class Stability { stable_center, unstable, marginal };

inline std::string_view to_string(FixedPointKind k) noexcept {
    switch (k) {
    case FixedPointKind::trivial: return "trivial";
    case FixedPointKind::hopf_circle: return "hopf_circle";
    case FixedPointKind::pitchfork_I: return "pitchfork_I";
    case FixedPointKind::pitchfork_II: return "pitchfork_II";
    }
    return "trivial";
}

inline std::string_view to_string(Stability s) noexcept {
    switch (s) {
    case Stability::stable_center: return "stable-center";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
    }
    return "marginal";
}

struct FixedPoint {
    FixedPointKind kind{FixedPointKind::trivial};
    PhasePoint representative;
    double r1{0.0};         // atomic radius, hopf_circle only
    double r2{0.0};         // field radius, hopf_circle only
    double phase_lock{0.0}; // c in (q2, p2) = -c (q1, p1), hopf_circle only
    Stability stability{Stability::marginal}; // from the analytic stability ranges
    double energy{0.0};

    // Point on the Hopf circle at atomic angle alpha (alpha = 0 is the representative).
    PhasePoint on_circle(double alpha) const noexcept {
        const double q1 = r1 * std::sin(alpha), p1 = r1 * std::cos(alpha);
        return {q1, p1, -phase_lock * q1, -phase_lock * p1};
    }
};

using FixedPointSet = std::vector<FixedPoint>;

namespace detail {

inline Stability range_label(double coupling_sq, double threshold_sq) {
    if (coupling_sq < threshold_sq) return Stability::stable_center;
    if (coupling_sq > threshold_sq) return Stability::unstable;
    return Stability::marginal;
}

} // namespace detail

// Closed-form equilibria. The origin is always present; a Hopf circle appears
// for G' = 0 past G^2 = eps omega, pitchfork pairs past G+^2 (I) or G-^2 (II).
inline FixedPointSet analytic_fixed_points(const ModelParams& p) {
    p.validate();
    const double crit = p.epsilon * p.omega;
    const double j = p.j;
    FixedPointSet out;

    FixedPoint origin;
    origin.kind = FixedPointKind::trivial;
    origin.stability = detail::range_label(p.g_plus() * p.g_plus(), crit);
    origin.energy = classical_energy(origin.representative, p);
    out.push_back(origin);

    if (p.g_prime == 0.0) {
        const double g2 = p.g * p.g;
        if (g2 > crit) {
            FixedPoint c;
            c.kind = FixedPointKind::hopf_circle;
            c.r1 = std::sqrt(2.0 * j * (1.0 - crit / g2));
            c.r2 = std::sqrt(j * (g2 * g2 - crit * crit) / (g2 * p.omega * p.omega));
            const double h1 = 0.5 * c.r1 * c.r1;
            c.phase_lock = p.g / (p.omega * std::sqrt(2.0 * j)) * std::sqrt(2.0 * j - h1);
            c.representative = c.on_circle(0.0);
            c.stability = Stability::stable_center;
            c.energy = classical_energy(c.representative, p);
            out.push_back(c);
        }
        return out;
    }

    auto pair = [&](FixedPointKind kind, double coupling, Stability label) {
        const double c2 = coupling * coupling;
        const double atomic = std::sqrt(2.0 * j * (c2 - crit) / c2);
        const double field = std::sqrt(j * (c2 * c2 - crit * crit) / (p.omega * p.omega * c2));
        for (double sign : {+1.0, -1.0}) {
            FixedPoint fp;
            fp.kind = kind;
            if (kind == FixedPointKind::pitchfork_I) {
                fp.representative = {0.0, sign * atomic, 0.0, -sign * field};
            } else {
                fp.representative = {sign * atomic, 0.0, -sign * field, 0.0};
            }
            fp.stability = label;
            fp.energy = classical_energy(fp.representative, p);
            out.push_back(fp);
        }
    };
    const double gp = p.g_plus(), gm = p.g_minus();
    if (gp * gp > crit)
        pair(FixedPointKind::pitchfork_I, gp,
             gm > 0.0 && gm * gm >= crit ? Stability::unstable : Stability::stable_center);
    if (gm > 0.0 && gm * gm > crit) pair(FixedPointKind::pitchfork_II, gm, Stability::stable_center);
    return out;
}

struct StabilityReport {
    Eigen::Matrix4d jacobian;
    Eigen::Vector4cd eigenvalues;    // of the Jacobian
    Eigen::Vector4d hessian_spectrum; // ascending
    double max_real_part{0.0};
    bool defective{false};
    Stability label{Stability::marginal};
};

struct StabilityOptions {
    double fixed_point_tol{1e-8};
    double zero_tol{1e-8};
};

// Linear stability of an equilibrium.
//   unstable: some eigenvalue has Re > zero_tol, or the energy Hessian has a
//             negative direction (the point is not an energy minimum)
//   marginal: a zero energy mode or a defective (Jordan) eigenvalue
//   stable-center otherwise
inline StabilityReport classify_stability(const PhasePoint& x, const ModelParams& p,
                                          const StabilityOptions& opts = {}) {
    const double residual = norm(eom_rhs(x, p));
    if (!(residual < opts.fixed_point_tol))
        throw invalid_input("classify_stability: not a fixed point (|rhs| = " + std::to_string(residual) + ")");

    StabilityReport r;
    const Eigen::Matrix4d hess = energy_hessian(x, p);
    r.jacobian = symplectic_form() * hess;
    Eigen::EigenSolver<Eigen::Matrix4d> es(r.jacobian, false);
    r.eigenvalues = es.eigenvalues();
    r.max_real_part = r.eigenvalues.real().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> hs(hess, Eigen::EigenvaluesOnly);
    r.hessian_spectrum = hs.eigenvalues();

    // Defective check: clustered eigenvalues whose eigenspace is too small.
    const double scale = std::max(1.0, r.jacobian.cwiseAbs().maxCoeff());
    for (int a = 0; a < 4 && !r.defective; ++a) {
        int multiplicity = 0;
        for (int b = 0; b < 4; ++b)
            if (std::abs(r.eigenvalues[a] - r.eigenvalues[b]) < 1e-6 * scale) ++multiplicity;
        if (multiplicity < 2) continue;
        const Eigen::Matrix4cd shifted =
            r.jacobian.cast<std::complex<double>>() - r.eigenvalues[a] * Eigen::Matrix4cd::Identity();
        Eigen::JacobiSVD<Eigen::Matrix4cd> svd(shifted);
        int nullity = 0;
        for (int i = 0; i < 4; ++i)
            if (svd.singularValues()[i] < 1e-6 * scale) ++nullity;
        if (nullity < multiplicity) r.defective = true;
    }

    const double min_hess = r.hessian_spectrum[0];
    if (r.max_real_part > opts.zero_tol || min_hess < -opts.zero_tol)
        r.label = Stability::unstable;
    else if (std::abs(min_hess) <= opts.zero_tol || r.defective)
        r.label = Stability::marginal;
    else
        r.label = Stability::stable_center;
    return r;
}

// ---------------------------------------------------------------- trajectories

struct Trajectory {
    std::vector<double> times;
    std::vector<PhasePoint> samples;
    double energy_drift{0.0}; // max |H(t) - H(0)| over all accepted steps
    std::size_t steps{0};
    std::size_t rejected{0};
};

class integration_error : public std::runtime_error {
public:
    integration_error(const std::string& what, PhasePoint last, double t)
        : std::runtime_error(what), last_state(last), last_time(t) {}
    PhasePoint last_state;
    double last_time;
};

struct TrajectoryOptions {
    double sample_dt{0.05};
    double max_energy_drift{1e-8};
    double initial_step{1e-3};
    double min_step{1e-12};
    std::size_t max_steps{50'000'000};
};

// Adaptive embedded Runge-Kutta-Fehlberg 7(8) with per-component error
// tolerance `tol` (absolute and relative). Samples land exactly on multiples
// of sample_dt and on t_final.
inline Trajectory integrate_trajectory(const PhasePoint& start, const ModelParams& p, double t_final, double tol,
                                       const TrajectoryOptions& opts = {}) {
    p.validate();
    if (!(t_final >= 0.0)) throw invalid_input("integrate_trajectory: t_final must be >= 0");
    if (!(tol > 0.0)) throw invalid_input("integrate_trajectory: tol must be > 0");
    if (!(opts.sample_dt > 0.0)) throw invalid_input("integrate_trajectory: sample_dt must be > 0");
    const double e0 = classical_energy(start, p);
    detail::envelope(start, p.j, true);

    using State = std::array<double, 4>;
    boost::numeric::odeint::runge_kutta_fehlberg78<State> stepper;
    auto system = [&p](const State& x, State& dxdt, double) {
        dxdt = eom_rhs(PhasePoint::from_array(x), p);
    };

    Trajectory traj;
    traj.times.push_back(0.0);
    traj.samples.push_back(start);

    State x = start.as_array();
    double t = 0.0;
    double proposal = std::min(opts.initial_step, std::max(t_final, opts.min_step));
    std::size_t next_sample = 1;
    const auto sample_time = [&](std::size_t k) {
        return std::min(t_final, static_cast<double>(k) * opts.sample_dt);
    };

    while (t < t_final) {
        const double target = sample_time(next_sample);
        const double remaining = target - t;
        const bool clipped = proposal >= remaining;
        const double dt = clipped ? remaining : proposal;
        if (dt < opts.min_step && !clipped)
            throw integration_error("integrate_trajectory: step size underflow at t = " + std::to_string(t),
                                    PhasePoint::from_array(x), t);
        if (++traj.steps > opts.max_steps)
            throw integration_error("integrate_trajectory: step budget exhausted", PhasePoint::from_array(x), t);

        State out{}, err{};
        double ratio = 0.0;
        try {
            stepper.do_step(system, x, t, out, dt, err);
            for (int i = 0; i < 4; ++i) {
                const double scale = tol * (1.0 + std::max(std::abs(x[i]), std::abs(out[i])));
                ratio = std::max(ratio, std::abs(err[i]) / scale);
            }
            // the end point itself must stay strictly inside the atomic disk
            detail::envelope(PhasePoint::from_array(out), p.j, true);
        } catch (const domain_error&) {
            ratio = std::numeric_limits<double>::infinity();
        }

        if (!(ratio <= 1.0)) {
            ++traj.rejected;
            proposal = std::isfinite(ratio) ? dt * std::max(0.2, 0.9 * std::pow(ratio, -1.0 / 8.0)) : 0.25 * dt;
            if (proposal < opts.min_step)
                throw integration_error("integrate_trajectory: step size underflow at t = " + std::to_string(t),
                                        PhasePoint::from_array(x), t);
            continue;
        }

        x = out;
        t = clipped ? target : t + dt;
        const double grow = ratio > 0.0 ? std::min(5.0, 0.9 * std::pow(ratio, -1.0 / 8.0)) : 5.0;
        proposal = clipped ? std::max(proposal, dt * grow) : dt * grow;
        traj.energy_drift = std::max(traj.energy_drift, std::abs(classical_energy(PhasePoint::from_array(x), p) - e0));
        if (clipped) {
            traj.times.push_back(t);
            traj.samples.push_back(PhasePoint::from_array(x));
            ++next_sample;
        }
    }

    if (traj.energy_drift > opts.max_energy_drift)
        throw integration_error("integrate_trajectory: energy drift " + std::to_string(traj.energy_drift) +
                                    " exceeds " + std::to_string(opts.max_energy_drift),
                                PhasePoint::from_array(x), t);
    return traj;
}

// Displaces a fixed point along q2 so that H = energy. Exact because dH/dq2
// vanishes at the fixed point and H is quadratic in q2.
inline PhasePoint seed_on_energy_shell(const FixedPoint& fp, const ModelParams& p, double energy) {
    const double excess = energy - fp.energy;
    if (excess < 0.0)
        throw invalid_input("seed_on_energy_shell: energy " + std::to_string(energy) +
                            " below the fixed-point energy " + std::to_string(fp.energy));
    PhasePoint x = fp.representative;
    x.q2 += std::sqrt(2.0 * excess / p.omega);
    return x;
}

// ---------------------------------------------------------------- bifurcations

struct BranchRow {
    double coupling{0.0}; // grid value (lambda or lambda_plus, see ScanMode)
    double lambda{0.0};
    double lambda_plus{0.0};
    FixedPoint point;
    Stability numeric_stability{Stability::marginal};
};

inline std::vector<BranchRow> bifurcation_scan(const ModelParams& tmpl, const std::vector<double>& grid, ScanMode mode,
                                               unsigned threads = default_thread_count()) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw invalid_input("bifurcation_scan: grid must be increasing");
    std::vector<std::vector<BranchRow>> per_point(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const ModelParams p = params_at(tmpl, mode, grid[i]);
        for (const auto& fp : analytic_fixed_points(p)) {
            BranchRow row;
            row.coupling = grid[i];
            row.lambda = p.lambda();
            row.lambda_plus = p.lambda_plus();
            row.point = fp;
            row.numeric_stability = classify_stability(fp.representative, p).label;
            per_point[i].push_back(row);
        }
    });
    std::vector<BranchRow> rows;
    for (auto& v : per_point) rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

} // namespace dicke
