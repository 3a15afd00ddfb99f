// Classical equilibria past the critical coupling and a trajectory near the pitchfork pair.
#include <algorithm>
#include <cstdio>
#include <string>

#include "dicke/classical.hpp"

int main() {
    using namespace dicke;
    ModelParams integrable;
    integrable.j = 4.5;
    integrable.g = 1.5;
    for (const auto& fp : analytic_fixed_points(integrable))
        std::printf("%-12s R1^2 = %.4f  R2^2 = %.4f  E = %.6f  (%s)\n", std::string(to_string(fp.kind)).c_str(),
                    fp.r1 * fp.r1, fp.r2 * fp.r2, fp.energy, std::string(to_string(fp.stability)).c_str());

    ModelParams symmetric = integrable;
    symmetric.g = symmetric.g_prime = 0.75;
    for (const auto& fp : analytic_fixed_points(symmetric)) {
        if (fp.kind != FixedPointKind::pitchfork_I) continue;
        const auto traj = integrate_trajectory(seed_on_energy_shell(fp, symmetric, -5.5), symmetric, 100.0, 1e-10);
        double lo = traj.samples.front().p1, hi = lo;
        for (const auto& x : traj.samples) {
            lo = std::min(lo, x.p1);
            hi = std::max(hi, x.p1);
        }
        std::printf("pitchfork seed p1 = %+.5f: p1 stays in [%.4f, %.4f], drift %.2e\n", fp.representative.p1, lo,
                    hi, traj.energy_drift);
    }
}
