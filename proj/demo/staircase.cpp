// Ground-state entropy staircase of the rotating-wave model for a few atom numbers.
#include <cstdio>

#include "dicke/entanglement.hpp"

int main() {
    using namespace dicke;
    const auto grid = make_grid(0.0, 4.0, 0.25);
    for (double j : {1.5, 4.5, 7.5}) {
        ModelParams p;
        p.j = j;
        const auto scan = entropy_scan(p, grid, ScanMode::integrable);
        std::printf("J = %.1f (n_max = %d)\n", j, scan.n_max);
        for (const auto& row : scan.rows)
            std::printf("  lambda %5.2f  E0 %10.5f  S %.6f  block %ld\n", row.lambda, row.energy, row.entropy,
                        row.block_label);
    }
}
