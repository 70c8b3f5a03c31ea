#pragma once

#include <optional>

namespace fforge {

struct ArmijoParams {
    double rho = 0.5;
    double c1 = 1e-4;
    int max_halvings = 50;
};

struct ArmijoOutcome {
    bool accepted = false;
    double alpha = 0.0;
    double energy = 0.0;
    int halvings = 0;
};

// Backtracking over α = 1, ρ, ρ², … for a step whose energy at α is given by
// eval(α), or nullopt when the blended iterate is infeasible. The decrease
// expected from the full step, D = E0 − E(1), stands in for the directional
// derivative; when D ≤ 0 a plain decrease is required instead.
template <class Eval>
ArmijoOutcome armijo_search(double e0, Eval&& eval, const ArmijoParams& p = {}) {
    double alpha = 1.0;
    const std::optional<double> full = eval(alpha);
    const double D = full ? e0 - *full : 0.0;
    std::optional<double> e = full;
    for (int h = 0;; ++h) {
        if (e) {
            const bool ok = D > 0.0 ? *e <= e0 - p.c1 * alpha * D : *e <= e0;
            if (ok) return {true, alpha, *e, h};
        }
        if (h == p.max_halvings) return {false, 0.0, e0, h};
        alpha *= p.rho;
        e = eval(alpha);
    }
}

}  // namespace fforge
