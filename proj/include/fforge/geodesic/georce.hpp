#pragma once

// Fixed-endpoint discrete geodesics by the control-problem fixed point:
// every iteration solves the linearized optimality conditions in closed
// form and backtracks along the straight line to the proposal.

#include <cstdint>

#include "fforge/geodesic/armijo.hpp"
#include "fforge/geodesic/curve.hpp"
#include "fforge/manifold/finsler.hpp"

namespace fforge {

struct GeorceOptions {
    int T = 100;
    // Bound on the ℓ² norm of the energy gradient over interior points.
    double tol = 1e-6;
    int max_iter = 100;
    // Extra runs from randomly bent initial curves; the lowest energy wins.
    int multistart = 1;
    std::uint64_t seed = 0;
    ArmijoParams armijo{};
};

struct GeodesicReport {
    DiscreteCurve curve;
    double energy = 0.0;
    // Left-point sum, consistent with the energy (length² ≤ T·energy).
    double length = 0.0;
    // Midpoint-rule length of the same polygon; the distance estimate.
    double arc_length = 0.0;
    int iterations = 0;
    double final_grad_norm = 0.0;
    bool converged = false;
    // The line search ran out of halvings; curve is the best iterate.
    bool stalled = false;
    std::vector<double> energy_trace;
};

GeodesicReport georce(const RiemannianField& field, const Vector& a, const Vector& b,
                      const GeorceOptions& opts = {});
GeodesicReport georce_finsler(const FinslerField& field, const Vector& a, const Vector& b,
                              const GeorceOptions& opts = {});

// Dispatches on field.velocity_dependent(); also accepts the initial curve.
GeodesicReport georce_any(const MetricField& field, const DiscreteCurve& init, const GeorceOptions& opts);

}  // namespace fforge
