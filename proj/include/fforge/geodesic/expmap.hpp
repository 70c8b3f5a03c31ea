#pragma once

// Exponential map by integrating the geodesic ODE with an adaptive
// Dormand–Prince 5(4) stepper.

#include <vector>

#include "fforge/manifold/field.hpp"

namespace fforge {

struct OdeOptions {
    double abs_tol = 1e-8;
    double rel_tol = 1e-8;
    double initial_step = 1e-3;
    double min_step = 1e-12;
    long max_steps = 1000000;
};

// Γ^k_ij, indexed [k](i, j).
std::vector<Matrix> christoffel(const RiemannianField& field, const Vector& x);

// γ̈ = −Γ(γ)[γ̇, γ̇]
Vector geodesic_acceleration(const RiemannianField& field, const Vector& x, const Vector& v);

// γ(1) with γ(0) = x, γ̇(0) = v. IntegrationError carries the time at which
// the step size collapsed or the curve left the domain.
Vector exp_map_ode(const RiemannianField& field, const Vector& x, const Vector& v, const OdeOptions& opts = {});

// γ(t_k) for the given increasing times in [0, ∞).
std::vector<Vector> geodesic_ode_path(const RiemannianField& field, const Vector& x, const Vector& v,
                                      const std::vector<double>& times, const OdeOptions& opts = {});

}  // namespace fforge
