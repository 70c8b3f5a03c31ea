#pragma once

// Pieces of the discrete control problem shared by the single-geodesic and
// the Fréchet solvers.

#include <vector>

#include "fforge/geodesic/curve.hpp"

namespace fforge {

// Tensors and gradients of one curve at its current iterate.
struct CurveLinearization {
    double energy = 0.0;
    std::vector<Matrix> G;
    std::vector<Matrix> Ginv;
    std::vector<Vector> nu;
    std::vector<Vector> zeta;
    // ζ_t + Σ_{j>t} ν_j, one reverse cumulative sum.
    std::vector<Vector> shift;
    // (Σ_t G_t⁻¹)⁻¹ and Σ_t G_t⁻¹ shift_t
    Matrix M;
    Vector R;
    // ∂E/∂x_t for interior t (index 0 unused) and ∂E/∂u_{T-1}.
    std::vector<Vector> grad_interior;
    Vector du_last;
};

// DomainError and NotSPD carry the grid index t; curve is stamped into
// DomainError when given.
CurveLinearization linearize_curve(const MetricField& field, const DiscreteCurve& c, int curve = -1);

// u_t = −(1/2w) G_t⁻¹(μ + w·shift_t); shift is unweighted, μ is not.
std::vector<Vector> controls_from_costate(const CurveLinearization& L, const Vector& mu, double w = 1.0);

// Points from x_0 by the blended controls α·u_new + (1−α)·u_old for
// t < T−1, with the last point pinned to `end`.
DiscreteCurve blend_controls(const DiscreteCurve& c, const std::vector<Vector>& u_new, double alpha,
                             const Vector& end);

}  // namespace fforge
