#pragma once

#include <iosfwd>
#include <vector>

#include "fforge/manifold/field.hpp"

namespace fforge {

// x_0..x_T on a uniform grid. Controls are the forward differences.
struct DiscreteCurve {
    std::vector<Vector> points;

    int T() const { return static_cast<int>(points.size()) - 1; }
    int dim() const { return points.empty() ? 0 : points.front().dim(); }
    Vector control(int t) const { return points[t + 1] - points[t]; }
    std::vector<Vector> controls() const;

    static DiscreteCurve straight(const Vector& a, const Vector& b, int T);
};

// Throws DomainError naming the first grid index outside the field's domain.
void check_domain(const DiscreteCurve& curve, const MetricField& field);

// Σ_t u_tᵀ G(x_t[,u_t]) u_t
double discrete_energy(const DiscreteCurve& curve, const MetricField& field);
// Where each segment's tensor is evaluated. The left point matches the
// energy and carries an O(1/T) bias; the midpoint is second order.
enum class LengthRule { left, midpoint };

// Σ_t sqrt(u_tᵀ G u_t)
double discrete_length(const DiscreteCurve& curve, const MetricField& field,
                       LengthRule rule = LengthRule::left);
std::vector<double> segment_lengths(const DiscreteCurve& curve, const MetricField& field,
                                    LengthRule rule = LengthRule::left);

// Gradient of the discrete energy with respect to the interior points
// x_1..x_{T-1}, stacked t-major.
Vector energy_gradient_interior(const DiscreteCurve& curve, const MetricField& field);

// CSV with header t,x_0,...,x_{d-1} and 17 significant digits.
void write_curve_csv(std::ostream& out, const DiscreteCurve& curve);

}  // namespace fforge
