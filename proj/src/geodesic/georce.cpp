#include "fforge/geodesic/georce.hpp"

#include "fforge/geodesic/control.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <numbers>

namespace fforge {

namespace {

std::optional<double> feasible_energy(const MetricField& field, const DiscreteCurve& c) {
    try {
        return discrete_energy(c, field);
    } catch (const NumericalError&) {
        return std::nullopt;
    }
}

GeodesicReport run(const MetricField& field, DiscreteCurve curve, const GeorceOptions& opts) {
    if (opts.max_iter < 0) throw ConfigError("max_iter must be >= 0");
    if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
    const Vector a = curve.points.front(), b = curve.points.back();
    GeodesicReport rep;
    for (;;) {
        const CurveLinearization L = linearize_curve(field, curve);
        double g2 = 0.0;
        for (int t = 1; t < curve.T(); ++t) g2 += dot(L.grad_interior[t], L.grad_interior[t]);
        rep.energy_trace.push_back(L.energy);
        rep.final_grad_norm = std::sqrt(g2);
        rep.energy = L.energy;
        if (rep.final_grad_norm <= opts.tol) {
            rep.converged = true;
            break;
        }
        if (rep.iterations >= opts.max_iter) break;
        // Fixed end: μ = M(2(a−b) − R).
        const std::vector<Vector> u = controls_from_costate(L, matvec(L.M, 2.0 * (a - b) - L.R));
        DiscreteCurve accepted;
        const ArmijoOutcome ls = armijo_search(
            L.energy,
            [&](double alpha) -> std::optional<double> {
                DiscreteCurve trial = blend_controls(curve, u, alpha, b);
                auto e = feasible_energy(field, trial);
                if (e) accepted = std::move(trial);
                return e;
            },
            opts.armijo);
        if (!ls.accepted) {
            rep.stalled = true;
            break;
        }
        // The last evaluated trial is the accepted one.
        curve = std::move(accepted);
        ++rep.iterations;
    }
    rep.length = discrete_length(curve, field);
    rep.arc_length = discrete_length(curve, field, LengthRule::midpoint);
    rep.curve = std::move(curve);
    return rep;
}

DiscreteCurve bent(const DiscreteCurve& straight, boost::random::mt19937_64& rng) {
    const int T = straight.T(), d = straight.dim();
    const double scale = 0.25 * norm(straight.points.back() - straight.points.front());
    boost::random::normal_distribution<double> normal;
    Vector dir(d);
    for (int k = 0; k < d; ++k) dir[k] = scale * normal(rng);
    DiscreteCurve c = straight;
    for (int t = 1; t < T; ++t) c.points[t] += std::sin(std::numbers::pi * t / T) * dir;
    return c;
}

GeodesicReport solve_between(const MetricField& field, const Vector& a, const Vector& b,
                             const GeorceOptions& opts) {
    if (a.dim() != field.dim() || b.dim() != field.dim())
        throw ShapeError("geodesic endpoints do not match the field dimension");
    if (!field.in_domain(a)) throw DomainError("start point outside the chart domain", 0);
    if (!field.in_domain(b)) throw DomainError("end point outside the chart domain", opts.T);
    const DiscreteCurve straight = DiscreteCurve::straight(a, b, opts.T);
    GeodesicReport best = run(field, straight, opts);
    boost::random::mt19937_64 rng(opts.seed);
    for (int s = 1; s < opts.multistart; ++s) {
        const DiscreteCurve init = bent(straight, rng);
        try {
            check_domain(init, field);
        } catch (const DomainError&) {
            continue;
        }
        GeodesicReport r = run(field, init, opts);
        if (r.energy < best.energy) best = std::move(r);
    }
    return best;
}

}  // namespace

GeodesicReport georce(const RiemannianField& field, const Vector& a, const Vector& b,
                      const GeorceOptions& opts) {
    return solve_between(field, a, b, opts);
}

GeodesicReport georce_finsler(const FinslerField& field, const Vector& a, const Vector& b,
                              const GeorceOptions& opts) {
    return solve_between(field, a, b, opts);
}

GeodesicReport georce_any(const MetricField& field, const DiscreteCurve& init, const GeorceOptions& opts) {
    return run(field, init, opts);
}

}  // namespace fforge
