#include "fforge/geodesic/expmap.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

namespace fforge {

namespace {

// ∂_k g_ij for all k, chunked over the seed capacity.
std::vector<Matrix> metric_partials(const RiemannianField& field, const Vector& x) {
    const int d = x.dim();
    std::vector<Matrix> dG(d, Matrix(d, d));
    for (int lo = 0; lo < d; lo += kMaxSeeds) {
        const int hi = std::min(d, lo + kMaxSeeds);
        const MatT<D1> G = field.metric(detail::seed_chunk(x, lo, hi));
        for (int k = lo; k < hi; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) dG[k](i, j) = G(i, j).partial(k - lo);
    }
    return dG;
}

using State = std::vector<double>;

// Thrown from inside the stepper when a stage leaves the domain; the
// driver then retries with a smaller step.
struct StageOutside {};

}  // namespace

std::vector<Matrix> christoffel(const RiemannianField& field, const Vector& x) {
    const int d = x.dim();
    const auto dG = metric_partials(field, x);
    const Matrix ginv = spd_inverse(field.metric(x));
    std::vector<Matrix> gamma(d, Matrix(d, d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Vector first(d);  // Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
            for (int l = 0; l < d; ++l) first[l] = 0.5 * (dG[i](j, l) + dG[j](i, l) - dG[l](i, j));
            const Vector raised = matvec(ginv, first);
            for (int k = 0; k < d; ++k) gamma[k](i, j) = raised[k];
        }
    return gamma;
}

Vector geodesic_acceleration(const RiemannianField& field, const Vector& x, const Vector& v) {
    const int d = x.dim();
    const auto dG = metric_partials(field, x);
    // c_l = Σ ∂_i g_jl vⁱvʲ − ½ ∂_l(vᵀg v)
    Vector c(d);
    for (int l = 0; l < d; ++l) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) {
            double row = 0.0;
            for (int j = 0; j < d; ++j) row += dG[i](j, l) * v[j];
            s += v[i] * row;
        }
        c[l] = s - 0.5 * quad_form(dG[l], v);
    }
    return -1.0 * spd_solve(field.metric(x), c);
}

std::vector<Vector> geodesic_ode_path(const RiemannianField& field, const Vector& x, const Vector& v,
                                      const std::vector<double>& times, const OdeOptions& opts) {
    namespace ode = boost::numeric::odeint;
    const int d = field.dim();
    if (x.dim() != d || v.dim() != d) throw ShapeError("exp map: dimension mismatch");
    if (!field.in_domain(x)) throw IntegrationError("start point outside the chart domain", 0.0);

    auto rhs = [&](const State& s, State& ds, double) {
        Vector p(d), q(d);
        for (int k = 0; k < d; ++k) {
            p[k] = s[k];
            q[k] = s[d + k];
        }
        if (!field.in_domain(p)) throw StageOutside{};
        Vector acc;
        try {
            acc = geodesic_acceleration(field, p, q);
        } catch (const NumericalError&) {
            throw StageOutside{};
        }
        for (int k = 0; k < d; ++k) {
            ds[k] = q[k];
            ds[d + k] = acc[k];
        }
    };

    auto stepper = ode::make_controlled(opts.abs_tol, opts.rel_tol, ode::runge_kutta_dopri5<State>());
    State s(2 * d);
    for (int k = 0; k < d; ++k) {
        s[k] = x[k];
        s[d + k] = v[k];
    }
    double t = 0.0, dt = opts.initial_step;
    long steps = 0;
    std::vector<Vector> out;
    out.reserve(times.size());
    for (double target : times) {
        if (target < t) throw ConfigError("exp map: output times must be increasing and >= 0");
        while (t < target) {
            if (++steps > opts.max_steps) throw IntegrationError("exp map: step budget exhausted", t);
            const double remaining = target - t;
            // Land exactly on the target instead of stepping a hair short.
            const bool last = dt >= remaining;
            double h = last ? remaining : dt;
            ode::controlled_step_result res;
            try {
                res = stepper.try_step(rhs, s, t, h);
            } catch (const StageOutside&) {
                dt *= 0.5;
                if (dt < opts.min_step) throw IntegrationError("exp map: curve left the domain", t);
                continue;
            }
            if (res == ode::success) {
                Vector p(d);
                for (int k = 0; k < d; ++k) p[k] = s[k];
                if (!field.in_domain(p)) throw IntegrationError("exp map: curve left the domain", t);
                if (last) t = target;
                dt = last ? std::max(dt, h) : h;
            } else {
                dt = h;
                if (dt < opts.min_step) throw IntegrationError("exp map: step size underflow", t);
            }
        }
        Vector p(d);
        for (int k = 0; k < d; ++k) p[k] = s[k];
        out.push_back(std::move(p));
    }
    return out;
}

Vector exp_map_ode(const RiemannianField& field, const Vector& x, const Vector& v, const OdeOptions& opts) {
    return geodesic_ode_path(field, x, v, {1.0}, opts).front();
}

}  // namespace fforge
