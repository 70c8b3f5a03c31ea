#include "fforge/geodesic/control.hpp"

namespace fforge {

CurveLinearization linearize_curve(const MetricField& field, const DiscreteCurve& c, int curve) {
    try {
        check_domain(c, field);
    } catch (const DomainError& e) {
        throw DomainError(e.what(), e.t(), curve);
    }
    const int T = c.T(), d = c.dim();
    const bool finsler = field.velocity_dependent();
    CurveLinearization L;
    L.G.resize(T);
    L.Ginv.resize(T);
    L.nu.resize(T);
    L.zeta.assign(T, Vector(d));
    std::vector<TermDerivatives> td(T);
    for (int t = 0; t < T; ++t) {
        const Vector u = c.control(t);
        td[t] = field.term_derivatives(c.points[t], u);
        try {
            L.G[t] = field.tensor(c.points[t], u);
            L.Ginv[t] = spd_inverse(L.G[t]);
        } catch (const NotSPD& e) {
            throw NotSPD(e.pivot(), e.value(), t, curve);
        }
        if (finsler) {
            VelocityGradients vg = field.velocity_gradients(c.points[t], u);
            L.nu[t] = std::move(vg.nu);
            L.zeta[t] = std::move(vg.zeta);
        } else {
            L.nu[t] = td[t].dx;
        }
        L.energy += td[t].value;
    }

    L.shift.resize(T);
    Vector tail(d);
    for (int t = T - 1; t >= 0; --t) {
        L.shift[t] = L.zeta[t] + tail;
        tail += L.nu[t];
    }
    Matrix sum_ginv(d, d);
    L.R = Vector(d);
    for (int t = 0; t < T; ++t) {
        sum_ginv += L.Ginv[t];
        L.R += matvec(L.Ginv[t], L.shift[t]);
    }
    L.M = spd_inverse(symmetrize(sum_ginv));

    // x_t enters term t through x and u = x_{t+1} − x_t, and term t−1 through u.
    L.grad_interior.assign(T, Vector(d));
    for (int t = 1; t < T; ++t) L.grad_interior[t] = td[t].dx - td[t].du + td[t - 1].du;
    L.du_last = td[T - 1].du;
    return L;
}

std::vector<Vector> controls_from_costate(const CurveLinearization& L, const Vector& mu, double w) {
    const int T = static_cast<int>(L.Ginv.size());
    std::vector<Vector> u(T);
    const Vector m = (1.0 / w) * mu;
    for (int t = 0; t < T; ++t) u[t] = -0.5 * matvec(L.Ginv[t], m + L.shift[t]);
    return u;
}

DiscreteCurve blend_controls(const DiscreteCurve& c, const std::vector<Vector>& u_new, double alpha,
                             const Vector& end) {
    const int T = c.T();
    DiscreteCurve out;
    out.points.resize(T + 1);
    out.points[0] = c.points[0];
    for (int t = 0; t < T - 1; ++t) out.points[t + 1] = out.points[t] + (alpha * u_new[t] + (1.0 - alpha) * c.control(t));
    out.points[T] = end;
    return out;
}

}  // namespace fforge
