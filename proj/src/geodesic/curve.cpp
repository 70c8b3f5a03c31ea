#include "fforge/geodesic/curve.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace fforge {

std::vector<Vector> DiscreteCurve::controls() const {
    std::vector<Vector> u;
    u.reserve(points.size() > 0 ? points.size() - 1 : 0);
    for (int t = 0; t < T(); ++t) u.push_back(control(t));
    return u;
}

DiscreteCurve DiscreteCurve::straight(const Vector& a, const Vector& b, int T) {
    if (T < 1) throw ConfigError("curve needs T >= 1");
    if (a.dim() != b.dim()) throw ShapeError("curve endpoints differ in dimension");
    DiscreteCurve c;
    c.points.reserve(T + 1);
    const Vector step = b - a;
    for (int t = 0; t < T; ++t) c.points.push_back(a + (static_cast<double>(t) / T) * step);
    c.points.push_back(b);
    return c;
}

void check_domain(const DiscreteCurve& curve, const MetricField& field) {
    if (curve.T() < 1) throw ConfigError("curve needs T >= 1");
    for (int t = 0; t <= curve.T(); ++t)
        if (!field.in_domain(curve.points[t]))
            throw DomainError("curve point outside the chart domain", t);
}

std::vector<double> segment_lengths(const DiscreteCurve& curve, const MetricField& field, LengthRule rule) {
    check_domain(curve, field);
    std::vector<double> out(curve.T());
    for (int t = 0; t < curve.T(); ++t) {
        const Vector u = curve.control(t);
        Vector at = curve.points[t];
        if (rule == LengthRule::midpoint) {
            at = curve.points[t] + 0.5 * u;
            if (!field.in_domain(at)) throw DomainError("segment midpoint outside the chart domain", t);
        }
        out[t] = std::sqrt(std::max(0.0, field.energy_term(at, u)));
    }
    return out;
}

double discrete_energy(const DiscreteCurve& curve, const MetricField& field) {
    check_domain(curve, field);
    double e = 0.0;
    for (int t = 0; t < curve.T(); ++t) e += field.energy_term(curve.points[t], curve.control(t));
    return e;
}

double discrete_length(const DiscreteCurve& curve, const MetricField& field, LengthRule rule) {
    double l = 0.0;
    for (double s : segment_lengths(curve, field, rule)) l += s;
    return l;
}

Vector energy_gradient_interior(const DiscreteCurve& curve, const MetricField& field) {
    check_domain(curve, field);
    const int T = curve.T(), d = curve.dim();
    std::vector<TermDerivatives> td(T);
    for (int t = 0; t < T; ++t) td[t] = field.term_derivatives(curve.points[t], curve.control(t));
    // x_t enters term t through x and u = x_{t+1} − x_t, and term t−1 through u.
    Vector g((T - 1) * d);
    for (int t = 1; t < T; ++t)
        for (int k = 0; k < d; ++k) g[(t - 1) * d + k] = td[t].dx[k] - td[t].du[k] + td[t - 1].du[k];
    return g;
}

void write_curve_csv(std::ostream& out, const DiscreteCurve& curve) {
    const int d = curve.dim();
    out << "t";
    for (int k = 0; k < d; ++k) out << ",x_" << k;
    out << '\n';
    const auto old = out.precision(17);
    for (int t = 0; t <= curve.T(); ++t) {
        out << t;
        for (int k = 0; k < d; ++k) out << ',' << curve.points[t][k];
        out << '\n';
    }
    out.precision(old);
}

}  // namespace fforge
