#pragma once

#include <memory>
#include <string>

#include "fforge/numerics/autodiff.hpp"
#include "fforge/numerics/linalg.hpp"

namespace fforge {

// ν = ∇_x[uᵀG(x,u)u] with u fixed, ζ = ∇_v[uᵀG(x,v)u] at v = u.
struct VelocityGradients {
    Vector nu;
    Vector zeta;
};

// Value and both partial gradients of the energy integrand q(x,u) = uᵀG(x,u)u.
struct TermDerivatives {
    double value = 0.0;
    Vector dx;
    Vector du;
};

// A metric tensor field on one chart: Riemannian G(x) or a Finsler
// fundamental tensor G(x,u). Implementations are immutable and thread-safe.
class MetricField {
public:
    virtual ~MetricField() = default;

    virtual int dim() const = 0;
    virtual std::string name() const = 0;
    virtual bool in_domain(const Vector& x) const = 0;
    virtual bool velocity_dependent() const = 0;

    virtual Matrix tensor(const Vector& x, const Vector& u) const = 0;
    // uᵀG(x,u)u
    virtual double energy_term(const Vector& x, const Vector& u) const = 0;
    virtual VelocityGradients velocity_gradients(const Vector& x, const Vector& u) const = 0;
    virtual TermDerivatives term_derivatives(const Vector& x, const Vector& u) const = 0;
};

using FieldPtr = std::shared_ptr<const MetricField>;

class RiemannianField : public MetricField {
public:
    virtual Matrix metric(const Vector& x) const = 0;
    virtual MatT<D1> metric(const VecT<D1>& x) const = 0;
    virtual double quad(const Vector& x, const Vector& u) const = 0;
    virtual D1 quad(const VecT<D1>& x, const VecT<D1>& u) const = 0;

    bool velocity_dependent() const final { return false; }
    Matrix tensor(const Vector& x, const Vector&) const final { return metric(x); }
    double energy_term(const Vector& x, const Vector& u) const final { return quad(x, u); }
    VelocityGradients velocity_gradients(const Vector& x, const Vector& u) const override;
    TermDerivatives term_derivatives(const Vector& x, const Vector& u) const override;
};

using RiemannianPtr = std::shared_ptr<const RiemannianField>;

// Adapts a chart functor to RiemannianField. A chart provides
//   int dim() const; std::string name() const; bool in_domain(const Vector&) const;
//   template <class S> MatT<S> metric(const VecT<S>&) const;
// and optionally a cheaper  template <class S> S quad(const VecT<S>& x, const VecT<S>& u) const.
template <class Chart>
class ChartField final : public RiemannianField {
public:
    explicit ChartField(Chart chart) : chart_(std::move(chart)) {}

    const Chart& chart() const { return chart_; }
    int dim() const override { return chart_.dim(); }
    std::string name() const override { return chart_.name(); }
    bool in_domain(const Vector& x) const override { return chart_.in_domain(x); }

    Matrix metric(const Vector& x) const override { return chart_.template metric<double>(x); }
    MatT<D1> metric(const VecT<D1>& x) const override { return chart_.template metric<D1>(x); }
    double quad(const Vector& x, const Vector& u) const override { return quad_at<double>(x, u); }
    D1 quad(const VecT<D1>& x, const VecT<D1>& u) const override { return quad_at<D1>(x, u); }

private:
    template <class S>
    S quad_at(const VecT<S>& x, const VecT<S>& u) const {
        if constexpr (requires { chart_.template quad<S>(x, u); }) {
            return chart_.template quad<S>(x, u);
        } else {
            return quad_form(chart_.template metric<S>(x), u);
        }
    }

    Chart chart_;
};

template <class Chart>
RiemannianPtr make_chart_field(Chart chart) {
    return std::make_shared<const ChartField<Chart>>(std::move(chart));
}

// Gradient of f(z) for z = (x, u) split into its halves. f is called with
// two VecT<D1> arguments.
template <class F>
std::pair<double, std::pair<Vector, Vector>> split_grad(F&& f, const Vector& x, const Vector& u) {
    const int d = x.dim();
    Vector z(2 * d);
    for (int i = 0; i < d; ++i) {
        z[i] = x[i];
        z[d + i] = u[i];
    }
    auto [value, g] = value_and_grad_forward(
        [&](const VecT<D1>& zd) {
            VecT<D1> xd(d), ud(d);
            for (int i = 0; i < d; ++i) {
                xd[i] = zd[i];
                ud[i] = zd[d + i];
            }
            return f(xd, ud);
        },
        z);
    Vector gx(d), gu(d);
    for (int i = 0; i < d; ++i) {
        gx[i] = g[i];
        gu[i] = g[d + i];
    }
    return {value, {gx, gu}};
}

}  // namespace fforge
