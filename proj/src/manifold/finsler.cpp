#include "fforge/manifold/finsler.hpp"

#include <algorithm>
#include <cmath>

namespace fforge {

namespace {

bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double e) { return e == 0.0; });
}

// One directional level (s) stacked twice on a gradient seed: v + s₁u + s₂u.
D3 directional_pair(const D1& base, double dir) {
    using L1 = Dual<D1, 1>;
    L1 inner(base);
    inner.resize(1);
    inner.d(0) = D1(dir);
    D3 out(inner);
    out.resize(1);
    out.d(0) = L1(D1(dir));
    return out;
}

}  // namespace

Matrix FinslerField::fundamental(const Vector& x, const Vector& v) const {
    const int d = dim();
    if (v.dim() != d || x.dim() != d) throw ShapeError("fundamental tensor: dimension mismatch");
    if (is_zero(v)) {
        Matrix avg(d, d);
        for (int k = 0; k < d; ++k)
            for (double sign : {1.0, -1.0}) {
                Vector e(d);
                e[k] = sign;
                avg += fundamental(x, e);
            }
        avg *= 1.0 / (2.0 * d);
        return avg;
    }
    Matrix G = hessian_forward([&](const VecT<D2>& vd) { return norm_sq(x, vd); }, v);
    G *= 0.5;
    Cholesky check(G);
    return G;
}

VelocityGradients FinslerField::velocity_gradients(const Vector& x, const Vector& u) const {
    const int d = dim();
    VelocityGradients out{Vector(d), Vector(d)};
    if (is_zero(u)) return out;

    const int width = 2 * d;
    for (int lo = 0; lo < width; lo += kMaxSeeds) {
        const int hi = std::min(width, lo + kMaxSeeds);
        const int n = hi - lo;
        VecT<D1> xd(d);
        VecT<D3> vd(d);
        for (int i = 0; i < d; ++i) {
            xd[i] = (i >= lo && i < hi) ? D1::variable(x[i], n, i - lo) : D1(x[i]);
            const int k = d + i;
            const D1 vi = (k >= lo && k < hi) ? D1::variable(u[i], n, k - lo) : D1(u[i]);
            vd[i] = directional_pair(vi, u[i]);
        }
        const D3 r = norm_sq(xd, vd);
        // ∂s₁∂s₂ F² = uᵀ Hess_v F² u = 2 uᵀG(x,v)u, with its gradient in (x, v).
        const D1 second = r.partial(0).partial(0);
        for (int k = lo; k < hi; ++k) {
            const double g = 0.5 * second.partial(k - lo);
            if (!std::isfinite(g)) throw NumericalError("non-finite velocity gradient", k % d);
            if (k < d)
                out.nu[k] = g;
            else
                out.zeta[k - d] = g;
        }
    }
    return out;
}

TermDerivatives FinslerField::term_derivatives(const Vector& x, const Vector& u) const {
    // F² = O(|u|²), so value and both gradients vanish at u = 0 even where
    // F itself is not differentiable.
    if (is_zero(u)) return {0.0, Vector(x.size()), Vector(u.size())};
    auto [value, g] = split_grad(
        [&](const VecT<D1>& xd, const VecT<D1>& ud) { return norm_sq(xd, ud); }, x, u);
    return {value, std::move(g.first), std::move(g.second)};
}

// ---- reversal ------------------------------------------------------------

namespace {

class ReversedFinsler final : public FinslerField {
public:
    explicit ReversedFinsler(FinslerPtr base) : base_(std::move(base)) {}
    int dim() const override { return base_->dim(); }
    std::string name() const override { return "reversed(" + base_->name() + ")"; }
    bool in_domain(const Vector& x) const override { return base_->in_domain(x); }
    double norm(const Vector& x, const Vector& v) const override { return base_->norm(x, -v); }
    double norm_sq(const Vector& x, const Vector& v) const override { return base_->norm_sq(x, -v); }
    D1 norm_sq(const VecT<D1>& x, const VecT<D1>& v) const override { return base_->norm_sq(x, -v); }
    D2 norm_sq(const Vector& x, const VecT<D2>& v) const override { return base_->norm_sq(x, -v); }
    D3 norm_sq(const VecT<D1>& x, const VecT<D3>& v) const override { return base_->norm_sq(x, -v); }

private:
    FinslerPtr base_;
};

class RiemannianAsFinsler final : public FinslerField {
public:
    explicit RiemannianAsFinsler(RiemannianPtr g) : g_(std::move(g)) {}
    int dim() const override { return g_->dim(); }
    std::string name() const override { return g_->name(); }
    bool in_domain(const Vector& x) const override { return g_->in_domain(x); }
    double norm(const Vector& x, const Vector& v) const override { return std::sqrt(g_->quad(x, v)); }
    double norm_sq(const Vector& x, const Vector& v) const override { return g_->quad(x, v); }
    D1 norm_sq(const VecT<D1>& x, const VecT<D1>& v) const override { return g_->quad(x, v); }
    D2 norm_sq(const Vector& x, const VecT<D2>& v) const override { return form(g_->metric(x), v); }
    D3 norm_sq(const VecT<D1>& x, const VecT<D3>& v) const override { return form(g_->metric(x), v); }

private:
    template <class X, class V>
    static V form(const MatT<X>& G, const VecT<V>& v) {
        V s(0.0);
        for (int i = 0; i < G.rows(); ++i) {
            V row(0.0);
            for (int j = 0; j < G.cols(); ++j) row += G(i, j) * v[j];
            s += v[i] * row;
        }
        return s;
    }

    RiemannianPtr g_;
};

}  // namespace

FinslerPtr reversed(FinslerPtr base) { return std::make_shared<const ReversedFinsler>(std::move(base)); }

FinslerPtr as_finsler(RiemannianPtr background) {
    return std::make_shared<const RiemannianAsFinsler>(std::move(background));
}

// ---- winds ---------------------------------------------------------------

namespace {

template <class S>
VecT<S> generic_wind_impl(const VecT<S>& x, const MatT<S>& G) {
    FFORGE_USING_MATH;
    const int d = x.dim();
    VecT<S> s(d), c(d);
    for (int i = 0; i < d; ++i) {
        s[i] = sin(x[i]);
        c[i] = cos(x[i]);
    }
    const S den = quad_form(G, c);
    double trace = 0.0;
    for (int i = 0; i < d; ++i) trace += value_of(G(i, i));
    if (!(value_of(den) > 1e-12 * trace))
        throw NumericalError("generic wind: (cos x)ᵀG(cos x) vanishes");
    VecT<S> f(d);
    for (int i = 0; i < d; ++i) f[i] = s[i] * c[i] / den;
    return f;
}

class ConstantWind final : public WindField {
public:
    explicit ConstantWind(Vector f) : f_(std::move(f)) {}
    Vector at(const Vector&) const override { return f_; }
    VecT<D1> at(const VecT<D1>&) const override { return lift_vec<D1>(f_); }

private:
    Vector f_;
};

class GenericWind final : public WindField {
public:
    explicit GenericWind(RiemannianPtr g) : g_(std::move(g)) {}
    Vector at(const Vector& x) const override { return generic_wind(x, g_->metric(x)); }
    VecT<D1> at(const VecT<D1>& x) const override { return generic_wind(x, g_->metric(x)); }

private:
    RiemannianPtr g_;
};

}  // namespace

Vector generic_wind(const Vector& x, const Matrix& G) { return generic_wind_impl(x, G); }
VecT<D1> generic_wind(const VecT<D1>& x, const MatT<D1>& G) { return generic_wind_impl(x, G); }

WindPtr zero_wind(int dim) { return std::make_shared<const ConstantWind>(Vector(dim)); }
WindPtr constant_wind(Vector f) { return std::make_shared<const ConstantWind>(std::move(f)); }
WindPtr generic_wind_field(RiemannianPtr background) {
    return std::make_shared<const GenericWind>(std::move(background));
}

// ---- Randers -------------------------------------------------------------

namespace {

template <class X>
RandersField::Coefficients<X> randers_coefficients(const RandersSpec& spec, const VecT<X>& x) {
    const MatT<X> g = spec.background->metric(x);
    const VecT<X> f = spec.wind->at(x);
    const VecT<X> f_low = matvec(g, f);
    const X ff = dot(f, f_low);
    const double wind_norm = std::sqrt(std::max(0.0, value_of(ff)));
    if (!(wind_norm < spec.v0)) throw IllPosedRanders(wind_norm, spec.v0);
    const X lambda = 1.0 / (spec.v0 * spec.v0 - ff);
    const int d = x.dim();
    RandersField::Coefficients<X> c{MatT<X>(d, d), VecT<X>(d)};
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) c.a(i, j) = lambda * g(i, j) + lambda * lambda * f_low[i] * f_low[j];
        c.b[i] = -(lambda * f_low[i]);
    }
    return c;
}

template <class X, class V>
V randers_norm(const RandersField::Coefficients<X>& c, const VecT<V>& v) {
    FFORGE_USING_MATH;
    V avv(0.0), bv(0.0);
    for (int i = 0; i < v.dim(); ++i) {
        V row(0.0);
        for (int j = 0; j < v.dim(); ++j) row += c.a(i, j) * v[j];
        avv += v[i] * row;
        bv += c.b[i] * v[i];
    }
    return sqrt(avv) + bv;
}

template <class X, class V>
V randers_norm_sq(const RandersField::Coefficients<X>& c, const VecT<V>& v) {
    const V F = randers_norm(c, v);
    return F * F;
}

}  // namespace

RandersField::RandersField(RandersSpec spec) : spec_(std::move(spec)) {
    if (!spec_.background || !spec_.wind) throw ConfigError("Randers field needs a background and a wind");
    if (!(spec_.v0 > 0.0)) throw ConfigError("Randers v0 must be positive");
}

RandersField::Coefficients<double> RandersField::coefficients(const Vector& x) const {
    return randers_coefficients(spec_, x);
}
RandersField::Coefficients<D1> RandersField::coefficients(const VecT<D1>& x) const {
    return randers_coefficients(spec_, x);
}

double RandersField::norm(const Vector& x, const Vector& v) const {
    return randers_norm(coefficients(x), v);
}
double RandersField::norm_sq(const Vector& x, const Vector& v) const {
    return randers_norm_sq(coefficients(x), v);
}
D1 RandersField::norm_sq(const VecT<D1>& x, const VecT<D1>& v) const {
    return randers_norm_sq(coefficients(x), v);
}
D2 RandersField::norm_sq(const Vector& x, const VecT<D2>& v) const {
    return randers_norm_sq(coefficients(x), v);
}
D3 RandersField::norm_sq(const VecT<D1>& x, const VecT<D3>& v) const {
    return randers_norm_sq(coefficients(x), v);
}

Matrix randers_fundamental(const RandersSpec& spec, const Vector& x, const Vector& v) {
    return RandersField(spec).fundamental(x, v);
}

std::shared_ptr<const RandersField> make_randers(RandersSpec spec) {
    return std::make_shared<const RandersField>(std::move(spec));
}

VelocityGradients metric_velocity_gradients(const MetricField& field, const Vector& x, const Vector& u) {
    return field.velocity_gradients(x, u);
}

}  // namespace fforge
