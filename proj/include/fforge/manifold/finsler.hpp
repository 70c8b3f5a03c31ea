#pragma once

// Finsler fields given by a norm F(x, v). The fundamental tensor is
// G(x,v) = ½ Hess_v F², obtained by nested forward-mode AD.

#include <memory>

#include "fforge/manifold/field.hpp"

namespace fforge {

class FinslerField : public MetricField {
public:
    // F(x, v)
    virtual double norm(const Vector& x, const Vector& v) const = 0;
    // F² at the dual levels the derivative drivers need.
    virtual double norm_sq(const Vector& x, const Vector& v) const = 0;
    virtual D1 norm_sq(const VecT<D1>& x, const VecT<D1>& v) const = 0;
    virtual D2 norm_sq(const Vector& x, const VecT<D2>& v) const = 0;
    virtual D3 norm_sq(const VecT<D1>& x, const VecT<D3>& v) const = 0;

    bool velocity_dependent() const final { return true; }

    // ½ Hess_v F²(x, v), symmetrized and checked SPD. At v = 0 the tensor
    // is undefined; there the average of ½[G(x,e_k) + G(x,−e_k)] over the
    // coordinate directions is returned.
    Matrix fundamental(const Vector& x, const Vector& v) const;

    Matrix tensor(const Vector& x, const Vector& u) const final { return fundamental(x, u); }
    // uᵀG(x,u)u, which equals F(x,u)² by homogeneity.
    double energy_term(const Vector& x, const Vector& u) const final { return norm_sq(x, u); }
    VelocityGradients velocity_gradients(const Vector& x, const Vector& u) const final;
    TermDerivatives term_derivatives(const Vector& x, const Vector& u) const final;
};

using FinslerPtr = std::shared_ptr<const FinslerField>;

// G̃(x,u) = G(x,−u): F̃(x,v) = F(x,−v).
FinslerPtr reversed(FinslerPtr base);

// Riemannian metric viewed as a (velocity-independent) Finsler norm
// F = sqrt(vᵀG(x)v). Useful for reduction checks.
FinslerPtr as_finsler(RiemannianPtr background);

// ---- wind fields and the Randers (Zermelo) construction -----------------

class WindField {
public:
    virtual ~WindField() = default;
    virtual Vector at(const Vector& x) const = 0;
    virtual VecT<D1> at(const VecT<D1>& x) const = 0;
};

using WindPtr = std::shared_ptr<const WindField>;

WindPtr zero_wind(int dim);
WindPtr constant_wind(Vector f);
// f(x) = (sin x ⊙ cos x) / ((cos x)ᵀ G(x) (cos x)) with G the background metric.
WindPtr generic_wind_field(RiemannianPtr background);

// The wind formula for a given metric value; NumericalError when the
// denominator vanishes (below 1e-12 · trace G).
Vector generic_wind(const Vector& x, const Matrix& G);
VecT<D1> generic_wind(const VecT<D1>& x, const MatT<D1>& G);

struct RandersSpec {
    RiemannianPtr background;
    WindPtr wind;
    double v0 = 1.5;
};

// F = sqrt(vᵀa v) + bᵀv with f_♭ = g f, λ = 1/(v0² − fᵀg f),
// a = λ g + λ² f_♭ f_♭ᵀ, b = −λ f_♭. IllPosedRanders when |f|_g ≥ v0.
class RandersField final : public FinslerField {
public:
    explicit RandersField(RandersSpec spec);

    const RandersSpec& spec() const { return spec_; }
    int dim() const override { return spec_.background->dim(); }
    std::string name() const override { return "randers(" + spec_.background->name() + ")"; }
    bool in_domain(const Vector& x) const override { return spec_.background->in_domain(x); }

    double norm(const Vector& x, const Vector& v) const override;
    double norm_sq(const Vector& x, const Vector& v) const override;
    D1 norm_sq(const VecT<D1>& x, const VecT<D1>& v) const override;
    D2 norm_sq(const Vector& x, const VecT<D2>& v) const override;
    D3 norm_sq(const VecT<D1>& x, const VecT<D3>& v) const override;

    template <class X>
    struct Coefficients {
        MatT<X> a;
        VecT<X> b;
    };
    Coefficients<double> coefficients(const Vector& x) const;
    Coefficients<D1> coefficients(const VecT<D1>& x) const;

private:
    RandersSpec spec_;
};

Matrix randers_fundamental(const RandersSpec& spec, const Vector& x, const Vector& v);
std::shared_ptr<const RandersField> make_randers(RandersSpec spec);

// ν and ζ of any field; thin wrapper kept for symmetry with the other
// named operations.
VelocityGradients metric_velocity_gradients(const MetricField& field, const Vector& x, const Vector& u);

}  // namespace fforge
