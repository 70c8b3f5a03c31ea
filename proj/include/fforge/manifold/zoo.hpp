#pragma once

// The built-in manifolds. Each chart is a small functor with a templated
// metric so the same expression serves doubles and duals.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "fforge/manifold/field.hpp"
#include "fforge/manifold/pullback.hpp"

namespace fforge {

struct ZooParams {
    // Ellipsoid half-axes; defaults to linspace(0.5, 1, d+1).
    std::optional<Vector> half_axes;
    // Whether the default half-axes include the endpoint 1.
    bool half_axes_endpoint = true;
    double torus_R = 3.0;
    double torus_r = 1.0;
    // Points with |x| above this are outside the stereographic charts.
    double chart_cap = 1e6;
};

// Names accepted by zoo_metric.
const std::vector<std::string>& zoo_names();

// Throws ConfigError for unknown names or unsupported dimensions.
RiemannianPtr zoo_metric(const std::string& name, int dim, const ZooParams& params = {});

// linspace(lo, hi, n) with or without the endpoint.
Vector linspace(double lo, double hi, int n, bool endpoint = true);

namespace charts {

inline bool finite_with_dim(const Vector& x, int d) { return x.dim() == d && all_finite(x); }

struct Euclidean {
    int d = 2;
    int dim() const { return d; }
    std::string name() const { return "euclidean"; }
    bool in_domain(const Vector& x) const { return finite_with_dim(x, d); }
    template <class S>
    MatT<S> metric(const VecT<S>&) const {
        return MatT<S>::identity(d);
    }
    template <class S>
    S quad(const VecT<S>&, const VecT<S>& u) const {
        return dot(u, u);
    }
};

// Stereographic chart of the unit sphere: G = 4/(1+|x|²)² I.
struct Sphere {
    int d = 2;
    double cap = 1e6;
    int dim() const { return d; }
    std::string name() const { return "sphere"; }
    bool in_domain(const Vector& x) const { return finite_with_dim(x, d) && norm(x) <= cap; }
    template <class S>
    S conformal(const VecT<S>& x) const {
        const S den = 1.0 + dot(x, x);
        return 4.0 / (den * den);
    }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        const S k = conformal(x);
        MatT<S> G(d, d);
        for (int i = 0; i < d; ++i) G(i, i) = k;
        return G;
    }
    template <class S>
    S quad(const VecT<S>& x, const VecT<S>& u) const {
        return conformal(x) * dot(u, u);
    }
};

using Ellipsoid = PullbackChart<EllipsoidEmbedding>;

// (θ, φ): G = diag(r², (R + r cos θ)²).
struct Torus {
    double R = 3.0;
    double r = 1.0;
    int dim() const { return 2; }
    std::string name() const { return "torus"; }
    bool in_domain(const Vector& x) const { return finite_with_dim(x, 2); }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        using std::cos;
        const S ring = R + r * cos(x[0]);
        MatT<S> G(2, 2);
        G(0, 0) = S(r * r);
        G(1, 1) = ring * ring;
        return G;
    }
    template <class S>
    S quad(const VecT<S>& x, const VecT<S>& u) const {
        using std::cos;
        const S ring = R + r * cos(x[0]);
        return r * r * u[0] * u[0] + ring * ring * u[1] * u[1];
    }
};

// Polar chart (α, β) of the hyperboloid: G = diag(1, sinh²α), singular at α = 0.
struct Hyperbolic {
    int dim() const { return 2; }
    std::string name() const { return "hyperbolic"; }
    bool in_domain(const Vector& x) const {
        return finite_with_dim(x, 2) && std::fabs(x[0]) > 1e-10;
    }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        using std::sinh;
        const S s = sinh(x[0]);
        MatT<S> G(2, 2);
        G(0, 0) = S(1.0);
        G(1, 1) = s * s;
        return G;
    }
    template <class S>
    S quad(const VecT<S>& x, const VecT<S>& u) const {
        using std::sinh;
        const S s = sinh(x[0]);
        return u[0] * u[0] + s * s * u[1] * u[1];
    }
};

// Graph coordinates of (x, |x|²): G = I + 4xxᵀ.
struct Paraboloid {
    int d = 2;
    int dim() const { return d; }
    std::string name() const { return "paraboloid"; }
    bool in_domain(const Vector& x) const { return finite_with_dim(x, d); }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        MatT<S> G = MatT<S>::identity(d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) G(i, j) += 4.0 * x[i] * x[j];
        return G;
    }
    template <class S>
    S quad(const VecT<S>& x, const VecT<S>& u) const {
        const S xu = dot(x, u);
        return dot(u, u) + 4.0 * xu * xu;
    }
};

// Graph coordinates of (x₁, x₂, x₁² − x₂²): G = I + hhᵀ, h = (2x₁, −2x₂).
struct HyperbolicParaboloid {
    int dim() const { return 2; }
    std::string name() const { return "hyperbolic_paraboloid"; }
    bool in_domain(const Vector& x) const { return finite_with_dim(x, 2); }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        const VecT<S> h{2.0 * x[0], -2.0 * x[1]};
        MatT<S> G = MatT<S>::identity(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) G(i, j) += h[i] * h[j];
        return G;
    }
    template <class S>
    S quad(const VecT<S>& x, const VecT<S>& u) const {
        const S hu = 2.0 * x[0] * u[0] - 2.0 * x[1] * u[1];
        return dot(u, u) + hu * hu;
    }
};

// Fisher–Rao metrics of two-parameter families. The second coordinate (or
// both, where noted) must be positive.

// N(μ, σ): diag(1/σ², 2/σ²).
struct GaussianFR {
    int dim() const { return 2; }
    std::string name() const { return "gaussian_fr"; }
    bool in_domain(const Vector& x) const { return finite_with_dim(x, 2) && x[1] > 0.0; }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        const S inv = 1.0 / (x[1] * x[1]);
        MatT<S> G(2, 2);
        G(0, 0) = inv;
        G(1, 1) = 2.0 * inv;
        return G;
    }
};

// Cauchy(μ, σ): I/(2σ²).
struct CauchyFR {
    int dim() const { return 2; }
    std::string name() const { return "cauchy_fr"; }
    bool in_domain(const Vector& x) const { return finite_with_dim(x, 2) && x[1] > 0.0; }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        const S inv = 0.5 / (x[1] * x[1]);
        MatT<S> G(2, 2);
        G(0, 0) = inv;
        G(1, 1) = inv;
        return G;
    }
};

// Fréchet with shape β and scale λ (both positive), γ the Euler–Mascheroni
// constant: [[((1−γ)² + π²/6)/β², (1−γ)/λ], [(1−γ)/λ, β²/λ²]].
struct FrechetFR {
    int dim() const { return 2; }
    std::string name() const { return "frechet_fr"; }
    bool in_domain(const Vector& x) const {
        return finite_with_dim(x, 2) && x[0] > 0.0 && x[1] > 0.0;
    }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        constexpr double g1 = 1.0 - std::numbers::egamma;
        constexpr double c = g1 * g1 + std::numbers::pi * std::numbers::pi / 6.0;
        MatT<S> G(2, 2);
        G(0, 0) = c / (x[0] * x[0]);
        G(0, 1) = g1 / x[1];
        G(1, 0) = G(0, 1);
        G(1, 1) = (x[0] * x[0]) / (x[1] * x[1]);
        return G;
    }
};

// Pareto with scale θ and shape α (both positive): diag(α²/θ², 1/α²).
struct ParetoFR {
    int dim() const { return 2; }
    std::string name() const { return "pareto_fr"; }
    bool in_domain(const Vector& x) const {
        return finite_with_dim(x, 2) && x[0] > 0.0 && x[1] > 0.0;
    }
    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        MatT<S> G(2, 2);
        G(0, 0) = (x[1] * x[1]) / (x[0] * x[0]);
        G(1, 1) = 1.0 / (x[1] * x[1]);
        return G;
    }
};

}  // namespace charts
}  // namespace fforge
