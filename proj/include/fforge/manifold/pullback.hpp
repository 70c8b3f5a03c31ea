#pragma once

// Metrics induced by smooth embeddings, G(x) = J(x)ᵀJ(x).

#include <cmath>
#include <limits>
#include <string>

#include "fforge/manifold/field.hpp"

namespace fforge {

// embed must be callable on VecT<S> for double and every dual level:
//   template <class S> VecT<S> operator()(const VecT<S>& x) const;
template <class Embed>
struct EmbeddingSpec {
    int intrinsic_dim = 0;
    int ambient_dim = 0;
    Embed embed;
};

// JᵀJ at x; throws NotSPD when J is rank deficient.
template <class Embed>
Matrix pullback_metric(const EmbeddingSpec<Embed>& spec, const Vector& x) {
    if (x.dim() != spec.intrinsic_dim) throw ShapeError("pullback_metric: wrong point dimension");
    const Matrix J = jacobian_forward(spec.embed, x);
    if (J.rows() != spec.ambient_dim) throw ShapeError("pullback_metric: embedding has wrong output size");
    Matrix G = gram(J);
    Cholesky check(G);
    return G;
}

// Chart functor for ChartField built from an embedding. The quadratic form
// |J u|² is taken with a single directional derivative instead of the full J.
template <class Embed>
struct PullbackChart {
    EmbeddingSpec<Embed> spec;
    std::string label = "pullback";
    double cap = 1e6;

    int dim() const { return spec.intrinsic_dim; }
    std::string name() const { return label; }
    bool in_domain(const Vector& x) const {
        return x.dim() == dim() && all_finite(x) && norm(x) <= cap;
    }

    template <class S>
    MatT<S> metric(const VecT<S>& x) const {
        return gram(jacobian_at<S>(spec.embed, x));
    }

    template <class S>
    S quad(const VecT<S>& x, const VecT<S>& u) const {
        using DS = Dual<S, 1>;
        VecT<DS> xd(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            xd[i] = DS(x[i]);
            xd[i].resize(1);
            xd[i].d(0) = u[i];
        }
        const VecT<DS> y = spec.embed(xd);
        S s(0.0);
        for (std::size_t k = 0; k < y.size(); ++k) {
            const S dk = y[k].partial(0);
            s += dk * dk;
        }
        return s;
    }
};

// ---- embeddings ----------------------------------------------------------

struct IdentityEmbedding {
    template <class S>
    VecT<S> operator()(const VecT<S>& x) const {
        return x;
    }
};

// Inverse stereographic projection onto the unit sphere S^d ⊂ R^{d+1},
// sending the chart origin to the north pole (0, …, 0, 1).
struct StereographicSphere {
    template <class S>
    VecT<S> operator()(const VecT<S>& x) const {
        S s(0.0);
        for (const auto& e : x) s += e * e;
        const S inv = 1.0 / (1.0 + s);
        VecT<S> p(x.size() + 1);
        for (std::size_t i = 0; i < x.size(); ++i) p[i] = 2.0 * x[i] * inv;
        p[x.size()] = (1.0 - s) * inv;
        return p;
    }
};

// Ellipsoid with half-axes p: the stereographic sphere scaled by p.
struct EllipsoidEmbedding {
    Vector half_axes;

    template <class S>
    VecT<S> operator()(const VecT<S>& x) const {
        VecT<S> p = StereographicSphere{}(x);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = half_axes[i] * p[i];
        return p;
    }
};

// Graph of |x|² over R^d.
struct ParaboloidEmbedding {
    template <class S>
    VecT<S> operator()(const VecT<S>& x) const {
        VecT<S> p(x.size() + 1);
        S s(0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            p[i] = x[i];
            s += x[i] * x[i];
        }
        p[x.size()] = s;
        return p;
    }
};

// Graph of x₁² − x₂² over R².
struct HyperbolicParaboloidEmbedding {
    template <class S>
    VecT<S> operator()(const VecT<S>& x) const {
        return VecT<S>{x[0], x[1], x[0] * x[0] - x[1] * x[1]};
    }
};

struct TorusEmbedding {
    double R = 3.0;
    double r = 1.0;

    template <class S>
    VecT<S> operator()(const VecT<S>& x) const {
        using std::cos;
        using std::sin;
        const S ring = R + r * cos(x[0]);
        return VecT<S>{ring * cos(x[1]), ring * sin(x[1]), r * sin(x[0])};
    }
};

// SPD matrices of size n as l(x)l(x)ᵀ, with l(x) the lower triangle filled
// row by row from x ∈ R^{n(n+1)/2}. Output is the row-major n×n product.
struct SpdEmbedding {
    int n = 2;

    template <class S>
    VecT<S> operator()(const VecT<S>& x) const {
        MatT<S> L(n, n);
        int k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) L(i, j) = x[k++];
        VecT<S> out(static_cast<std::size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                S s(0.0);
                for (int m = 0; m <= std::min(i, j); ++m) s += L(i, m) * L(j, m);
                out[static_cast<std::size_t>(i) * n + j] = s;
            }
        return out;
    }
};

}  // namespace fforge
