#pragma once

// Forward-mode derivative drivers. f is any callable generic enough to be
// evaluated on the dual type each driver feeds it. Inputs wider than
// kMaxSeeds are differentiated in chunks of kMaxSeeds seeds per sweep.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "fforge/numerics/dual.hpp"
#include "fforge/numerics/errors.hpp"
#include "fforge/numerics/linalg.hpp"

namespace fforge {

namespace detail {
// Seed coordinates [lo, hi) of x as independent variables one level above S.
template <class S>
VecT<Dual<S, kMaxSeeds>> seed_chunk(const VecT<S>& x, int lo, int hi) {
    using DS = Dual<S, kMaxSeeds>;
    VecT<DS> xd(x.size());
    for (int i = 0; i < x.dim(); ++i)
        xd[i] = (i >= lo && i < hi) ? DS::variable(x[i], hi - lo, i - lo) : DS(x[i]);
    return xd;
}

// A singular point (say sqrt at 0) yields inf in its own coordinate and
// 0·inf = NaN in the others, so an infinite entry names the culprit.
inline void check_finite_partials(const Vector& g, int lo, int hi) {
    int culprit = -1;
    for (int i = lo; i < hi && culprit < 0; ++i)
        if (std::isinf(g[i])) culprit = i;
    for (int i = lo; i < hi && culprit < 0; ++i)
        if (std::isnan(g[i])) culprit = i;
    if (culprit >= 0)
        throw NumericalError("non-finite derivative in coordinate " + std::to_string(culprit),
                             culprit);
}
}  // namespace detail

template <class F>
std::pair<double, Vector> value_and_grad_forward(F&& f, const Vector& x) {
    const int d = x.dim();
    Vector g(d);
    double value = 0.0;
    int lo = 0;
    do {
        const int hi = std::min(d, lo + kMaxSeeds);
        const D1 r = f(detail::seed_chunk(x, lo, hi));
        value = r.value();
        if (!std::isfinite(value)) throw NumericalError("non-finite function value", -1);
        for (int i = lo; i < hi; ++i) g[i] = r.partial(i - lo);
        detail::check_finite_partials(g, lo, hi);
        lo = hi;
    } while (lo < d);
    return {value, g};
}

template <class F>
Vector grad_forward(F&& f, const Vector& x) {
    return value_and_grad_forward(std::forward<F>(f), x).second;
}

// Jacobian of a vector map at an arbitrary scalar level S: entries of the
// result are S-valued, so S = D1 yields Jacobians that can be differentiated
// again.
template <class S, class F>
MatT<S> jacobian_at(F&& f, const VecT<S>& x) {
    const int d = x.dim();
    MatT<S> J;
    int lo = 0;
    do {
        const int hi = std::min(d, lo + kMaxSeeds);
        const auto r = f(detail::seed_chunk(x, lo, hi));
        if (J.rows() == 0) J = MatT<S>(r.dim(), d);
        for (int k = 0; k < r.dim(); ++k)
            for (int i = lo; i < hi; ++i) J(k, i) = r[k].partial(i - lo);
        lo = hi;
    } while (lo < d);
    return J;
}

template <class F>
Matrix jacobian_forward(F&& f, const Vector& x) {
    Matrix J = jacobian_at<double>(std::forward<F>(f), x);
    for (int k = 0; k < J.rows(); ++k)
        for (int i = 0; i < J.cols(); ++i)
            if (!std::isfinite(J(k, i)))
                throw NumericalError("non-finite Jacobian entry in coordinate " + std::to_string(i), i);
    return J;
}

// Symmetric Hessian via nested duals. Raw mixed partials are required to
// agree to 1e-9 (relative to the largest entry) before symmetrization.
template <class F>
Matrix hessian_forward(F&& f, const Vector& x) {
    const int d = x.dim();
    Matrix H(d, d);
    for (int blo = 0; blo < d; blo += kMaxSeeds) {
        const int bhi = std::min(d, blo + kMaxSeeds);
        for (int alo = 0; alo < d; alo += kMaxSeeds) {
            const int ahi = std::min(d, alo + kMaxSeeds);
            VecT<D2> xd(x.size());
            for (int k = 0; k < d; ++k) {
                D1 inner = (k >= alo && k < ahi) ? D1::variable(x[k], ahi - alo, k - alo) : D1(x[k]);
                D2 outer(inner);
                if (k >= blo && k < bhi) {
                    outer.resize(bhi - blo);
                    outer.d(k - blo) = D1(1.0);
                }
                xd[k] = outer;
            }
            const D2 r = f(xd);
            if (!std::isfinite(value_of(r))) throw NumericalError("non-finite function value", -1);
            for (int b = blo; b < bhi; ++b) {
                const D1 col = r.partial(b - blo);
                for (int a = alo; a < ahi; ++a) {
                    const double h = col.partial(a - alo);
                    if (!std::isfinite(h))
                        throw NumericalError("non-finite second derivative in coordinate " +
                                                 std::to_string(a),
                                             a);
                    H(a, b) = h;
                }
            }
        }
    }
    if (asymmetry(H) > 1e-9 * std::max(1.0, max_abs(H)))
        throw NumericalError("Hessian mixed partials disagree");
    return symmetrize(H);
}

}  // namespace fforge
