#pragma once

// Forward-mode dual numbers with a fixed-capacity partials buffer.
//
// Dual<T, K> carries a value of type T and up to K partials, only the first
// n() of which are live. Constants have n() == 0, so mixing seeded and
// unseeded values costs nothing for the unseeded side. Nesting (T itself a
// Dual) gives higher-order derivatives.

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>

namespace fforge {

// Seeds per sweep. Gradients in more dimensions are taken in chunks.
inline constexpr int kMaxSeeds = 16;

template <class T, int K>
class Dual;

template <class T>
struct is_dual : std::false_type {};
template <class T, int K>
struct is_dual<Dual<T, K>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

// is_lower_v<S, D>: S is double or one of the scalar layers nested inside D.
template <class S, class D>
struct is_lower : std::false_type {};
template <class S, class T, int K>
struct is_lower<S, Dual<T, K>>
    : std::bool_constant<std::is_same_v<S, T> || is_lower<S, T>::value> {};
template <class S, class D>
inline constexpr bool is_lower_v = is_lower<S, D>::value;

template <class T, int K>
class Dual {
public:
    using Scalar = T;
    static constexpr int capacity = K;

    Dual() : v_(), n_(0) {}
    Dual(double c) : v_(c), n_(0) {}
    Dual(const T& v) requires(!std::is_same_v<T, double>) : v_(v), n_(0) {}

    // Copies touch only the live partials; the tail of d_ is never read.
    Dual(const Dual& o) : v_(o.v_), n_(o.n_) {
        for (int i = 0; i < n_; ++i) d_[i] = o.d_[i];
    }
    Dual& operator=(const Dual& o) {
        v_ = o.v_;
        n_ = o.n_;
        for (int i = 0; i < n_; ++i) d_[i] = o.d_[i];
        return *this;
    }

    // Independent variable: value v with n partials, a unit seed at idx.
    static Dual variable(const T& v, int n, int idx) {
        Dual r(v);
        r.resize(n);
        r.d_[idx] = T(1.0);
        return r;
    }

    const T& value() const { return v_; }
    T& value() { return v_; }
    int n() const { return n_; }

    // Partial i; zero for i beyond the live range.
    T partial(int i) const { return i < n_ ? d_[i] : T(0.0); }
    T& d(int i) { return d_[i]; }
    const T& d(int i) const { return d_[i]; }

    // Grow the live range, zero-filling new slots.
    void resize(int n) {
        for (int i = n_; i < n; ++i) d_[i] = T(0.0);
        n_ = n;
    }

    Dual& operator+=(const Dual& b) { return *this = *this + b; }
    Dual& operator-=(const Dual& b) { return *this = *this - b; }
    Dual& operator*=(const Dual& b) { return *this = *this * b; }
    Dual& operator/=(const Dual& b) { return *this = *this / b; }

private:
    T v_;
    std::array<T, K> d_;
    int n_;
};

inline double value_of(double x) { return x; }
template <class T, int K>
double value_of(const Dual<T, K>& x) {
    return value_of(x.value());
}

// Embed a lower-order value into S (constant at every new level).
template <class S, class U>
S lift(const U& u) {
    if constexpr (std::is_same_v<S, U>) {
        return u;
    } else {
        return S(lift<typename S::Scalar>(u));
    }
}

// ---- arithmetic between equal types -------------------------------------

template <class T, int K>
Dual<T, K> operator-(const Dual<T, K>& a) {
    Dual<T, K> r(-a.value());
    r.resize(a.n());
    for (int i = 0; i < a.n(); ++i) r.d(i) = -a.d(i);
    return r;
}

template <class T, int K>
Dual<T, K> operator+(const Dual<T, K>& a, const Dual<T, K>& b) {
    Dual<T, K> r(a.value() + b.value());
    const int m = std::min(a.n(), b.n());
    r.resize(std::max(a.n(), b.n()));
    for (int i = 0; i < m; ++i) r.d(i) = a.d(i) + b.d(i);
    for (int i = m; i < a.n(); ++i) r.d(i) = a.d(i);
    for (int i = m; i < b.n(); ++i) r.d(i) = b.d(i);
    return r;
}

template <class T, int K>
Dual<T, K> operator-(const Dual<T, K>& a, const Dual<T, K>& b) {
    Dual<T, K> r(a.value() - b.value());
    const int m = std::min(a.n(), b.n());
    r.resize(std::max(a.n(), b.n()));
    for (int i = 0; i < m; ++i) r.d(i) = a.d(i) - b.d(i);
    for (int i = m; i < a.n(); ++i) r.d(i) = a.d(i);
    for (int i = m; i < b.n(); ++i) r.d(i) = -b.d(i);
    return r;
}

template <class T, int K>
Dual<T, K> operator*(const Dual<T, K>& a, const Dual<T, K>& b) {
    Dual<T, K> r(a.value() * b.value());
    const int m = std::min(a.n(), b.n());
    r.resize(std::max(a.n(), b.n()));
    for (int i = 0; i < m; ++i) r.d(i) = a.d(i) * b.value() + a.value() * b.d(i);
    for (int i = m; i < a.n(); ++i) r.d(i) = a.d(i) * b.value();
    for (int i = m; i < b.n(); ++i) r.d(i) = a.value() * b.d(i);
    return r;
}

template <class T, int K>
Dual<T, K> operator/(const Dual<T, K>& a, const Dual<T, K>& b) {
    const T inv = T(1.0) / b.value();
    Dual<T, K> r(a.value() * inv);
    const int m = std::min(a.n(), b.n());
    r.resize(std::max(a.n(), b.n()));
    for (int i = 0; i < m; ++i) r.d(i) = (a.d(i) - r.value() * b.d(i)) * inv;
    for (int i = m; i < a.n(); ++i) r.d(i) = a.d(i) * inv;
    for (int i = m; i < b.n(); ++i) r.d(i) = -(r.value() * b.d(i)) * inv;
    return r;
}

// ---- arithmetic with a lower-order scalar c -----------------------------

template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator+(const Dual<T, K>& a, const S& c) {
    Dual<T, K> r(a);
    r.value() = a.value() + c;
    return r;
}
template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator+(const S& c, const Dual<T, K>& a) {
    return a + c;
}
template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator-(const Dual<T, K>& a, const S& c) {
    Dual<T, K> r(a);
    r.value() = a.value() - c;
    return r;
}
template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator-(const S& c, const Dual<T, K>& a) {
    Dual<T, K> r(-a);
    r.value() = c - a.value();
    return r;
}
template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator*(const Dual<T, K>& a, const S& c) {
    Dual<T, K> r(a.value() * c);
    r.resize(a.n());
    for (int i = 0; i < a.n(); ++i) r.d(i) = a.d(i) * c;
    return r;
}
template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator*(const S& c, const Dual<T, K>& a) {
    return a * c;
}
template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator/(const Dual<T, K>& a, const S& c) {
    const auto inv = 1.0 / c;
    return a * inv;
}
template <class T, int K, class S>
    requires is_lower_v<S, Dual<T, K>>
Dual<T, K> operator/(const S& c, const Dual<T, K>& a) {
    return Dual<T, K>(lift<T>(c)) / a;
}

// ---- comparisons act on the innermost value -----------------------------

template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
bool operator<(const A& a, const B& b) {
    return value_of(a) < value_of(b);
}
template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
bool operator>(const A& a, const B& b) {
    return value_of(a) > value_of(b);
}
template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
bool operator<=(const A& a, const B& b) {
    return value_of(a) <= value_of(b);
}
template <class A, class B>
    requires(is_dual_v<A> || is_dual_v<B>)
bool operator>=(const A& a, const B& b) {
    return value_of(a) >= value_of(b);
}

// ---- elementary functions ------------------------------------------------
// Found by ADL for duals. Generic code pulls in the std overloads for
// doubles with using-declarations (see FFORGE_USING_MATH).

#define FFORGE_USING_MATH \
    using std::sqrt;      \
    using std::exp;       \
    using std::log;       \
    using std::sin;       \
    using std::cos;       \
    using std::tan;       \
    using std::sinh;      \
    using std::cosh;      \
    using std::tanh;      \
    using std::atan;      \
    using std::pow;       \
    using std::abs

namespace detail {
// f(a) given f(a.value()) and f'(a.value()).
template <class T, int K>
Dual<T, K> chain(const Dual<T, K>& a, const T& f, const T& df) {
    Dual<T, K> r(f);
    r.resize(a.n());
    for (int i = 0; i < a.n(); ++i) r.d(i) = df * a.d(i);
    return r;
}
}  // namespace detail

template <class T, int K>
Dual<T, K> sqrt(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    const T s = sqrt(a.value());
    return detail::chain(a, s, 0.5 / s);
}
template <class T, int K>
Dual<T, K> exp(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    const T e = exp(a.value());
    return detail::chain(a, e, e);
}
template <class T, int K>
Dual<T, K> log(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    return detail::chain(a, log(a.value()), 1.0 / a.value());
}
template <class T, int K>
Dual<T, K> sin(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    return detail::chain(a, sin(a.value()), cos(a.value()));
}
template <class T, int K>
Dual<T, K> cos(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    return detail::chain(a, cos(a.value()), -sin(a.value()));
}
template <class T, int K>
Dual<T, K> tan(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    const T t = tan(a.value());
    return detail::chain(a, t, 1.0 + t * t);
}
template <class T, int K>
Dual<T, K> sinh(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    return detail::chain(a, sinh(a.value()), cosh(a.value()));
}
template <class T, int K>
Dual<T, K> cosh(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    return detail::chain(a, cosh(a.value()), sinh(a.value()));
}
template <class T, int K>
Dual<T, K> tanh(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    const T t = tanh(a.value());
    return detail::chain(a, t, 1.0 - t * t);
}
template <class T, int K>
Dual<T, K> atan(const Dual<T, K>& a) {
    FFORGE_USING_MATH;
    return detail::chain(a, atan(a.value()), 1.0 / (1.0 + a.value() * a.value()));
}
template <class T, int K>
Dual<T, K> pow(const Dual<T, K>& a, double p) {
    FFORGE_USING_MATH;
    const T pm1 = pow(a.value(), p - 1.0);
    return detail::chain(a, pm1 * a.value(), p * pm1);
}
template <class T, int K>
Dual<T, K> abs(const Dual<T, K>& a) {
    return value_of(a) < 0.0 ? -a : a;
}

// True when the value and all live partials (at every level) are finite.
inline bool all_finite(double x) { return std::isfinite(x); }
template <class T, int K>
bool all_finite(const Dual<T, K>& a) {
    if (!all_finite(a.value())) return false;
    for (int i = 0; i < a.n(); ++i)
        if (!all_finite(a.d(i))) return false;
    return true;
}

// Standard nestings.
using D1 = Dual<double, kMaxSeeds>;  // gradients
using D2 = Dual<D1, kMaxSeeds>;      // Hessians
// Two directional derivatives stacked on a gradient: the second derivative
// of f along a fixed direction, differentiated once more in K directions.
using D3 = Dual<Dual<D1, 1>, 1>;

}  // namespace fforge
