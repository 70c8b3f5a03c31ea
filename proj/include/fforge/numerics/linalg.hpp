#pragma once

// Small dense vectors and matrices, generic over the scalar so the same
// metric code runs on doubles and on duals. Factorizations are double-only.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "fforge/numerics/dual.hpp"
#include "fforge/numerics/errors.hpp"

namespace fforge {

template <class T>
class VecT {
public:
    VecT() = default;
    explicit VecT(std::size_t n, const T& fill = T(0.0)) : v_(n, fill) {}
    VecT(std::initializer_list<T> init) : v_(init) {}
    explicit VecT(std::vector<T> v) : v_(std::move(v)) {}

    std::size_t size() const { return v_.size(); }
    int dim() const { return static_cast<int>(v_.size()); }
    T& operator[](std::size_t i) { return v_[i]; }
    const T& operator[](std::size_t i) const { return v_[i]; }
    T* data() { return v_.data(); }
    const T* data() const { return v_.data(); }
    auto begin() { return v_.begin(); }
    auto end() { return v_.end(); }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }
    const std::vector<T>& std() const { return v_; }

    VecT& operator+=(const VecT& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
        return *this;
    }
    VecT& operator-=(const VecT& o) {
        for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
        return *this;
    }
    VecT& operator*=(double c) {
        for (auto& e : v_) e *= c;
        return *this;
    }

    bool operator==(const VecT& o) const { return v_ == o.v_; }

private:
    std::vector<T> v_;
};

template <class T>
class MatT {
public:
    MatT() = default;
    MatT(int rows, int cols, const T& fill = T(0.0))
        : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}
    MatT(std::initializer_list<std::initializer_list<T>> rows) {
        r_ = static_cast<int>(rows.size());
        c_ = r_ ? static_cast<int>(rows.begin()->size()) : 0;
        a_.reserve(static_cast<std::size_t>(r_) * c_);
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c_) throw ShapeError("ragged matrix literal");
            a_.insert(a_.end(), row.begin(), row.end());
        }
    }

    static MatT identity(int n) {
        MatT m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1.0);
        return m;
    }

    int rows() const { return r_; }
    int cols() const { return c_; }
    T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    T* data() { return a_.data(); }
    const T* data() const { return a_.data(); }

    MatT& operator+=(const MatT& o) {
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    MatT& operator-=(const MatT& o) {
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    MatT& operator*=(double c) {
        for (auto& e : a_) e *= c;
        return *this;
    }

    bool operator==(const MatT& o) const { return r_ == o.r_ && c_ == o.c_ && a_ == o.a_; }

private:
    int r_ = 0;
    int c_ = 0;
    std::vector<T> a_;
};

using Vector = VecT<double>;
using Matrix = MatT<double>;

// ---- generic elementwise algebra ----------------------------------------

template <class T>
VecT<T> operator+(VecT<T> a, const VecT<T>& b) {
    return a += b;
}
template <class T>
VecT<T> operator-(VecT<T> a, const VecT<T>& b) {
    return a -= b;
}
template <class T>
VecT<T> operator-(const VecT<T>& a) {
    VecT<T> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}
template <class T>
VecT<T> operator*(double c, VecT<T> a) {
    return a *= c;
}
template <class T>
VecT<T> operator*(VecT<T> a, double c) {
    return a *= c;
}
template <class T>
MatT<T> operator+(MatT<T> a, const MatT<T>& b) {
    return a += b;
}
template <class T>
MatT<T> operator-(MatT<T> a, const MatT<T>& b) {
    return a -= b;
}
template <class T>
MatT<T> operator*(double c, MatT<T> a) {
    return a *= c;
}

template <class T>
T dot(const VecT<T>& a, const VecT<T>& b) {
    T s(0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class T>
VecT<T> matvec(const MatT<T>& A, const VecT<T>& x) {
    VecT<T> y(A.rows());
    for (int i = 0; i < A.rows(); ++i) {
        T s(0.0);
        for (int j = 0; j < A.cols(); ++j) s += A(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

// xᵀ A x
template <class T>
T quad_form(const MatT<T>& A, const VecT<T>& x) {
    T s(0.0);
    for (int i = 0; i < A.rows(); ++i) {
        T row(0.0);
        for (int j = 0; j < A.cols(); ++j) row += A(i, j) * x[j];
        s += x[i] * row;
    }
    return s;
}

template <class T>
MatT<T> matmul(const MatT<T>& A, const MatT<T>& B) {
    MatT<T> C(A.rows(), B.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int k = 0; k < A.cols(); ++k) {
            const T& aik = A(i, k);
            for (int j = 0; j < B.cols(); ++j) C(i, j) += aik * B(k, j);
        }
    return C;
}

template <class T>
MatT<T> transpose(const MatT<T>& A) {
    MatT<T> B(A.cols(), A.rows());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) B(j, i) = A(i, j);
    return B;
}

// JᵀJ
template <class T>
MatT<T> gram(const MatT<T>& J) {
    const int n = J.cols();
    MatT<T> G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            T s(0.0);
            for (int k = 0; k < J.rows(); ++k) s += J(k, i) * J(k, j);
            G(i, j) = s;
            if (j != i) G(j, i) = s;
        }
    return G;
}

template <class T>
MatT<T> outer(const VecT<T>& a, const VecT<T>& b) {
    MatT<T> M(a.dim(), b.dim());
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < b.dim(); ++j) M(i, j) = a[i] * b[j];
    return M;
}

// ---- double-only helpers --------------------------------------------------

double norm(const Vector& x);
double max_abs(const Vector& x);
double max_abs(const Matrix& A);
double frobenius(const Matrix& A);
bool all_finite(const Vector& x);
bool all_finite(const Matrix& A);

// (A + Aᵀ)/2
Matrix symmetrize(const Matrix& A);
// max |A - Aᵀ|
double asymmetry(const Matrix& A);

Vector values_of(const VecT<D1>& x);
// Constant (unseeded) lift of a double vector.
template <class S>
VecT<S> lift_vec(const Vector& x) {
    VecT<S> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = S(x[i]);
    return r;
}

// Cholesky A = LLᵀ without pivoting. A non-positive pivot throws NotSPD.
class Cholesky {
public:
    explicit Cholesky(const Matrix& A);
    int dim() const { return L_.rows(); }
    const Matrix& L() const { return L_; }
    Vector solve(const Vector& b) const;
    Matrix solve(const Matrix& B) const;
    Matrix inverse() const;

private:
    Matrix L_;
};

Vector spd_solve(const Matrix& A, const Vector& b);
Matrix spd_solve(const Matrix& A, const Matrix& B);
Matrix spd_inverse(const Matrix& A);
// Cholesky succeeds.
bool is_spd(const Matrix& A);

// Left-to-right sum of equally shaped terms. An empty sequence needs the
// shape hint; mismatched shapes throw ShapeError.
Vector sum_deterministic(const std::vector<Vector>& terms, int dim_hint = -1);
Matrix sum_deterministic(const std::vector<Matrix>& terms, int rows_hint = -1,
                         int cols_hint = -1);

// Symmetric eigendecomposition by cyclic Jacobi rotations. Eigenvalues are
// sorted descending; column k of vectors pairs with values[k]. Each column
// is sign-normalized so that its first nonzero entry is positive.
struct SymmetricEigen {
    Vector values;
    Matrix vectors;
};
SymmetricEigen symmetric_eigen(const Matrix& S, double off_tol = 1e-12, int max_sweeps = 100);

}  // namespace fforge
