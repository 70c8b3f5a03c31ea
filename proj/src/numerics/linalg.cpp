#include "fforge/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fforge {

double norm(const Vector& x) { return std::sqrt(dot(x, x)); }

double max_abs(const Vector& x) {
    double m = 0.0;
    for (double e : x) m = std::max(m, std::fabs(e));
    return m;
}

double max_abs(const Matrix& A) {
    double m = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) m = std::max(m, std::fabs(A(i, j)));
    return m;
}

double frobenius(const Matrix& A) {
    double s = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) s += A(i, j) * A(i, j);
    return std::sqrt(s);
}

bool all_finite(const Vector& x) {
    return std::all_of(x.begin(), x.end(), [](double e) { return std::isfinite(e); });
}

bool all_finite(const Matrix& A) {
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j)
            if (!std::isfinite(A(i, j))) return false;
    return true;
}

Matrix symmetrize(const Matrix& A) {
    Matrix S(A.rows(), A.cols());
    for (int i = 0; i < A.rows(); ++i)
        for (int j = 0; j < A.cols(); ++j) S(i, j) = 0.5 * (A(i, j) + A(j, i));
    return S;
}

double asymmetry(const Matrix& A) {
    double m = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        for (int j = i + 1; j < A.cols(); ++j) m = std::max(m, std::fabs(A(i, j) - A(j, i)));
    return m;
}

Vector values_of(const VecT<D1>& x) {
    Vector r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i].value();
    return r;
}

Cholesky::Cholesky(const Matrix& A) : L_(A.rows(), A.cols()) {
    if (A.rows() != A.cols()) throw ShapeError("Cholesky of a non-square matrix");
    const int n = A.rows();
    for (int j = 0; j < n; ++j) {
        double diag = A(j, j);
        for (int k = 0; k < j; ++k) diag -= L_(j, k) * L_(j, k);
        if (!(diag > 0.0)) throw NotSPD(j, diag);
        const double ljj = std::sqrt(diag);
        L_(j, j) = ljj;
        for (int i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (int k = 0; k < j; ++k) s -= L_(i, k) * L_(j, k);
            L_(i, j) = s / ljj;
        }
    }
}

Vector Cholesky::solve(const Vector& b) const {
    const int n = dim();
    if (b.dim() != n) throw ShapeError("spd_solve: right-hand side has wrong length");
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        double s = b[i];
        for (int k = 0; k < i; ++k) s -= L_(i, k) * y[k];
        y[i] = s / L_(i, i);
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = y[i];
        for (int k = i + 1; k < n; ++k) s -= L_(k, i) * y[k];
        y[i] = s / L_(i, i);
    }
    return y;
}

Matrix Cholesky::solve(const Matrix& B) const {
    if (B.rows() != dim()) throw ShapeError("spd_solve: right-hand side has wrong rows");
    Matrix X(B.rows(), B.cols());
    Vector col(B.rows());
    for (int j = 0; j < B.cols(); ++j) {
        for (int i = 0; i < B.rows(); ++i) col[i] = B(i, j);
        const Vector x = solve(col);
        for (int i = 0; i < B.rows(); ++i) X(i, j) = x[i];
    }
    return X;
}

Matrix Cholesky::inverse() const {
    Matrix inv = solve(Matrix::identity(dim()));
    return symmetrize(inv);
}

Vector spd_solve(const Matrix& A, const Vector& b) { return Cholesky(A).solve(b); }
Matrix spd_solve(const Matrix& A, const Matrix& B) { return Cholesky(A).solve(B); }
Matrix spd_inverse(const Matrix& A) { return Cholesky(A).inverse(); }

bool is_spd(const Matrix& A) {
    try {
        Cholesky c(A);
        return true;
    } catch (const NotSPD&) {
        return false;
    }
}

Vector sum_deterministic(const std::vector<Vector>& terms, int dim_hint) {
    if (terms.empty()) {
        if (dim_hint < 0) throw ShapeError("empty sum without a shape hint");
        return Vector(dim_hint);
    }
    Vector s = terms.front();
    if (dim_hint >= 0 && s.dim() != dim_hint) throw ShapeError("sum term does not match hint");
    for (std::size_t k = 1; k < terms.size(); ++k) {
        if (terms[k].size() != s.size()) throw ShapeError("sum terms differ in length");
        s += terms[k];
    }
    return s;
}

Matrix sum_deterministic(const std::vector<Matrix>& terms, int rows_hint, int cols_hint) {
    if (terms.empty()) {
        if (rows_hint < 0 || cols_hint < 0) throw ShapeError("empty sum without a shape hint");
        return Matrix(rows_hint, cols_hint);
    }
    Matrix s = terms.front();
    if ((rows_hint >= 0 && s.rows() != rows_hint) || (cols_hint >= 0 && s.cols() != cols_hint))
        throw ShapeError("sum term does not match hint");
    for (std::size_t k = 1; k < terms.size(); ++k) {
        if (terms[k].rows() != s.rows() || terms[k].cols() != s.cols())
            throw ShapeError("sum terms differ in shape");
        s += terms[k];
    }
    return s;
}

SymmetricEigen symmetric_eigen(const Matrix& S, double off_tol, int max_sweeps) {
    if (S.rows() != S.cols()) throw ShapeError("eigendecomposition of a non-square matrix");
    const int n = S.rows();
    Matrix A = symmetrize(S);
    Matrix V = Matrix::identity(n);

    auto off_norm = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) s += A(i, j) * A(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < max_sweeps && off_norm() > off_tol; ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return A(a, a) > A(b, b); });

    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (int k = 0; k < n; ++k) {
        const int src = order[k];
        out.values[k] = A(src, src);
        double sign = 1.0;
        for (int i = 0; i < n; ++i)
            if (std::fabs(V(i, src)) > 1e-14) {
                sign = V(i, src) < 0.0 ? -1.0 : 1.0;
                break;
            }
        for (int i = 0; i < n; ++i) out.vectors(i, k) = sign * V(i, src);
    }
    return out;
}

}  // namespace fforge
