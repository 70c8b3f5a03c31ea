#include <doctest.h>

#include <random>

#include "fforge/numerics/autodiff.hpp"
#include "fforge/numerics/linalg.hpp"
#include "fforge/numerics/parallel.hpp"
#include "oracles.hpp"

using namespace fforge;

namespace {

// Stereographic sphere energy integrand 4|u|²/(1+|x|²)², written out by hand.
template <class S>
S sphere_integrand(const VecT<S>& z) {
    const int d = z.dim() / 2;
    S xx(0.0), uu(0.0);
    for (int i = 0; i < d; ++i) {
        xx += z[i] * z[i];
        uu += z[d + i] * z[d + i];
    }
    const S den = 1.0 + xx;
    return 4.0 * uu / (den * den);
}

}  // namespace

TEST_CASE("dual arithmetic follows the chain rule") {
    const D1 x = D1::variable(2.0, 2, 0);
    const D1 y = D1::variable(3.0, 2, 1);
    const D1 f = x * y + sin(x) / y - 2.0 * exp(y);
    CHECK(f.value() == doctest::Approx(6.0 + std::sin(2.0) / 3.0 - 2.0 * std::exp(3.0)));
    CHECK(f.partial(0) == doctest::Approx(3.0 + std::cos(2.0) / 3.0));
    CHECK(f.partial(1) == doctest::Approx(2.0 - std::sin(2.0) / 9.0 - 2.0 * std::exp(3.0)));
    // constants carry no partials
    const D1 c(5.0);
    CHECK(c.n() == 0);
    CHECK((c * x).partial(0) == doctest::Approx(5.0));
    CHECK((x - c).partial(1) == 0.0);
}

TEST_CASE("dual elementary functions match their derivatives") {
    const double v = 0.7;
    const D1 x = D1::variable(v, 1, 0);
    CHECK(sqrt(x).partial(0) == doctest::Approx(0.5 / std::sqrt(v)));
    CHECK(log(x).partial(0) == doctest::Approx(1.0 / v));
    CHECK(cos(x).partial(0) == doctest::Approx(-std::sin(v)));
    CHECK(tan(x).partial(0) == doctest::Approx(1.0 / (std::cos(v) * std::cos(v))));
    CHECK(sinh(x).partial(0) == doctest::Approx(std::cosh(v)));
    CHECK(cosh(x).partial(0) == doctest::Approx(std::sinh(v)));
    CHECK(tanh(x).partial(0) == doctest::Approx(1.0 - std::tanh(v) * std::tanh(v)));
    CHECK(atan(x).partial(0) == doctest::Approx(1.0 / (1.0 + v * v)));
    CHECK(pow(x, 2.5).partial(0) == doctest::Approx(2.5 * std::pow(v, 1.5)));
    CHECK(abs(-x).partial(0) == doctest::Approx(1.0));
    CHECK((1.0 / x).partial(0) == doctest::Approx(-1.0 / (v * v)));
}

TEST_CASE("grad_forward on hand-differentiable functions") {
    auto sq = [](const auto& x) { return dot(x, x); };
    const Vector g = grad_forward(sq, Vector{1.0, 2.0});
    CHECK(g[0] == 2.0);
    CHECK(g[1] == 4.0);

    auto constant = [](const auto&) { return D1(3.0); };
    const Vector z = grad_forward(constant, Vector{0.3, -0.2, 0.9});
    for (double e : z) CHECK(e == 0.0);
}

TEST_CASE("grad_forward matches central differences on the sphere integrand") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector z = oracle::random_vector(rng, 4);
        const Vector g = grad_forward([](const auto& v) { return sphere_integrand(v); }, z);
        const Vector fd = oracle::fd_gradient([](const Vector& v) { return sphere_integrand(v); }, z);
        for (int i = 0; i < 4; ++i) CHECK(std::fabs(g[i] - fd[i]) < 1e-6);
    }
}

TEST_CASE("grad_forward chunks inputs wider than the seed capacity") {
    const int d = 2 * kMaxSeeds + 3;
    Vector x(d);
    for (int i = 0; i < d; ++i) x[i] = 0.1 * (i + 1);
    auto f = [](const auto& v) {
        using S = std::decay_t<decltype(v[0])>;
        S s(0.0);
        for (int i = 0; i < v.dim(); ++i) s += (i + 1.0) * v[i] * v[i] * v[i];
        return s;
    };
    const Vector g = grad_forward(f, x);
    for (int i = 0; i < d; ++i) CHECK(g[i] == doctest::Approx(3.0 * (i + 1.0) * x[i] * x[i]));

    const Matrix H = hessian_forward(f, x);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            CHECK(H(i, j) == doctest::Approx(i == j ? 6.0 * (i + 1.0) * x[i] : 0.0));
}

TEST_CASE("grad_forward reports the non-finite coordinate") {
    auto f = [](const auto& v) {
        FFORGE_USING_MATH;
        return v[0] + sqrt(v[1]);
    };
    try {
        grad_forward(f, Vector{1.0, 0.0});
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.index() == 1);
    }
    CHECK_THROWS_AS(grad_forward(f, Vector{1.0, -1.0}), NumericalError);
}

TEST_CASE("hessian_forward on hand-differentiable functions") {
    auto sq = [](const auto& v) { return dot(v, v); };
    const Matrix H = hessian_forward(sq, Vector{0.3, -1.2, 4.0});
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(H(i, j) == (i == j ? 2.0 : 0.0));

    auto cubic = [](const auto& v) { return v[0] * v[0] * v[1]; };
    const Matrix C = hessian_forward(cubic, Vector{1.0, 1.0});
    CHECK(C(0, 0) == 2.0);
    CHECK(C(0, 1) == 2.0);
    CHECK(C(1, 0) == 2.0);
    CHECK(C(1, 1) == 0.0);
}

TEST_CASE("hessian_forward matches finite differences and is symmetric") {
    std::mt19937_64 rng(5);
    auto f = [](const auto& v) {
        FFORGE_USING_MATH;
        return sphere_integrand(v) * exp(0.3 * v[0]) + cos(v[1] * v[2]);
    };
    for (int trial = 0; trial < 20; ++trial) {
        const Vector z = oracle::random_vector(rng, 4);
        const Matrix H = hessian_forward(f, z);
        const Matrix fd = oracle::fd_hessian([&](const Vector& v) { return f(v); }, z);
        CHECK(asymmetry(H) == 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) CHECK(std::fabs(H(i, j) - fd(i, j)) < 1e-5 * std::max(1.0, std::fabs(fd(i, j))));
    }
}

TEST_CASE("jacobian_forward of a polynomial map") {
    auto f = [](const auto& v) {
        using S = std::decay_t<decltype(v[0])>;
        return VecT<S>{v[0], v[1], v[0] * v[0] + v[1] * v[1]};
    };
    const Matrix J = jacobian_forward(f, Vector{1.0, 1.0});
    CHECK(J.rows() == 3);
    CHECK(J(2, 0) == 2.0);
    CHECK(J(2, 1) == 2.0);
    CHECK(J(0, 0) == 1.0);
    CHECK(J(0, 1) == 0.0);
}

TEST_CASE("spd_solve examples") {
    const Vector b{0.3, -2.0};
    const Vector x = spd_solve(Matrix::identity(2), b);
    CHECK(x[0] == 0.3);
    CHECK(x[1] == -2.0);

    const Vector y = spd_solve(Matrix{{4.0, 0.0}, {0.0, 9.0}}, Vector{8.0, 27.0});
    CHECK(y[0] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(y[1] == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("spd_solve recovers constructed solutions") {
    std::mt19937_64 rng(17);
    for (int d : {1, 2, 5, 10, 20}) {
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix A = oracle::random_spd(rng, d);
            const Vector x0 = oracle::random_vector(rng, d);
            const Vector x = spd_solve(A, matvec(A, x0));
            for (int i = 0; i < d; ++i) CHECK(std::fabs(x[i] - x0[i]) < 1e-9);

            const Matrix B = oracle::random_spd(rng, d);
            const Matrix X = spd_solve(A, B);
            const Matrix R = matmul(A, X) - B;
            CHECK(frobenius(R) <= 1e-10 * frobenius(B));

            const Matrix I = matmul(A, spd_inverse(A));
            CHECK(max_abs(I - Matrix::identity(d)) < 1e-9);
        }
    }
}

TEST_CASE("spd_solve rejects indefinite matrices with the failing pivot") {
    const Matrix A{{1.0, 2.0}, {2.0, 1.0}};
    try {
        spd_solve(A, Vector{1.0, 1.0});
        FAIL("expected NotSPD");
    } catch (const NotSPD& e) {
        CHECK(e.pivot() == 1);
        CHECK(e.value() == doctest::Approx(-3.0));
    }
    CHECK_THROWS_AS(Cholesky(Matrix{{0.0}}), NotSPD);
    CHECK_FALSE(is_spd(A));
    CHECK(is_spd(Matrix::identity(3)));
}

TEST_CASE("sum_deterministic") {
    CHECK(sum_deterministic(std::vector<Vector>{}, 3) == Vector(3));
    CHECK_THROWS_AS(sum_deterministic(std::vector<Vector>{}), ShapeError);

    const Vector v{1.5, -2.25};
    CHECK(sum_deterministic({v, -v}) == Vector(2));
    CHECK_THROWS_AS(sum_deterministic({Vector(2), Vector(3)}), ShapeError);
    CHECK_THROWS_AS(sum_deterministic({Matrix(2, 2), Matrix(2, 3)}), ShapeError);
    CHECK(sum_deterministic(std::vector<Matrix>{}, 2, 2) == Matrix(2, 2));

    std::mt19937_64 rng(99);
    std::vector<Vector> terms;
    for (int k = 0; k < 1000; ++k) terms.push_back(oracle::random_vector(rng, 4, -1e3, 1e3));
    // Produce the terms in a scrambled schedule; the sum must not change.
    std::vector<Vector> scheduled(terms.size());
    parallel_for(static_cast<int>(terms.size()), [&](int k) { scheduled[k] = terms[k]; });
    const Vector a = sum_deterministic(terms);
    const Vector b = sum_deterministic(scheduled);
    CHECK(a == b);
    CHECK(sum_deterministic(terms) == a);
}

TEST_CASE("parallel_for visits every index and rethrows the lowest failure") {
    std::vector<int> hits(257, 0);
    parallel_for(257, [&](int i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);

    try {
        parallel_for(100, [](int i) {
            if (i == 40 || i == 90) throw ConfigError("fail " + std::to_string(i));
        });
        FAIL("expected throw");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()) == "fail 40");
    }
}

TEST_CASE("symmetric_eigen reconstructs the matrix") {
    std::mt19937_64 rng(3);
    for (int d : {1, 2, 3, 6}) {
        const Matrix S = oracle::random_spd(rng, d, 0.0);
        const SymmetricEigen e = symmetric_eigen(S);
        Matrix R(d, d);
        for (int k = 0; k < d; ++k)
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) R(i, j) += e.values[k] * e.vectors(i, k) * e.vectors(j, k);
        CHECK(max_abs(R - S) < 1e-10);
        for (int k = 1; k < d; ++k) CHECK(e.values[k - 1] >= e.values[k]);
        const Matrix VtV = matmul(transpose(e.vectors), e.vectors);
        CHECK(max_abs(VtV - Matrix::identity(d)) < 1e-10);
    }
    const SymmetricEigen diag = symmetric_eigen(Matrix{{1.0, 0.0}, {0.0, 3.0}});
    CHECK(diag.values[0] == 3.0);
    CHECK(diag.vectors(1, 0) == 1.0);
}
