#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fforge/bench/datasets.hpp"
#include "fforge/manifold/zoo.hpp"
#include "fforge/stats/moi.hpp"
#include "fforge/stats/pga.hpp"

using namespace fforge;

namespace {

WeightedDataset cloud(std::mt19937_64& rng, int n, const Vector& centre, const Vector& sd) {
    WeightedDataset D;
    for (int i = 0; i < n; ++i) {
        Vector p = centre;
        for (int k = 0; k < p.dim(); ++k) p[k] += std::normal_distribution<double>(0.0, sd[k])(rng);
        D.points.push_back(p);
    }
    return D;
}

FrechetResult fm(const FieldPtr& f, const WeightedDataset& D, int T = 100, double tol = 1e-6) {
    FrechetOptions o;
    o.T = T;
    o.tol = tol;
    o.evaluate_moi = false;
    return solve(f, D, o);
}

// Leading eigenvector of a symmetric PSD matrix by power iteration.
Vector power_vector(const Matrix& S, int iters = 5000) {
    Vector v(S.rows(), 1.0);
    for (int k = 0; k < iters; ++k) {
        v = matvec(S, v);
        v = (1.0 / norm(v)) * v;
    }
    for (int k = 0; k < v.dim(); ++k)
        if (std::fabs(v[k]) > 1e-12) {
            if (v[k] < 0.0) v = -1.0 * v;
            break;
        }
    return v;
}

}  // namespace

TEST_CASE("moment of inertia of the mean itself is zero") {
    auto f = zoo_metric("sphere", 2);
    WeightedDataset D;
    D.points = {Vector{0.3, -0.2}};
    CHECK(moment_of_inertia(f, Vector{0.3, -0.2}, D) == 0.0);
}

TEST_CASE("euclidean moment of inertia is the weighted squared distance") {
    std::mt19937_64 rng(1);
    auto f = zoo_metric("euclidean", 3);
    WeightedDataset D = cloud(rng, 12, Vector{1.0, 0.0, -1.0}, Vector{1.0, 0.5, 2.0});
    for (int i = 0; i < 12; ++i) D.weights.push_back(0.5 + 0.1 * i);
    const Vector m{0.2, 0.1, 0.0};
    double ref = 0.0;
    for (int i = 0; i < D.size(); ++i) ref += D.weights[i] * dot(D.points[i] - m, D.points[i] - m);
    CHECK(moment_of_inertia(f, m, D) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("sphere ring about the pole has moment N theta squared") {
    auto f = zoo_metric("sphere", 2);
    for (double theta : {0.3, 0.8, 1.4}) {
        WeightedDataset D;
        const double r = std::tan(theta / 2.0);
        for (int k = 0; k < 12; ++k) {
            const double p = 2.0 * std::numbers::pi * k / 12;
            D.points.push_back(Vector{r * std::cos(p), r * std::sin(p)});
        }
        CHECK(moment_of_inertia(f, Vector{0.0, 0.0}, D) == doctest::Approx(12 * theta * theta).epsilon(1e-3));
    }
}

TEST_CASE("Fréchet mean beats every data point as a candidate") {
    struct Case {
        const char* name;
        int dim;
        int N;
    };
    for (const Case c : {Case{"sphere", 2, 8}, Case{"ellipsoid", 3, 8}, Case{"torus", 2, 8}, Case{"paraboloid", 2, 8},
                         Case{"hyperbolic_paraboloid", 2, 8}, Case{"gaussian_fr", 2, 8}, Case{"pareto_fr", 2, 8}}) {
        CAPTURE(c.name);
        auto f = zoo_metric(c.name, c.dim);
        WeightedDataset D = gen_dataset(c.name, c.dim, c.N, 21);
        if (std::string(c.name) == "torus")
            for (auto& p : D.points) p = 0.3 * p;  // keep the sample inside one sheet of the chart
        const FrechetResult r = fm(f, D);
        const double at_mean = moment_of_inertia(f, r.mean, D);
        for (const Vector& a : D.points) CHECK(at_mean <= moment_of_inertia(f, a, D) + 1e-9);
    }
}

TEST_CASE("euclidean log approximations are exact") {
    std::mt19937_64 rng(2);
    auto f = zoo_metric("euclidean", 2);
    WeightedDataset D = cloud(rng, 6, Vector{0.0, 1.0}, Vector{1.0, 1.0});
    const FrechetResult r = fm(f, D, 25);
    const auto logs = log_approx(r);
    const auto u0 = log_approx(r, LogConvention::data_tangent);
    for (int i = 0; i < D.size(); ++i) {
        CHECK(norm(logs[i] - (D.points[i] - r.mean)) <= 1e-12);
        CHECK(norm(u0[i] - (1.0 / 25.0) * (r.mean - D.points[i])) <= 1e-12);
    }
}

TEST_CASE("mean-tangent log has the geodesic length on the sphere") {
    std::mt19937_64 rng(3);
    auto f = zoo_metric("sphere", 2);
    WeightedDataset D = cloud(rng, 10, Vector{0.2, 0.3}, Vector{0.4, 0.4});
    const FrechetResult r = fm(f, D, 200);
    const auto logs = log_approx(r);
    const auto dist = distances_to_mean(f, r.mean, D, MeanMode::riemannian, moi_georce_options(200));
    const Matrix G = f->tensor(r.mean, Vector(2));
    for (int i = 0; i < D.size(); ++i) {
        const double len = std::sqrt(dot(logs[i], matvec(G, logs[i])));
        CHECK(len == doctest::Approx(dist[i]).epsilon(1e-2));
    }
}

TEST_CASE("single point has a zero log") {
    auto f = zoo_metric("sphere", 2);
    WeightedDataset D;
    D.points = {Vector{0.4, 0.1}};
    const auto logs = log_approx(fm(f, D));
    CHECK(norm(logs[0]) == 0.0);
}

TEST_CASE("euclidean PGA matches PCA of the centred data") {
    std::mt19937_64 rng(4);
    for (int d : {2, 3, 4}) {
        auto f = zoo_metric("euclidean", d);
        Vector sd(d);
        for (int k = 0; k < d; ++k) sd[k] = 2.0 / (k + 1);
        WeightedDataset D = cloud(rng, 40, Vector(d, 0.5), sd);
        const FrechetResult r = fm(f, D, 20);
        const PGAResult p = pga(r, D);

        Vector mean(d);
        for (const Vector& a : D.points) mean += (1.0 / D.size()) * a;
        Matrix C(d, d);
        for (const Vector& a : D.points) C += (1.0 / D.size()) * outer(a - mean, a - mean);
        CHECK(norm(p.directions[0] - power_vector(C)) <= 1e-8);
        // Deflate once for the second direction.
        const double l1 = dot(p.directions[0], matvec(C, p.directions[0]));
        CHECK(p.eigenvalues[0] == doctest::Approx(l1).epsilon(1e-10));
        const Matrix C2 = C - l1 * outer(p.directions[0], p.directions[0]);
        CHECK(norm(p.directions[1] - power_vector(C2)) <= 1e-8);
    }
}

TEST_CASE("points on one great circle give a single principal direction") {
    auto f = zoo_metric("sphere", 2);
    const double phi = 0.7;
    WeightedDataset D;
    for (double s : {0.2, 0.5, -0.3, -0.6, 0.1, 0.35})
        D.points.push_back(Vector{s * std::cos(phi), s * std::sin(phi)});
    const PGAResult p = pga(fm(f, D), D);
    CHECK(p.eigenvalues[1] / p.eigenvalues[0] < 1e-3);
    CHECK(std::fabs(dot(p.directions[0], Vector{std::cos(phi), std::sin(phi)})) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("PGA invariants") {
    std::mt19937_64 rng(5);
    auto f = zoo_metric("sphere", 3);
    WeightedDataset D = cloud(rng, 15, Vector{0.1, 0.2, 0.3}, Vector{0.5, 0.3, 0.2});
    FrechetResult r = fm(f, D);
    const PGAResult p = pga(r, D);
    double trace = 0.0, sum = 0.0;
    for (int k = 0; k < 3; ++k) {
        trace += p.scatter(k, k);
        sum += p.eigenvalues[k];
        CHECK(p.eigenvalues[k] >= -1e-10);
        if (k) CHECK(p.eigenvalues[k] <= p.eigenvalues[k - 1]);
        for (int j = 0; j < 3; ++j) {
            CHECK(p.scatter(k, j) == p.scatter(j, k));
            CHECK(std::fabs(dot(p.directions[k], p.directions[j]) - (k == j ? 1.0 : 0.0)) <= 1e-10);
        }
    }
    CHECK(sum == doctest::Approx(trace).epsilon(1e-10));

    const double c = 3.0;
    for (Vector& u : r.uT) u = c * u;
    const PGAResult q = pga(r, D);
    for (int k = 0; k < 3; ++k) {
        CHECK(q.eigenvalues[k] == doctest::Approx(c * c * p.eigenvalues[k]).epsilon(1e-10));
        CHECK(norm(q.directions[k] - p.directions[k]) <= 1e-8);
    }

    CHECK(norm(p.sample(*f, {0.0, 0.0, 0.0}) - p.base) == 0.0);
    CHECK(norm(p.sample(*f, {}) - p.base) == 0.0);
    CHECK_THROWS_AS(p.sample(*f, {1.0, 1.0, 1.0, 1.0}), ShapeError);
}

TEST_CASE("log convention names round-trip") {
    CHECK(parse_log_convention("data_tangent") == LogConvention::data_tangent);
    CHECK(to_string(parse_log_convention("mean_tangent")) == "mean_tangent");
    CHECK_THROWS_AS(parse_log_convention("exact"), ConfigError);
}
