#include <doctest.h>

#include <random>

#include "fforge/baselines/baselines.hpp"
#include "fforge/manifold/zoo.hpp"
#include "oracles.hpp"

using namespace fforge;

namespace {

WeightedDataset cloud(std::mt19937_64& rng, int n, const Vector& centre, double sd) {
    std::normal_distribution<double> z(0.0, sd);
    WeightedDataset D;
    for (int i = 0; i < n; ++i) {
        Vector p = centre;
        for (auto& e : p) e += z(rng);
        D.points.push_back(p);
    }
    return D;
}

// Interior points jittered off the straight lines, y off the first point.
FlatVars random_vars(const MetricField& f, const WeightedDataset& D, int T, std::mt19937_64& rng, double jitter) {
    SolverState s = init_state(f, D, T, D.points.front() + Vector(D.dim(), 0.1));
    FlatVars x = FlatVars::pack(s);
    std::uniform_real_distribution<double> u(-jitter, jitter);
    for (auto& e : x.v) e += u(rng);
    return x;
}

// f(x) = 2x₀² + ½x₁² from (1, −2); two steps of each rule, frozen from the
// reference jax.example_libraries.optimizers run.
struct Trace {
    Method m;
    double x1[2], x2[2];
};
const Trace kTraces[] = {
    {Method::sgd, {0.95999999999999996, -1.98}, {0.92159999999999997, -1.9601999999999999}},
    {Method::adam, {0.99000000002499999, -1.99000000005}, {0.9800027459460362, -1.9800013380540018}},
    {Method::rmsprop, {0.9683772234971374, -1.9683772237936008}, {0.94578802486644964, -1.9456096372171865}},
    {Method::rmsprop_momentum, {0.9683772234971374, -1.9683772237936008}, {0.91732752601387324, -1.9171491386314272}},
    {Method::adamax, {0.99000000002499999, -1.99000000005}, {0.98004267430298708, -1.9800163322214319}},
    {Method::adagrad, {0.999, -1.9990000000000001}, {0.99739324703750165, -1.9973930700618168}},
};

}  // namespace

TEST_CASE("pack and unpack round-trip") {
    std::mt19937_64 rng(3);
    auto f = zoo_metric("sphere", 3);
    WeightedDataset D = cloud(rng, 4, Vector{0.1, 0.2, 0.3}, 0.3);
    FlatVars x = random_vars(*f, D, 7, rng, 0.05);
    CHECK(x.size() == 4 * 6 * 3 + 3);
    const SolverState s = x.unpack(D);
    CHECK(s.curves[2].points[0] == D.points[2]);
    CHECK(s.curves[3].points[7] == s.y);
    CHECK(s.curves[1].points[4][2] == x.v[x.offset(1, 4) + 2]);
    const FlatVars back = FlatVars::pack(s);
    CHECK(back.v == x.v);
}

TEST_CASE("optimizer rules follow the reference two-step traces") {
    for (const Trace& tr : kTraces) {
        CAPTURE(to_string(tr.m));
        OptimizerConfig cfg;
        cfg.method = tr.m;
        Optimizer opt(cfg, 2);
        Vector x{1.0, -2.0};
        auto grad = [](const Vector& v) { return Vector{4.0 * v[0], v[1]}; };
        opt.step(x, grad(x), 0);
        CHECK(x[0] == doctest::Approx(tr.x1[0]).epsilon(1e-14));
        CHECK(x[1] == doctest::Approx(tr.x1[1]).epsilon(1e-14));
        opt.step(x, grad(x), 1);
        CHECK(x[0] == doctest::Approx(tr.x2[0]).epsilon(1e-14));
        CHECK(x[1] == doctest::Approx(tr.x2[1]).epsilon(1e-14));
    }
}

TEST_CASE("ADAM first step is the sign step of size alpha") {
    OptimizerConfig cfg;
    Optimizer opt(cfg, 1);
    Vector x{0.0};
    opt.step(x, Vector{3.0}, 0);
    CHECK(x[0] == doctest::Approx(-0.01 * 3.0 / (3.0 + 1e-8)).epsilon(1e-15));
}

TEST_CASE("method names round-trip") {
    for (Method m : {Method::adam, Method::rmsprop, Method::rmsprop_momentum, Method::sgd, Method::adamax,
                     Method::adagrad})
        CHECK(parse_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_method("bfgs"), ConfigError);
}

TEST_CASE("joint objective equals the weighted sum of curve energies") {
    std::mt19937_64 rng(5);
    auto f = zoo_metric("ellipsoid", 2);
    WeightedDataset D = cloud(rng, 5, Vector{0.6, 0.8}, 0.3);
    D.weights = {0.5, 1.0, 2.0, 0.1, 3.0};
    FlatVars x = random_vars(*f, D, 10, rng, 0.05);
    const SolverState s = x.unpack(D);
    double ref = 0.0;
    for (int i = 0; i < D.size(); ++i) ref += D.weight(i) * discrete_energy(s.curves[i], *f);
    CHECK(joint_energy_and_grad(x, *f, D).value == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("joint gradient matches finite differences on the sphere") {
    std::mt19937_64 rng(11);
    auto f = zoo_metric("sphere", 2);
    for (int rep = 0; rep < 5; ++rep) {
        WeightedDataset D = cloud(rng, 3, Vector{0.2, 0.5}, 0.4);
        D.weights = {1.0, 0.5, 2.0};
        const FlatVars x = random_vars(*f, D, 6, rng, 0.1);
        const EnergyGrad eg = joint_energy_and_grad(x, *f, D);
        const Vector fd = oracle::fd_gradient(
            [&](const Vector& v) {
                FlatVars y = x;
                y.v = v;
                return joint_energy_and_grad(y, *f, D).value;
            },
            x.v);
        CHECK(norm(eg.grad.v - fd) <= 1e-5 * std::max(1.0, norm(fd)));
    }
}

TEST_CASE("euclidean straight lines to the mean are stationary") {
    std::mt19937_64 rng(2);
    auto f = zoo_metric("euclidean", 3);
    WeightedDataset D = cloud(rng, 6, Vector{1.0, -1.0, 0.5}, 1.0);
    Vector mean(3);
    for (const Vector& p : D.points) mean += (1.0 / 6.0) * p;
    const FlatVars x = FlatVars::pack(init_state(*f, D, 20, mean));
    CHECK(norm(joint_energy_and_grad(x, *f, D).grad.v) <= 1e-12);
}

TEST_CASE("mini-batch gradient is unbiased over all index pairs") {
    std::mt19937_64 rng(8);
    auto f = zoo_metric("sphere", 2);
    WeightedDataset D = cloud(rng, 4, Vector{0.3, 0.1}, 0.4);
    D.weights = {1.0, 2.0, 0.5, 1.5};
    const FlatVars x = random_vars(*f, D, 5, rng, 0.05);
    const EnergyGrad full = joint_energy_and_grad(x, *f, D);
    Vector avg(x.size());
    double avg_value = 0.0;
    int count = 0;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            const EnergyGrad eg = joint_energy_and_grad(x, *f, D, {a, b}, 2.0);
            avg += eg.grad.v;
            avg_value += eg.value;
            ++count;
        }
    avg = (1.0 / count) * avg;
    CHECK(norm(avg - full.grad.v) <= 1e-10 * norm(full.grad.v));
    CHECK(avg_value / count == doctest::Approx(full.value).epsilon(1e-12));
}

TEST_CASE("ADAM finds the euclidean mean") {
    std::mt19937_64 rng(4);
    auto f = zoo_metric("euclidean", 2);
    WeightedDataset D = cloud(rng, 10, Vector{0.5, 0.5}, 0.3);
    Vector mean(2);
    for (const Vector& p : D.points) mean += 0.1 * p;
    OptimizerConfig cfg;
    const BaselineResult r = run_first_order(cfg, f, D, 10);
    CHECK(r.result.converged);
    CHECK(r.iterations_run <= 1000);
    CHECK(norm(r.result.mean - mean) <= 1e-3);
    CHECK(r.result.grad_trace.back() <= 1e-4);
    CHECK_FALSE(r.diverged);
}

TEST_CASE("mini-batch runs are reproducible per seed") {
    std::mt19937_64 rng(6);
    auto f = zoo_metric("sphere", 2);
    WeightedDataset D = cloud(rng, 20, Vector{0.2, 0.3}, 0.3);
    OptimizerConfig cfg;
    cfg.max_iter = 50;
    const auto a = run_first_order(cfg, f, D, 10, MiniBatch{5, 9}, MeanMode::riemannian, false);
    const auto b = run_first_order(cfg, f, D, 10, MiniBatch{5, 9}, MeanMode::riemannian, false);
    const auto c = run_first_order(cfg, f, D, 10, MiniBatch{5, 10}, MeanMode::riemannian, false);
    CHECK(a.result.mean == b.result.mean);
    CHECK(a.result.mean != c.result.mean);
    CHECK(a.iterations_run == 50);
    CHECK_THROWS_AS(run_first_order(cfg, f, D, 10, MiniBatch{21, 0}), ConfigError);
}

TEST_CASE("oversized SGD steps raise Diverged with the iterate") {
    std::mt19937_64 rng(1);
    auto f = zoo_metric("euclidean", 2);
    WeightedDataset D = cloud(rng, 5, Vector{0.0, 0.0}, 1.0);
    OptimizerConfig cfg;
    cfg.method = Method::sgd;
    cfg.step_size = 1.0;
    try {
        run_first_order(cfg, f, D, 10);
        FAIL("expected Diverged");
    } catch (const Diverged& e) {
        CHECK(e.iteration() > 0);
        CHECK(e.snapshot().size() == static_cast<std::size_t>(5 * 9 * 2 + 2));
    }
}

TEST_CASE("SGD on Fréchet-distribution data ends or diverges cleanly") {
    std::mt19937_64 rng(12);
    auto f = zoo_metric("frechet_fr", 2);
    WeightedDataset D;
    std::normal_distribution<double> z(0.0, std::sqrt(0.1));
    for (int i = 0; i < 20; ++i) {
        const Vector c = i % 2 ? Vector{1.0, 1.0} : Vector{0.5, 0.5};
        Vector p{std::max(0.05, std::fabs(c[0] + z(rng))), std::max(0.05, std::fabs(c[1] + z(rng)))};
        D.points.push_back(p);
    }
    OptimizerConfig cfg;
    cfg.method = Method::sgd;
    cfg.max_iter = 200;
    bool diverged = false;
    try {
        const auto r = run_first_order(cfg, f, D, 20, std::nullopt, MeanMode::riemannian, false);
        CHECK(all_finite(r.result.mean));
    } catch (const Diverged& e) {
        diverged = true;
        CHECK_FALSE(e.snapshot().empty());
    }
    MESSAGE("SGD frechet_fr diverged: " << diverged);
}

TEST_CASE("invalid optimizer configs are rejected") {
    auto f = zoo_metric("euclidean", 2);
    WeightedDataset D;
    D.points = {Vector{0.0, 0.0}, Vector{1.0, 0.0}};
    OptimizerConfig cfg;
    cfg.step_size = 0.0;
    CHECK_THROWS_AS(run_first_order(cfg, f, D, 5), ConfigError);
    cfg.step_size = 0.01;
    cfg.tol = -1.0;
    CHECK_THROWS_AS(run_first_order(cfg, f, D, 5), ConfigError);
}
