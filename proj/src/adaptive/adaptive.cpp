#include "fforge/adaptive/adaptive.hpp"

#include <algorithm>
#include <boost/random/uniform_int_distribution.hpp>
#include <numeric>

#include "fforge/stats/moi.hpp"

namespace fforge {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

DiscreteCurve shifted_to(const DiscreteCurve& c, const Vector& y) {
    DiscreteCurve out = c;
    const int T = c.T();
    const Vector delta = y - c.points[T];
    for (int t = 1; t < T; ++t) out.points[t] += (static_cast<double>(t) / T) * delta;
    out.points[T] = y;
    return out;
}

void validate(const BatchConfig& b, int N) {
    if (b.batch_size < 1 || b.batch_size > N) throw ConfigError("batch_size must lie in [1, N]");
    if (b.sub_iters < 1) throw ConfigError("sub_iters must be >= 1");
    if (!(b.lambda > 0.0 && b.lambda <= 1.0)) throw ConfigError("lambda must lie in (0, 1]");
    if (!(b.tol > 0.0) || !(b.inner_tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (b.max_outer < 0) throw ConfigError("max_outer must be >= 0");
    if (b.fixed_alpha && !(*b.fixed_alpha > 0.0 && *b.fixed_alpha <= 1.0))
        throw ConfigError("fixed alpha must lie in (0, 1]");
}

}  // namespace

std::mt19937_64 batch_rng(std::uint64_t seed, std::uint64_t k) {
    return std::mt19937_64(splitmix64(splitmix64(seed) ^ k));
}

std::vector<int> sample_index_set(int N, int n, std::mt19937_64& rng) {
    if (n < 1 || n > N) throw ConfigError("cannot draw " + std::to_string(n) + " of " + std::to_string(N) + " indices");
    // partial Fisher–Yates
    std::vector<int> pool(N);
    std::iota(pool.begin(), pool.end(), 0);
    for (int k = 0; k < n; ++k) {
        boost::random::uniform_int_distribution<int> pick(k, N - 1);
        std::swap(pool[k], pool[pick(rng)]);
    }
    pool.resize(n);
    std::sort(pool.begin(), pool.end());
    return pool;
}

BatchEstimate batch_WV(const MetricField& work, const WeightedDataset& data, const std::vector<int>& idx,
                       const Vector& y, int T, int sub_iters, double inner_tol, CurveCache& cache,
                       const ArmijoParams& armijo) {
    if (idx.empty()) throw ConfigError("empty batch");
    if (cache.curves.size() != data.points.size()) cache.curves.resize(data.points.size());
    const WeightedDataset sub = data.subset(idx);
    SolverState s = init_state(work, sub, T, y);
    for (std::size_t j = 0; j < idx.size(); ++j) {
        const DiscreteCurve& c = cache.curves[idx[j]];
        if (c.T() != T) continue;
        DiscreteCurve warm = shifted_to(c, y);
        try {
            check_domain(warm, work);
            s.curves[j] = std::move(warm);
        } catch (const DomainError&) {
            // keep the straight line
        }
    }

    FrechetOptions o{.T = T, .tol = inner_tol, .max_iter = sub_iters};
    o.armijo = armijo;
    o.evaluate_moi = false;
    const LoopOutcome loop = run_loop(s, work, sub, o);

    BatchEstimate est;
    const UpdateAux aux = compute_aux(s, work, sub, false);
    est.W = aux.W;
    est.V = aux.V;
    est.inner_converged = loop.converged;
    est.inner_iterations = loop.iterations;
    est.inner_start_energy = loop.energy_trace.front();
    est.inner_end_energy = aux.energy;
    for (std::size_t j = 0; j < idx.size(); ++j) cache.curves[idx[j]] = std::move(s.curves[j]);
    return est;
}

AdaptiveResult adaptive_solve(const FieldPtr& field, const WeightedDataset& data, int T, const BatchConfig& batch,
                              MeanMode mode, bool evaluate_moi) {
    const FieldPtr work = working_field(field, mode);
    data.validate(*work);
    validate(batch, data.size());
    if (T < 2) throw ConfigError("T must be >= 2");
    const int N = data.size();

    AdaptiveResult out;
    out.config = batch;
    CurveCache cache;

    auto rng0 = batch_rng(batch.seed, 0);
    BatchEstimate est =
        batch_WV(*work, data, sample_index_set(N, batch.batch_size, rng0), data.points.front(), T, batch.sub_iters,
                 batch.inner_tol, cache);
    out.inner_energy.emplace_back(est.inner_start_energy, est.inner_end_energy);
    Matrix W = est.W;
    Vector V = est.V;
    Vector y = spd_solve(W, V);
    out.y_trace.push_back(y);

    bool converged = false;
    int k = 0;
    while (k < batch.max_outer) {
        if (!work->in_domain(y)) throw DomainError("mean estimate left the chart domain", T);
        ++k;
        auto rng = batch_rng(batch.seed, k);
        est = batch_WV(*work, data, sample_index_set(N, batch.batch_size, rng), y, T, batch.sub_iters,
                       batch.inner_tol, cache);
        const double alpha = batch.fixed_alpha ? *batch.fixed_alpha
                             : est.inner_converged ? 1.0 / (k + 1)
                                                   : batch.lambda;
        W = symmetrize(alpha * est.W + (1.0 - alpha) * W);
        V = alpha * est.V + (1.0 - alpha) * V;
        const Vector next = spd_solve(W, V);  // NotSPD here would mean Ŵ lost definiteness
        out.alpha_trace.push_back(alpha);
        out.inner_energy.emplace_back(est.inner_start_energy, est.inner_end_energy);
        out.y_trace.push_back(next);
        const double step = norm(next - y);
        y = next;
        if (step <= batch.tol) {
            converged = true;
            break;
        }
    }

    FrechetResult& r = out.result;
    r.mode = mode;
    r.T = T;
    r.mean = y;
    r.iterations = k;
    r.converged = converged;
    out.outer_iterations = k;
    for (int i = 0; i < N; ++i) {
        DiscreteCurve c = cache.curves[i].T() == T ? shifted_to(cache.curves[i], y)
                                                   : DiscreteCurve::straight(data.points[i], y, T);
        r.u0.push_back(c.control(0));
        r.uT.push_back(c.control(T - 1));
        r.curves.push_back(std::move(c));
    }
    if (evaluate_moi) r.moi = moment_of_inertia(field, y, data, mode, moi_georce_options(T));
    return out;
}

}  // namespace fforge
