#include "fforge/frechet/frechet.hpp"

#include <cmath>

#include "fforge/numerics/parallel.hpp"
#include "fforge/stats/moi.hpp"

namespace fforge {

SolverState init_state(const MetricField& field, const WeightedDataset& data, int T, const std::optional<Vector>& y0) {
    if (T < 2) throw ConfigError("T must be >= 2");
    data.validate(field);
    SolverState s;
    s.y = y0 ? *y0 : data.points.front();
    if (s.y.dim() != field.dim()) throw ShapeError("initial mean has the wrong dimension");
    if (!field.in_domain(s.y)) throw DomainError("initial mean outside the chart domain", T);
    s.curves.reserve(data.size());
    for (const Vector& a : data.points) s.curves.push_back(DiscreteCurve::straight(a, s.y, T));
    return s;
}

UpdateAux compute_aux(const SolverState& s, const MetricField& field, const WeightedDataset& data, bool keep_tensors) {
    const int N = s.N();
    UpdateAux aux;
    aux.lin.resize(N);
    parallel_for(N, [&](int i) { aux.lin[i] = linearize_curve(field, s.curves[i], i); });

    std::vector<Matrix> wm(N);
    std::vector<Vector> vterm(N);
    std::vector<double> energy(N);
    for (int i = 0; i < N; ++i) {
        const CurveLinearization& L = aux.lin[i];
        const double w = data.weight(i);
        wm[i] = w * L.M;
        // ν and ζ of the weighted energy are w_i times the unweighted ones.
        vterm[i] = w * matvec(L.M, data.points[i] - 0.5 * L.R);
        energy[i] = w * L.energy;
    }
    aux.W = symmetrize(sum_deterministic(wm));
    aux.V = sum_deterministic(vterm);
    for (double e : energy) aux.energy += e;

    if (!keep_tensors)
        for (CurveLinearization& L : aux.lin) {
            L.G = {};
            L.Ginv = {};
            L.nu = {};
            L.zeta = {};
            L.shift = {};
        }
    return aux;
}

Vector mean_update(const UpdateAux& aux) { return spd_solve(aux.W, aux.V); }

Proposal costate_and_controls(const SolverState& s, const UpdateAux& aux, const WeightedDataset& data,
                              const Vector& y, const MetricField& field) {
    const int N = s.N();
    Proposal p;
    p.y = y;
    p.mu.resize(N);
    p.u.resize(N);
    parallel_for(N, [&](int i) {
        const double w = data.weight(i);
        const CurveLinearization& L = aux.lin[i];
        p.mu[i] = w * matvec(L.M, 2.0 * (data.points[i] - y) - L.R);
        if (L.Ginv.empty()) {
            // Tensors were dropped after the y update; M and R are unchanged.
            const CurveLinearization full = linearize_curve(field, s.curves[i], i);
            p.u[i] = controls_from_costate(full, p.mu[i], w);
        } else {
            p.u[i] = controls_from_costate(L, p.mu[i], w);
        }
    });
    return p;
}

std::optional<double> total_energy(const SolverState& s, const MetricField& field, const WeightedDataset& data) {
    const int N = s.N();
    std::vector<double> e(N);
    std::vector<char> ok(N, 1);
    parallel_for(N, [&](int i) {
        try {
            e[i] = data.weight(i) * discrete_energy(s.curves[i], field);
        } catch (const NumericalError&) {
            ok[i] = 0;
        }
    });
    double total = 0.0;
    for (int i = 0; i < N; ++i) {
        if (!ok[i]) return std::nullopt;
        total += e[i];
    }
    return total;
}

SolverState blend_state(const SolverState& s, const Proposal& p, double alpha) {
    SolverState out;
    out.iteration = s.iteration;
    out.y = alpha * p.y + (1.0 - alpha) * s.y;
    out.curves.resize(s.N());
    for (int i = 0; i < s.N(); ++i) out.curves[i] = blend_controls(s.curves[i], p.u[i], alpha, out.y);
    return out;
}

LineSearchResult line_search(const SolverState& s, double energy, const Proposal& p, const MetricField& field,
                             const WeightedDataset& data, const ArmijoParams& params) {
    LineSearchResult r;
    r.outcome = armijo_search(
        energy,
        [&](double alpha) -> std::optional<double> {
            SolverState trial = blend_state(s, p, alpha);
            auto e = total_energy(trial, field, data);
            if (e) r.state = std::move(trial);
            return e;
        },
        params);
    if (!r.outcome.accepted) r.state = s;
    return r;
}

double stop_metric(const UpdateAux& aux, const WeightedDataset& data) {
    const int N = static_cast<int>(aux.lin.size());
    double g2 = 0.0;
    std::vector<Vector> dy(N);
    for (int i = 0; i < N; ++i) {
        const CurveLinearization& L = aux.lin[i];
        const double w = data.weight(i);
        for (std::size_t t = 1; t < L.grad_interior.size(); ++t) g2 += w * w * dot(L.grad_interior[t], L.grad_interior[t]);
        dy[i] = w * L.du_last;
    }
    const Vector gy = sum_deterministic(dy);
    g2 += dot(gy, gy);
    return std::sqrt(g2) / N;
}

double stop_metric(const SolverState& s, const MetricField& field, const WeightedDataset& data) {
    return stop_metric(compute_aux(s, field, data, false), data);
}

LoopOutcome run_loop(SolverState& s, const MetricField& work, const WeightedDataset& data, const FrechetOptions& opts) {
    if (opts.max_iter < 0) throw ConfigError("max_iter must be >= 0");
    if (!(opts.tol > 0.0)) throw ConfigError("tol must be positive");
    LoopOutcome out;
    for (;;) {
        const UpdateAux aux = compute_aux(s, work, data, !opts.recompute_tensors);
        const double g = stop_metric(aux, data);
        out.grad_trace.push_back(g);
        out.energy_trace.push_back(aux.energy);
        if (g <= opts.tol) {
            out.converged = true;
            break;
        }
        if (out.iterations >= opts.max_iter) break;

        const Proposal p = costate_and_controls(s, aux, data, mean_update(aux), work);
        LineSearchResult ls = line_search(s, aux.energy, p, work, data, opts.armijo);
        if (!ls.outcome.accepted) {
            out.stalled = true;
            break;
        }
        ls.state.iteration = s.iteration + 1;
        ++out.iterations;
        if (opts.observer)
            opts.observer({out.iterations, s, aux, p, ls.outcome.alpha, ls.state, ls.outcome.energy});
        s = std::move(ls.state);
    }
    return out;
}

FrechetResult solve(const FieldPtr& field, const WeightedDataset& data, const FrechetOptions& opts) {
    const FieldPtr work = working_field(field, opts.mode);
    data.validate(*work);
    std::optional<Vector> y0 = opts.y0;
    if (!y0 && opts.init == InitialMean::chart_average) {
        std::vector<Vector> terms;
        for (int i = 0; i < data.size(); ++i) terms.push_back(data.weight(i) * data.points[i]);
        y0 = (1.0 / data.total_weight()) * sum_deterministic(terms);
    }
    SolverState s = init_state(*work, data, opts.T, y0);
    const LoopOutcome loop = run_loop(s, *work, data, opts);

    FrechetResult r;
    r.mode = opts.mode;
    r.T = opts.T;
    r.mean = s.y;
    r.iterations = loop.iterations;
    r.converged = loop.converged;
    r.stalled = loop.stalled;
    r.grad_trace = loop.grad_trace;
    r.energy_trace = loop.energy_trace;
    r.energy = loop.energy_trace.back();
    for (const DiscreteCurve& c : s.curves) {
        r.u0.push_back(c.control(0));
        r.uT.push_back(c.control(c.T() - 1));
    }
    r.curves = std::move(s.curves);
    if (opts.evaluate_moi) r.moi = moment_of_inertia(field, r.mean, data, opts.mode, moi_georce_options(opts.T));
    return r;
}

}  // namespace fforge
