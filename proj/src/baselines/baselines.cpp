#include "fforge/baselines/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "fforge/adaptive/adaptive.hpp"
#include "fforge/numerics/parallel.hpp"
#include "fforge/stats/moi.hpp"

namespace fforge {

FlatVars FlatVars::pack(const SolverState& s) {
    FlatVars f;
    f.N = s.N();
    f.T = s.T();
    f.d = s.y.dim();
    f.v = Vector(f.N * (f.T - 1) * f.d + f.d);
    for (int i = 0; i < f.N; ++i)
        for (int t = 1; t < f.T; ++t)
            for (int k = 0; k < f.d; ++k) f.v[f.offset(i, t) + k] = s.curves[i].points[t][k];
    for (int k = 0; k < f.d; ++k) f.v[f.y_offset() + k] = s.y[k];
    return f;
}

SolverState FlatVars::unpack(const WeightedDataset& data) const {
    if (data.size() != N || data.dim() != d) throw ShapeError("flat variables do not match the dataset");
    SolverState s;
    s.y = Vector(d);
    for (int k = 0; k < d; ++k) s.y[k] = v[y_offset() + k];
    s.curves.resize(N);
    for (int i = 0; i < N; ++i) {
        auto& pts = s.curves[i].points;
        pts.assign(T + 1, Vector(d));
        pts[0] = data.points[i];
        for (int t = 1; t < T; ++t)
            for (int k = 0; k < d; ++k) pts[t][k] = v[offset(i, t) + k];
        pts[T] = s.y;
    }
    return s;
}

EnergyGrad joint_energy_and_grad(const FlatVars& vars, const MetricField& field, const WeightedDataset& data,
                                 const std::vector<int>& subset, double scale) {
    const SolverState s = vars.unpack(data);
    std::vector<int> idx = subset;
    if (idx.empty()) {
        idx.resize(data.size());
        for (int i = 0; i < data.size(); ++i) idx[i] = i;
    }
    const int n = static_cast<int>(idx.size());
    const int T = vars.T, d = vars.d;
    std::vector<double> value(n);
    std::vector<Vector> dy(n);
    EnergyGrad out;
    out.grad = vars;
    out.grad.v = Vector(vars.size());
    parallel_for(n, [&](int j) {
        const int i = idx[j];
        const DiscreteCurve& c = s.curves[i];
        try {
            check_domain(c, field);
        } catch (const DomainError& e) {
            throw DomainError(e.what(), e.t(), i);
        }
        const double w = scale * data.weight(i);
        std::vector<TermDerivatives> td(T);
        double e = 0.0;
        for (int t = 0; t < T; ++t) {
            td[t] = field.term_derivatives(c.points[t], c.control(t));
            e += td[t].value;
        }
        value[j] = w * e;
        for (int t = 1; t < T; ++t) {
            const Vector g = td[t].dx - td[t].du + td[t - 1].du;
            for (int k = 0; k < d; ++k) out.grad.v[vars.offset(i, t) + k] = w * g[k];
        }
        dy[j] = w * td[T - 1].du;
    });
    for (double v : value) out.value += v;
    const Vector gy = sum_deterministic(dy, d);
    for (int k = 0; k < d; ++k) out.grad.v[vars.y_offset() + k] = gy[k];
    return out;
}

Method parse_method(const std::string& s) {
    if (s == "adam") return Method::adam;
    if (s == "rmsprop") return Method::rmsprop;
    if (s == "rmsprop_momentum") return Method::rmsprop_momentum;
    if (s == "sgd") return Method::sgd;
    if (s == "adamax") return Method::adamax;
    if (s == "adagrad") return Method::adagrad;
    throw ConfigError("unknown optimizer '" + s + "'");
}

std::string to_string(Method m) {
    switch (m) {
        case Method::adam: return "adam";
        case Method::rmsprop: return "rmsprop";
        case Method::rmsprop_momentum: return "rmsprop_momentum";
        case Method::sgd: return "sgd";
        case Method::adamax: return "adamax";
        case Method::adagrad: return "adagrad";
    }
    return "?";
}

Optimizer::Optimizer(const OptimizerConfig& cfg, int n) : cfg_(cfg), a_(n), b_(n) {
    if (!(cfg.step_size > 0.0)) throw ConfigError("step size must be positive");
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    if (cfg.max_iter < 0) throw ConfigError("max_iter must be >= 0");
}

void Optimizer::step(Vector& x, const Vector& g, int i) {
    const double lr = cfg_.step_size;
    const int n = x.dim();
    switch (cfg_.method) {
        case Method::sgd:
            for (int k = 0; k < n; ++k) x[k] -= lr * g[k];
            break;
        case Method::adam: {
            const double c1 = 1.0 - std::pow(cfg_.beta1, i + 1), c2 = 1.0 - std::pow(cfg_.beta2, i + 1);
            for (int k = 0; k < n; ++k) {
                a_[k] = (1.0 - cfg_.beta1) * g[k] + cfg_.beta1 * a_[k];
                b_[k] = (1.0 - cfg_.beta2) * g[k] * g[k] + cfg_.beta2 * b_[k];
                x[k] -= lr * (a_[k] / c1) / (std::sqrt(b_[k] / c2) + cfg_.eps);
            }
            break;
        }
        case Method::adamax: {
            const double c1 = 1.0 - std::pow(cfg_.beta1, i + 1);
            for (int k = 0; k < n; ++k) {
                a_[k] = (1.0 - cfg_.beta1) * g[k] + cfg_.beta1 * a_[k];
                b_[k] = std::max(cfg_.beta2 * b_[k], std::fabs(g[k]));
                x[k] -= (lr / c1) * a_[k] / (b_[k] + cfg_.eps);
            }
            break;
        }
        case Method::rmsprop:
            for (int k = 0; k < n; ++k) {
                a_[k] = cfg_.gamma * a_[k] + (1.0 - cfg_.gamma) * g[k] * g[k];
                x[k] -= lr * g[k] / std::sqrt(a_[k] + cfg_.eps);
            }
            break;
        case Method::rmsprop_momentum:
            for (int k = 0; k < n; ++k) {
                a_[k] = cfg_.gamma * a_[k] + (1.0 - cfg_.gamma) * g[k] * g[k];
                b_[k] = cfg_.momentum * b_[k] + lr * g[k] / std::sqrt(a_[k] + cfg_.eps);
                x[k] -= b_[k];
            }
            break;
        case Method::adagrad:
            for (int k = 0; k < n; ++k) {
                a_[k] += g[k] * g[k];
                const double inv = a_[k] > 0.0 ? 1.0 / std::sqrt(a_[k]) : 0.0;
                b_[k] = (1.0 - cfg_.momentum) * g[k] * inv + cfg_.momentum * b_[k];
                x[k] -= lr * b_[k];
            }
            break;
    }
}

BaselineResult run_first_order(const OptimizerConfig& cfg, const FieldPtr& field, const WeightedDataset& data, int T,
                               const std::optional<MiniBatch>& batch, MeanMode mode, bool evaluate_moi) {
    const FieldPtr work = working_field(field, mode);
    const SolverState init = init_state(*work, data, T);
    const int N = data.size();
    if (batch && (batch->batch_size < 1 || batch->batch_size > N)) throw ConfigError("batch_size must lie in [1, N]");

    FlatVars x = FlatVars::pack(init);
    Optimizer opt(cfg, x.size());
    BaselineResult out;
    out.method = cfg.method;
    FrechetResult& r = out.result;
    r.mode = mode;
    r.T = T;

    auto snapshot = [&] { return std::vector<double>(x.v.begin(), x.v.end()); };
    for (int it = 0;; ++it) {
        std::vector<int> idx;
        double scale = 1.0;
        if (batch) {
            auto rng = batch_rng(batch->seed, it);
            idx = sample_index_set(N, batch->batch_size, rng);
            scale = static_cast<double>(N) / batch->batch_size;
        }
        EnergyGrad eg;
        try {
            eg = joint_energy_and_grad(x, *work, data, idx, scale);
        } catch (const NumericalError&) {
            throw Diverged(it, snapshot());
        }
        if (!std::isfinite(eg.value) || eg.value > cfg.divergence_threshold || !all_finite(eg.grad.v))
            throw Diverged(it, snapshot());
        const double g = norm(eg.grad.v) / N;
        r.grad_trace.push_back(g);
        r.energy_trace.push_back(eg.value);
        if (g <= cfg.tol) {
            r.converged = true;
            break;
        }
        if (it >= cfg.max_iter) break;
        opt.step(x.v, eg.grad.v, it);
        ++out.iterations_run;
    }

    const SolverState s = x.unpack(data);
    r.mean = s.y;
    r.iterations = out.iterations_run;
    r.energy = r.energy_trace.back();
    for (const DiscreteCurve& c : s.curves) {
        r.u0.push_back(c.control(0));
        r.uT.push_back(c.control(T - 1));
    }
    r.curves = s.curves;
    if (evaluate_moi) r.moi = moment_of_inertia(field, r.mean, data, mode, moi_georce_options(T));
    return out;
}

}  // namespace fforge
