#include "fforge/bench/experiment.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "fforge/bench/datasets.hpp"
#include "fforge/stats/moi.hpp"

namespace fforge {

using nlohmann::json;

namespace {

// Rejects keys outside `allowed` and wraps type errors as ConfigError.
void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + " has the wrong type");
    }
}

Vector to_vector(const std::vector<double>& v) { return Vector(v); }
std::vector<double> to_std(const Vector& v) { return std::vector<double>(v.begin(), v.end()); }

std::vector<std::vector<double>> to_std(const std::vector<Vector>& vs) {
    std::vector<std::vector<double>> out;
    for (const Vector& v : vs) out.push_back(to_std(v));
    return out;
}

bool valid_label(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw ConfigError("cannot write '" + p.string() + "'");
    out << text;
}

}  // namespace

RiemannianPtr build_background(const ManifoldSpec& m) { return zoo_metric(m.name, m.dim, m.params); }

FieldPtr build_field(const ManifoldSpec& m) {
    RiemannianPtr g = build_background(m);
    if (!m.finsler) return g;
    WindPtr wind;
    if (m.finsler->wind == "generic")
        wind = generic_wind_field(g);
    else if (m.finsler->wind == "none")
        wind = zero_wind(m.dim);
    else
        throw ConfigError("unknown wind '" + m.finsler->wind + "' (generic or none)");
    return make_randers({g, wind, m.finsler->v0});
}

ManifoldSpec parse_manifold(const json& j) {
    const std::string where = "manifold";
    check_keys(j, {"name", "dim", "params", "finsler"}, where);
    ManifoldSpec m;
    m.name = get_or<std::string>(j, "name", m.name, where);
    m.dim = get_or<int>(j, "dim", m.dim, where);
    if (j.contains("params")) {
        const json& p = j.at("params");
        check_keys(p, {"half_axes", "half_axes_endpoint", "torus_R", "torus_r", "chart_cap"}, "manifold.params");
        if (p.contains("half_axes"))
            m.params.half_axes = to_vector(get_or<std::vector<double>>(p, "half_axes", {}, "manifold.params"));
        m.params.half_axes_endpoint = get_or<bool>(p, "half_axes_endpoint", m.params.half_axes_endpoint, "manifold.params");
        m.params.torus_R = get_or<double>(p, "torus_R", m.params.torus_R, "manifold.params");
        m.params.torus_r = get_or<double>(p, "torus_r", m.params.torus_r, "manifold.params");
        m.params.chart_cap = get_or<double>(p, "chart_cap", m.params.chart_cap, "manifold.params");
    }
    if (j.contains("finsler") && !j.at("finsler").is_null()) {
        const json& f = j.at("finsler");
        check_keys(f, {"wind", "v0"}, "manifold.finsler");
        FinslerSpec fs;
        fs.wind = get_or<std::string>(f, "wind", fs.wind, "manifold.finsler");
        fs.v0 = get_or<double>(f, "v0", fs.v0, "manifold.finsler");
        m.finsler = fs;
    }
    return m;
}

MethodSpec parse_method_spec(const json& j, double tol, int max_iter) {
    const std::string where = "methods[]";
    if (!j.is_object() || !j.contains("method")) throw ConfigError("every method needs a \"method\" name");
    MethodSpec s;
    const std::string name = get_or<std::string>(j, "method", "", where);
    s.label = get_or<std::string>(j, "label", name, where);
    if (name == "georce_fm") {
        check_keys(j, {"method", "label"}, where);
        s.kind = MethodKind::georce_fm;
    } else if (name == "adaptive_georce_fm") {
        check_keys(j, {"method", "label", "batch_size", "sub_iters", "lambda", "seed", "inner_tol", "fixed_alpha"},
                   where);
        s.kind = MethodKind::adaptive;
        BatchConfig& b = s.adaptive;
        b.batch_size = get_or<int>(j, "batch_size", b.batch_size, where);
        b.sub_iters = get_or<int>(j, "sub_iters", b.sub_iters, where);
        b.lambda = get_or<double>(j, "lambda", b.lambda, where);
        b.seed = get_or<std::uint64_t>(j, "seed", b.seed, where);
        b.inner_tol = get_or<double>(j, "inner_tol", b.inner_tol, where);
        if (j.contains("fixed_alpha")) b.fixed_alpha = get_or<double>(j, "fixed_alpha", 0.0, where);
        b.tol = tol;
        b.max_outer = max_iter;
    } else {
        check_keys(j, {"method", "label", "step_size", "beta1", "beta2", "eps", "gamma", "momentum", "batch_size", "seed"},
                   where);
        s.kind = MethodKind::first_order;
        OptimizerConfig& o = s.optimizer;
        o.method = parse_method(name);
        o.step_size = get_or<double>(j, "step_size", o.step_size, where);
        o.beta1 = get_or<double>(j, "beta1", o.beta1, where);
        o.beta2 = get_or<double>(j, "beta2", o.beta2, where);
        o.eps = get_or<double>(j, "eps", o.eps, where);
        o.gamma = get_or<double>(j, "gamma", o.gamma, where);
        o.momentum = get_or<double>(j, "momentum", o.momentum, where);
        o.tol = tol;
        o.max_iter = max_iter;
        if (j.contains("batch_size"))
            s.batch = MiniBatch{get_or<int>(j, "batch_size", 1, where), get_or<std::uint64_t>(j, "seed", 0, where)};
    }
    if (!valid_label(s.label)) throw ConfigError("method label '" + s.label + "' must match [A-Za-z0-9_.-]+");
    return s;
}

ExperimentSpec parse_spec(const json& j) {
    check_keys(j, {"manifold", "dataset", "mode", "T", "tol", "max_iter", "repeats", "methods", "output_dir"}, "spec");
    ExperimentSpec s;
    if (!j.contains("manifold")) throw ConfigError("spec needs a manifold");
    s.manifold = parse_manifold(j.at("manifold"));
    s.dataset.generator = s.manifold.name;
    if (j.contains("dataset")) {
        const json& d = j.at("dataset");
        check_keys(d, {"generator", "N", "seed", "csv"}, "dataset");
        s.dataset.generator = get_or<std::string>(d, "generator", s.dataset.generator, "dataset");
        s.dataset.N = get_or<int>(d, "N", s.dataset.N, "dataset");
        s.dataset.seed = get_or<std::uint64_t>(d, "seed", s.dataset.seed, "dataset");
        s.dataset.csv = get_or<std::string>(d, "csv", "", "dataset");
    }
    s.mode = parse_mean_mode(get_or<std::string>(j, "mode", "riemannian", "spec"));
    s.T = get_or<int>(j, "T", s.T, "spec");
    s.tol = get_or<double>(j, "tol", s.tol, "spec");
    s.max_iter = get_or<int>(j, "max_iter", s.max_iter, "spec");
    s.repeats = get_or<int>(j, "repeats", s.repeats, "spec");
    s.output_dir = get_or<std::string>(j, "output_dir", "", "spec");
    if (s.T < 2) throw ConfigError("T must be >= 2");
    if (s.dataset.N < 1) throw ConfigError("dataset.N must be >= 1");
    if (s.repeats < 1) throw ConfigError("repeats must be >= 1");
    if (s.max_iter < 0) throw ConfigError("max_iter must be >= 0");
    if (!(s.tol > 0.0)) throw ConfigError("tol must be positive");
    if (s.mode != MeanMode::riemannian && !s.manifold.finsler)
        throw ConfigError("Finsler mean modes need a manifold.finsler block");
    if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty())
        throw ConfigError("spec needs a non-empty methods array");
    std::set<std::string> labels;
    for (const json& m : j.at("methods")) {
        s.methods.push_back(parse_method_spec(m, s.tol, s.max_iter));
        if (!labels.insert(s.methods.back().label).second)
            throw ConfigError("duplicate method label '" + s.methods.back().label + "'");
    }
    return s;
}

ExperimentSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec '" + path + "'");
    try {
        return parse_spec(json::parse(in));
    } catch (const json::exception& e) {
        throw ConfigError("spec '" + path + "': " + e.what());
    }
}

json to_json(const FrechetResult& r, const WeightedDataset& data) {
    std::vector<double> w(data.size());
    for (int i = 0; i < data.size(); ++i) w[i] = data.weight(i);
    return json{{"mode", to_string(r.mode)},
                {"T", r.T},
                {"mean", to_std(r.mean)},
                {"moi", r.moi},
                {"energy", r.energy},
                {"iterations", r.iterations},
                {"converged", r.converged},
                {"stalled", r.stalled},
                {"grad_trace", r.grad_trace},
                {"energy_trace", r.energy_trace},
                {"weights", w},
                {"u0", to_std(r.u0)},
                {"uT", to_std(r.uT)}};
}

FrechetResult result_from_json(const json& j, WeightedDataset* data) {
    FrechetResult r;
    try {
        r.mode = parse_mean_mode(j.at("mode").get<std::string>());
        r.T = j.at("T").get<int>();
        r.mean = to_vector(j.at("mean").get<std::vector<double>>());
        r.moi = j.value("moi", 0.0);
        r.energy = j.value("energy", 0.0);
        r.iterations = j.value("iterations", 0);
        r.converged = j.value("converged", false);
        r.stalled = j.value("stalled", false);
        r.grad_trace = j.value("grad_trace", std::vector<double>{});
        r.energy_trace = j.value("energy_trace", std::vector<double>{});
        for (const auto& u : j.at("u0")) r.u0.push_back(to_vector(u.get<std::vector<double>>()));
        for (const auto& u : j.at("uT")) r.uT.push_back(to_vector(u.get<std::vector<double>>()));
        if (data) data->weights = j.value("weights", std::vector<double>{});
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed result JSON: ") + e.what());
    }
    if (r.T < 1) throw ConfigError("result JSON has T < 1");
    if (r.u0.size() != r.uT.size()) throw ConfigError("result JSON has mismatched u0/uT");
    for (const auto* us : {&r.u0, &r.uT})
        for (const Vector& u : *us)
            if (u.dim() != r.mean.dim()) throw ConfigError("result JSON control has the wrong dimension");
    return r;
}

json to_json(const ResultRow& row) {
    json j{{"manifold", row.manifold},
           {"method", row.method},
           {"iterations", row.iterations},
           {"runtime_mean", row.runtime_mean},
           {"runtime_std", row.runtime_std},
           {"converged", row.converged},
           {"diverged", row.diverged},
           {"seed", row.seed}};
    if (row.moi) j["moi"] = *row.moi;
    if (!row.error.empty()) j["error"] = row.error;
    return j;
}

json to_json(const Error& e) {
    json j{{"kind", e.kind()}, {"message", e.what()}};
    if (auto* d = dynamic_cast<const DomainError*>(&e)) {
        j["t"] = d->t();
        j["curve"] = d->curve();
    } else if (auto* n = dynamic_cast<const NotSPD*>(&e)) {
        j["pivot"] = n->pivot();
        j["t"] = n->t();
        j["curve"] = n->curve();
    } else if (auto* v = dynamic_cast<const Diverged*>(&e)) {
        j["iteration"] = v->iteration();
    } else if (auto* i = dynamic_cast<const IntegrationError*>(&e)) {
        j["exit_time"] = i->exit_time();
    }
    return j;
}

std::string rows_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream os;
    os << "manifold,method,moi,iterations,runtime_mean,runtime_std,converged,diverged,seed,error\n";
    for (const ResultRow& r : rows) {
        std::string err = r.error;
        for (char& c : err)
            if (c == ',' || c == '\n' || c == '"') c = ' ';
        os << r.manifold << ',' << r.method << ',' << (r.moi ? fmt(*r.moi) : "") << ',' << r.iterations << ','
           << fmt(r.runtime_mean) << ',' << fmt(r.runtime_std) << ',' << (r.converged ? "true" : "false") << ','
           << (r.diverged ? "true" : "false") << ',' << r.seed << ',' << err << '\n';
    }
    return os.str();
}

WeightedDataset load_dataset(const ExperimentSpec& spec) {
    if (!spec.dataset.csv.empty()) return read_dataset_csv(spec.dataset.csv);
    return gen_dataset(spec.dataset.generator, spec.manifold.dim, spec.dataset.N, spec.dataset.seed);
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec) {
    const FieldPtr field = build_field(spec.manifold);
    const WeightedDataset data = load_dataset(spec);
    data.validate(*field);
    const std::string manifold_label =
        spec.manifold.name + std::to_string(spec.manifold.dim) + (spec.manifold.finsler ? "_finsler" : "");

    std::vector<ResultRow> rows;
    std::vector<std::pair<std::string, json>> results;
    for (const MethodSpec& m : spec.methods) {
        ResultRow row;
        row.manifold = manifold_label;
        row.method = m.label;
        row.seed = spec.dataset.seed;
        std::vector<double> times;
        try {
            FrechetResult r;
            json extra;
            for (int rep = 0; rep < spec.repeats; ++rep) {
                const auto t0 = std::chrono::steady_clock::now();
                switch (m.kind) {
                    case MethodKind::georce_fm: {
                        FrechetOptions o;
                        o.T = spec.T;
                        o.tol = spec.tol;
                        o.max_iter = spec.max_iter;
                        o.mode = spec.mode;
                        o.evaluate_moi = false;
                        r = solve(field, data, o);
                        break;
                    }
                    case MethodKind::adaptive: {
                        AdaptiveResult a = adaptive_solve(field, data, spec.T, m.adaptive, spec.mode, false);
                        extra = json{{"outer_iterations", a.outer_iterations}, {"alpha_trace", a.alpha_trace}};
                        r = std::move(a.result);
                        break;
                    }
                    case MethodKind::first_order: {
                        BaselineResult b = run_first_order(m.optimizer, field, data, spec.T, m.batch, spec.mode, false);
                        extra = json{{"method", to_string(b.method)}, {"iterations_run", b.iterations_run},
                                     {"diverged", false}};
                        r = std::move(b.result);
                        break;
                    }
                }
                times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            }
            r.moi = moment_of_inertia(field, r.mean, data, spec.mode, moi_georce_options(spec.T));
            row.moi = r.moi;
            row.iterations = r.iterations;
            row.converged = r.converged;
            json j = to_json(r, data);
            if (!extra.is_null()) j.update(extra);
            results.emplace_back(m.label, std::move(j));
        } catch (const Diverged& e) {
            row.diverged = true;
            row.iterations = e.iteration();
            row.error = e.what();
            results.emplace_back(m.label, json{{"method", m.label}, {"diverged", true}, {"error", to_json(e)}});
        } catch (const Error& e) {
            row.error = std::string(e.kind()) + ": " + e.what();
            results.emplace_back(m.label, json{{"method", m.label}, {"error", to_json(e)}});
        }
        if (!times.empty()) {
            double mean = 0.0, var = 0.0;
            for (double t : times) mean += t / times.size();
            for (double t : times) var += (t - mean) * (t - mean) / times.size();
            row.runtime_mean = mean;
            row.runtime_std = std::sqrt(var);
        }
        rows.push_back(row);
    }

    if (!spec.output_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(spec.output_dir);
        const fs::path dir(spec.output_dir);
        for (const auto& [label, j] : results) write_file(dir / (label + ".json"), j.dump(2) + "\n");
        json all = json::array();
        for (const ResultRow& r : rows) all.push_back(to_json(r));
        write_file(dir / "results.json", all.dump(2) + "\n");
        write_file(dir / "results.csv", rows_csv(rows));
    }
    return rows;
}

}  // namespace fforge
