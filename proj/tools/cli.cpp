#include "cli.hpp"

#include <CLI11.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fforge/bench/datasets.hpp"
#include "fforge/bench/experiment.hpp"
#include "fforge/stats/moi.hpp"
#include "fforge/stats/pga.hpp"

namespace fforge {

using nlohmann::json;

namespace {

struct ManifoldFlags {
    std::string name;
    int dim = 2;
    std::string params;
    std::string wind;
    double v0 = 1.5;

    void add(CLI::App* app) {
        app->add_option("--manifold", name, "zoo manifold name")->required();
        app->add_option("--dim", dim, "chart dimension")->capture_default_str();
        app->add_option("--params", params, "manifold parameters as a JSON object");
        app->add_option("--finsler-wind", wind, "Randers wind: generic or none");
        app->add_option("--v0", v0, "Randers vessel speed")->capture_default_str();
    }

    ManifoldSpec spec() const {
        json j{{"name", name}, {"dim", dim}};
        if (!params.empty()) {
            try {
                j["params"] = json::parse(params);
            } catch (const json::exception& e) {
                throw ConfigError(std::string("--params is not valid JSON: ") + e.what());
            }
        }
        if (!wind.empty()) j["finsler"] = json{{"wind", wind}, {"v0", v0}};
        return parse_manifold(j);
    }
};

Vector parse_point(const std::string& s, const char* flag) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            v.push_back(std::stod(cell));
        } catch (const std::exception&) {
            throw ConfigError(std::string(flag) + ": '" + cell + "' is not a number");
        }
    }
    if (v.empty()) throw ConfigError(std::string(flag) + " needs comma-separated coordinates");
    return Vector(v);
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

std::string curve_csv(const DiscreteCurve& c, const char* index = "t") {
    std::ostringstream os;
    os << std::setprecision(17) << index;
    for (int k = 0; k < c.dim(); ++k) os << ",x_" << k;
    os << '\n';
    for (int t = 0; t <= c.T(); ++t) {
        os << t;
        for (int k = 0; k < c.dim(); ++k) os << ',' << c.points[t][k];
        os << '\n';
    }
    return os.str();
}

// ---- subcommands -------------------------------------------------------------

struct MeanCmd {
    ManifoldFlags m;
    std::string data, mode = "riemannian", method = "georce_fm", out, curves_dir;
    bool gen = false, no_moi = false;
    int N = 100, T = 100, max_iter = 1000, batch_size = 0, sub_iters = 5;
    double tol = 1e-4, lambda = 0.5;
    std::uint64_t seed = 0;

    void add(CLI::App& app) {
        CLI::App* c = app.add_subcommand("mean", "compute one Fréchet mean");
        m.add(c);
        auto* d = c->add_option("--data", data, "dataset CSV");
        auto* g = c->add_flag("--gen", gen, "generate the dataset for the manifold");
        d->excludes(g);
        c->add_option("--N", N, "generated dataset size")->capture_default_str();
        c->add_option("--seed", seed, "dataset and batch seed")->capture_default_str();
        c->add_option("--mode", mode, "riemannian, forward or backward")->capture_default_str();
        c->add_option("--T", T, "grid size")->capture_default_str();
        c->add_option("--tol", tol, "stop tolerance")->capture_default_str();
        c->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
        c->add_option("--method", method, "georce_fm, adaptive_georce_fm or an optimizer name")
            ->capture_default_str();
        c->add_option("--batch-size", batch_size, "mini-batch size (adaptive and optimizers)");
        c->add_option("--sub-iters", sub_iters, "adaptive inner iterations")->capture_default_str();
        c->add_option("--lambda", lambda, "adaptive blend weight")->capture_default_str();
        c->add_flag("--no-moi", no_moi, "skip the post-hoc moment of inertia");
        c->add_option("--out", out, "result JSON path (default stdout)");
        c->add_option("--curves-dir", curves_dir, "write curve_<i>.csv per data point here");
    }

    int run(std::ostream& out_stream) {
        if (!gen && data.empty()) throw ConfigError("mean needs --data or --gen");
        const ManifoldSpec ms = m.spec();
        const FieldPtr field = build_field(ms);
        const WeightedDataset D = gen ? gen_dataset(ms.name, ms.dim, N, seed) : read_dataset_csv(data);
        D.validate(*field);
        const MeanMode mm = parse_mean_mode(mode);

        json mj{{"method", method}};
        if (batch_size > 0) mj["batch_size"] = batch_size;
        if (method == "adaptive_georce_fm") {
            mj["sub_iters"] = sub_iters;
            mj["lambda"] = lambda;
            mj["seed"] = seed;
            if (batch_size <= 0) throw ConfigError("adaptive_georce_fm needs --batch-size");
        } else if (method != "georce_fm" && batch_size > 0) {
            mj["seed"] = seed;
        } else if (method == "georce_fm" && batch_size > 0) {
            throw ConfigError("--batch-size does not apply to georce_fm");
        }
        const MethodSpec spec = parse_method_spec(mj, tol, max_iter);

        FrechetResult r;
        json extra;
        switch (spec.kind) {
            case MethodKind::georce_fm: {
                FrechetOptions o;
                o.T = T;
                o.tol = tol;
                o.max_iter = max_iter;
                o.mode = mm;
                o.evaluate_moi = false;
                r = solve(field, D, o);
                break;
            }
            case MethodKind::adaptive: {
                AdaptiveResult a = adaptive_solve(field, D, T, spec.adaptive, mm, false);
                extra = json{{"outer_iterations", a.outer_iterations}, {"alpha_trace", a.alpha_trace}};
                r = std::move(a.result);
                break;
            }
            case MethodKind::first_order: {
                BaselineResult b = run_first_order(spec.optimizer, field, D, T, spec.batch, mm, false);
                extra = json{{"iterations_run", b.iterations_run}, {"diverged", false}};
                r = std::move(b.result);
                break;
            }
        }
        if (!no_moi) r.moi = moment_of_inertia(field, r.mean, D, mm, moi_georce_options(T));
        json j{{"manifold", ms.name}, {"dim", ms.dim}, {"method", method}, {"finsler", ms.finsler.has_value()}};
        j.update(to_json(r, D));
        if (no_moi) j.erase("moi");
        if (!extra.is_null()) j.update(extra);
        emit(out, j.dump(2) + "\n", out_stream);
        if (!curves_dir.empty()) {
            std::filesystem::create_directories(curves_dir);
            for (std::size_t i = 0; i < r.curves.size(); ++i)
                emit((std::filesystem::path(curves_dir) / ("curve_" + std::to_string(i) + ".csv")).string(),
                     curve_csv(r.curves[i]), out_stream);
        }
        return 0;
    }
};

struct GeodesicCmd {
    ManifoldFlags m;
    std::string from, to, out, report;
    int T = 100, max_iter = 100;
    double tol = 1e-6;

    void add(CLI::App& app) {
        CLI::App* c = app.add_subcommand("geodesic", "discrete geodesic between two points");
        m.add(c);
        c->add_option("--from", from, "start point, comma separated")->required();
        c->add_option("--to", to, "end point, comma separated")->required();
        c->add_option("--T", T, "grid size")->capture_default_str();
        c->add_option("--tol", tol, "stop tolerance")->capture_default_str();
        c->add_option("--max-iter", max_iter, "iteration cap")->capture_default_str();
        c->add_option("--out", out, "curve CSV path (default stdout)");
        c->add_option("--report", report, "write length and convergence JSON here");
    }

    int run(std::ostream& out_stream) {
        const FieldPtr field = build_field(m.spec());
        const Vector a = parse_point(from, "--from"), b = parse_point(to, "--to");
        if (a.dim() != field->dim() || b.dim() != field->dim())
            throw ConfigError("--from/--to need " + std::to_string(field->dim()) + " coordinates");
        const GeodesicReport g = georce_any(*field, DiscreteCurve::straight(a, b, T), GeorceOptions{T, tol, max_iter});
        emit(out, curve_csv(g.curve), out_stream);
        if (!report.empty()) {
            const json j{{"length", g.arc_length}, {"energy", g.energy},         {"iterations", g.iterations},
                         {"converged", g.converged}, {"stalled", g.stalled}, {"grad_norm", g.final_grad_norm}};
            emit(report, j.dump(2) + "\n", out_stream);
        }
        return 0;
    }
};

struct BenchmarkCmd {
    std::string spec_path, out_dir;
    int repeats = 0;

    void add(CLI::App& app) {
        CLI::App* c = app.add_subcommand("benchmark", "run an experiment spec");
        c->add_option("spec", spec_path, "experiment spec JSON")->required();
        c->add_option("--out", out_dir, "output directory (overrides the spec)");
        c->add_option("--repeats", repeats, "timing repeats (overrides the spec)");
    }

    int run(std::ostream& out_stream) {
        ExperimentSpec spec = load_spec(spec_path);
        if (!out_dir.empty()) spec.output_dir = out_dir;
        if (repeats > 0) spec.repeats = repeats;
        out_stream << rows_csv(run_experiment(spec));
        return 0;
    }
};

struct PgaCmd {
    ManifoldFlags m;
    std::string result_path, convention = "mean_tangent", out, samples_out;
    int samples = 0, components = 3;
    std::uint64_t seed = 0;

    void add(CLI::App& app) {
        CLI::App* c = app.add_subcommand("pga", "principal geodesic analysis of a mean result");
        m.add(c);
        c->add_option("--result", result_path, "result JSON from `mean`")->required();
        c->add_option("--convention", convention, "mean_tangent or data_tangent")->capture_default_str();
        c->add_option("--samples", samples, "number of Exp samples to draw");
        c->add_option("--components", components, "principal directions used for sampling")->capture_default_str();
        c->add_option("--seed", seed, "sampling seed")->capture_default_str();
        c->add_option("--out", out, "PGA JSON path (default stdout)");
        c->add_option("--samples-out", samples_out, "CSV of sampled points");
    }

    int run(std::ostream& out_stream) {
        const ManifoldSpec ms = m.spec();
        if (ms.finsler) throw ConfigError("pga needs a Riemannian manifold");
        const RiemannianPtr field = build_background(ms);
        std::ifstream in(result_path);
        if (!in) throw ConfigError("cannot open result '" + result_path + "'");
        json rj;
        try {
            rj = json::parse(in);
        } catch (const json::exception& e) {
            throw ConfigError(std::string("result is not valid JSON: ") + e.what());
        }
        WeightedDataset D;
        const FrechetResult r = result_from_json(rj, &D);
        if (r.mean.dim() != field->dim()) throw ConfigError("result dimension does not match --dim");
        D.points.assign(r.uT.size(), Vector(r.mean.dim()));
        if (D.weights.size() != D.points.size()) D.weights.clear();
        const PGAResult p = pga(r, D, parse_log_convention(convention));

        std::vector<std::vector<double>> dirs;
        for (const Vector& v : p.directions) dirs.emplace_back(v.begin(), v.end());
        std::vector<std::vector<double>> scatter(p.scatter.rows(), std::vector<double>(p.scatter.cols()));
        for (int i = 0; i < p.scatter.rows(); ++i)
            for (int j = 0; j < p.scatter.cols(); ++j) scatter[i][j] = p.scatter(i, j);
        const json j{{"base", std::vector<double>(p.base.begin(), p.base.end())},
                     {"eigenvalues", std::vector<double>(p.eigenvalues.begin(), p.eigenvalues.end())},
                     {"directions", dirs},
                     {"scatter", scatter},
                     {"convention", convention}};
        emit(out, j.dump(2) + "\n", out_stream);

        if (samples > 0) {
            if (samples_out.empty()) throw ConfigError("--samples needs --samples-out");
            const int K = std::min<int>(components, static_cast<int>(p.directions.size()));
            boost::random::mt19937_64 rng(seed);
            boost::random::normal_distribution<double> z;
            std::ostringstream os;
            os << std::setprecision(17) << "sample";
            for (int k = 0; k < K; ++k) os << ",alpha_" << k;
            for (int k = 0; k < field->dim(); ++k) os << ",x_" << k;
            os << '\n';
            for (int s = 0; s < samples; ++s) {
                std::vector<double> alpha(K);
                for (double& a : alpha) a = z(rng);
                const Vector x = p.sample(*field, alpha);
                os << s;
                for (double a : alpha) os << ',' << a;
                for (double v : x) os << ',' << v;
                os << '\n';
            }
            emit(samples_out, os.str(), out_stream);
        }
        return 0;
    }
};

struct GenDataCmd {
    std::string manifold, out;
    int dim = 2, N = 100;
    std::uint64_t seed = 0;

    void add(CLI::App& app) {
        CLI::App* c = app.add_subcommand("gen-data", "write a generated dataset CSV");
        c->add_option("--manifold", manifold, "generator name")->required();
        c->add_option("--dim", dim, "chart dimension")->capture_default_str();
        c->add_option("--N", N, "number of points")->capture_default_str();
        c->add_option("--seed", seed, "seed")->capture_default_str();
        c->add_option("--out", out, "CSV path (default stdout)");
    }

    int run(std::ostream& out_stream) {
        emit(out, dataset_csv(gen_dataset(manifold, dim, N, seed)), out_stream);
        return 0;
    }
};

void report(std::ostream& err, const std::string& kind, const std::string& message, json extra = {}) {
    json j{{"kind", kind}, {"message", message}};
    if (extra.is_object()) j.update(extra);
    err << json{{"error", j}}.dump() << '\n';
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fréchet means and geodesics on Riemannian and Finsler manifolds", "fforge"};
    app.require_subcommand(1);
    MeanCmd mean;
    GeodesicCmd geodesic;
    BenchmarkCmd benchmark;
    PgaCmd pga_cmd;
    GenDataCmd gen;
    mean.add(app);
    geodesic.add(app);
    benchmark.add(app);
    pga_cmd.add(app);
    gen.add(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        report(err, "UsageError", e.what());
        return 1;
    }

    try {
        if (app.got_subcommand("mean")) return mean.run(out);
        if (app.got_subcommand("geodesic")) return geodesic.run(out);
        if (app.got_subcommand("benchmark")) return benchmark.run(out);
        if (app.got_subcommand("pga")) return pga_cmd.run(out);
        if (app.got_subcommand("gen-data")) return gen.run(out);
    } catch (const NumericalError& e) {
        err << json{{"error", to_json(e)}}.dump() << '\n';
        return 3;
    } catch (const Error& e) {
        err << json{{"error", to_json(e)}}.dump() << '\n';
        return 2;
    } catch (const std::exception& e) {
        report(err, "Error", e.what());
        return 2;
    }
    return 1;
}

}  // namespace fforge
