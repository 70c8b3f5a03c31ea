#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fforge/bench/datasets.hpp"
#include "fforge/bench/experiment.hpp"

using namespace fforge;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "fforge");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fforge_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Drops the runtime_mean and runtime_std columns.
std::string without_runtimes(const std::string& csv) {
    std::istringstream is(csv);
    std::ostringstream os;
    std::string line;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        for (std::size_t k = 0; k < cells.size(); ++k)
            if (k != 4 && k != 5) os << cells[k] << ';';
        os << '\n';
    }
    return os.str();
}

struct SetThreads {
    explicit SetThreads(const char* n) { setenv("FFORGE_THREADS", n, 1); }
    ~SetThreads() { unsetenv("FFORGE_THREADS"); }
};

}  // namespace

TEST_CASE("generated datasets are deterministic per seed") {
    const auto a = gen_dataset("sphere", 3, 50, 4);
    const auto b = gen_dataset("sphere", 3, 50, 4);
    const auto c = gen_dataset("sphere", 3, 50, 5);
    CHECK(a.points == b.points);
    CHECK(a.points != c.points);
    CHECK(a.weights.empty());
}

TEST_CASE("sphere generator is centred on the equally spaced means") {
    const int N = 10000;
    const auto D = gen_dataset("sphere", 2, N, 1);
    const double mu[2] = {0.0, 1.0};
    for (int k = 0; k < 2; ++k) {
        double m = 0.0;
        for (const Vector& p : D.points) m += p[k] / N;
        CHECK(std::fabs(m - mu[k]) <= 3.0 / std::sqrt(N));
    }
}

TEST_CASE("ellipsoid generator excludes the endpoint") {
    const int N = 10000;
    const auto D = gen_dataset("ellipsoid", 4, N, 2);
    for (int k = 0; k < 4; ++k) {
        double m = 0.0;
        for (const Vector& p : D.points) m += p[k] / N;
        CHECK(std::fabs(m - (0.5 + 0.125 * k)) <= 3.0 / std::sqrt(N));
    }
}

TEST_CASE("Fisher-Rao generators stay in the domain and split the clusters") {
    for (const char* name : {"gaussian_fr", "cauchy_fr", "frechet_fr", "pareto_fr"}) {
        CAPTURE(name);
        const auto D = gen_dataset(name, 2, 2001, 3);
        double first = 0.0, second = 0.0;
        for (int i = 0; i < D.size(); ++i) {
            CHECK(D.points[i][1] >= 0.05);
            if (std::string(name) == "frechet_fr" || std::string(name) == "pareto_fr") CHECK(D.points[i][0] >= 0.05);
            (i < 1000 ? first : second) += D.points[i][1];
        }
        // Cluster means of the second coordinate differ by 0.5.
        CHECK(second / 1001 - first / 1000 > 0.3);
    }
    CHECK_THROWS_AS(gen_dataset("klein_bottle", 2, 10, 0), ConfigError);
    CHECK_THROWS_AS(gen_dataset("torus", 3, 10, 0), ConfigError);
}

TEST_CASE("dataset CSV round-trips bit for bit") {
    auto D = gen_dataset("sphere", 3, 25, 9);
    CHECK(parse_dataset_csv(dataset_csv(D)).points == D.points);
    D.weights.assign(25, 0.0);
    for (int i = 0; i < 25; ++i) D.weights[i] = 1.0 / (i + 3);
    const auto back = parse_dataset_csv(dataset_csv(D));
    CHECK(back.points == D.points);
    CHECK(back.weights == D.weights);
    CHECK(dataset_csv(D).substr(0, 20) == "x_0,x_1,x_2,weight\n0");
}

TEST_CASE("malformed dataset CSVs are config errors") {
    CHECK_THROWS_AS(parse_dataset_csv(""), ConfigError);
    CHECK_THROWS_AS(parse_dataset_csv("x_0,x_1\n"), ConfigError);
    CHECK_THROWS_AS(parse_dataset_csv("x_0,y\n1,2\n"), ConfigError);
    CHECK_THROWS_AS(parse_dataset_csv("x_0,x_1\n1,abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_dataset_csv("x_0,x_1\n1,2,3\n"), ConfigError);
    CHECK_THROWS_AS(parse_dataset_csv("x_0,weight\n1,-2\n"), ConfigError);
}

TEST_CASE("spec parsing rejects bad input") {
    const json ok = json::parse(R"({"manifold": {"name": "sphere", "dim": 2}, "methods": [{"method": "georce_fm"}]})");
    CHECK(parse_spec(ok).methods.size() == 1);
    CHECK(parse_spec(ok).dataset.generator == "sphere");
    CHECK(parse_spec(ok).repeats == 3);
    auto bad = ok;
    bad["colour"] = 1;
    CHECK_THROWS_AS(parse_spec(bad), ConfigError);
    bad = ok;
    bad["methods"].push_back({{"method", "georce_fm"}});
    CHECK_THROWS_AS(parse_spec(bad), ConfigError);
    bad = ok;
    bad["methods"] = json::array({{{"method", "lbfgs"}}});
    CHECK_THROWS_AS(parse_spec(bad), ConfigError);
    bad = ok;
    bad["mode"] = "forward";
    CHECK_THROWS_AS(parse_spec(bad), ConfigError);
    bad = ok;
    bad["T"] = "many";
    CHECK_THROWS_AS(parse_spec(bad), ConfigError);
    bad = ok;
    bad["methods"] = json::array({{{"method", "adam"}, {"label", "a/b"}}});
    CHECK_THROWS_AS(parse_spec(bad), ConfigError);
}

TEST_CASE("euclidean experiment reports the sum of squared deviations") {
    ExperimentSpec spec;
    spec.manifold = {"euclidean", 3, {}, std::nullopt};
    spec.dataset = {"euclidean", 15, 2, ""};
    spec.T = 20;
    spec.repeats = 1;
    spec.methods = {MethodSpec{"georce_fm", MethodKind::georce_fm, {}, std::nullopt, {}}};
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 1);
    const auto D = load_dataset(spec);
    Vector m(3);
    for (const Vector& p : D.points) m += (1.0 / 15) * p;
    double ref = 0.0;
    for (const Vector& p : D.points) ref += dot(p - m, p - m);
    REQUIRE(rows[0].moi.has_value());
    CHECK(*rows[0].moi == doctest::Approx(ref).epsilon(1e-9));
    CHECK(rows[0].converged);
    CHECK(rows[0].error.empty());
}

TEST_CASE("diverging and failing methods do not abort the sweep") {
    ExperimentSpec spec = parse_spec(json::parse(R"({
        "manifold": {"name": "euclidean", "dim": 2},
        "dataset": {"N": 5, "seed": 1},
        "T": 10, "repeats": 1,
        "methods": [{"method": "sgd", "step_size": 1.0, "label": "sgd_big"},
                    {"method": "adaptive_georce_fm", "batch_size": 9},
                    {"method": "georce_fm"}]})"));
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].diverged);
    CHECK_FALSE(rows[0].moi.has_value());
    CHECK_FALSE(rows[1].error.empty());
    CHECK(rows[2].converged);
    const std::string csv = rows_csv(rows);
    CHECK(csv.find("sgd_big,,") != std::string::npos);
}

TEST_CASE("S2 benchmark at N=20 keeps GEORCE-FM within 1% of the baselines") {
    ExperimentSpec spec = parse_spec(json::parse(R"({
        "manifold": {"name": "sphere", "dim": 2},
        "dataset": {"N": 20, "seed": 0},
        "repeats": 1,
        "methods": [{"method": "georce_fm"}, {"method": "adam"}, {"method": "rmsprop_momentum"}]})"));
    const auto rows = run_experiment(spec);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) REQUIRE(r.moi.has_value());
    MESSAGE("moi georce_fm " << *rows[0].moi << " adam " << *rows[1].moi << " rmsprop_momentum " << *rows[2].moi);
    CHECK(*rows[0].moi <= *rows[1].moi * 1.01);
    CHECK(*rows[0].moi <= *rows[2].moi * 1.01);
}

TEST_CASE("benchmark output is byte-stable across runs and thread counts") {
    const fs::path dir = scratch("stable");
    const json spec = json::parse(R"({
        "manifold": {"name": "sphere", "dim": 2},
        "dataset": {"N": 12, "seed": 3},
        "T": 30, "repeats": 1, "max_iter": 40,
        "methods": [{"method": "georce_fm"}, {"method": "adam", "batch_size": 4, "seed": 2},
                    {"method": "adaptive_georce_fm", "batch_size": 4, "seed": 1}]})");
    std::ofstream(dir / "spec.json") << spec.dump();
    std::string first, second;
    {
        SetThreads t("1");
        REQUIRE(cli({"benchmark", (dir / "spec.json").string(), "--out", (dir / "a").string()}).code == 0);
    }
    {
        SetThreads t("4");
        REQUIRE(cli({"benchmark", (dir / "spec.json").string(), "--out", (dir / "b").string()}).code == 0);
    }
    CHECK(without_runtimes(slurp(dir / "a" / "results.csv")) == without_runtimes(slurp(dir / "b" / "results.csv")));
    for (const char* f : {"georce_fm.json", "adam.json", "adaptive_georce_fm.json"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK(fs::exists(dir / "a" / "results.json"));
}

TEST_CASE("cli mean on generated euclidean data returns the arithmetic mean") {
    const Run r = cli({"mean", "--manifold", "euclidean", "--gen", "--N", "10", "--seed", "7", "--T", "50"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    const auto D = gen_dataset("euclidean", 2, 10, 7);
    for (int k = 0; k < 2; ++k) {
        double m = 0.0;
        for (const Vector& p : D.points) m += p[k] / 10;
        CHECK(j["mean"][k].get<double>() == doctest::Approx(m).epsilon(1e-12));
    }
    CHECK(j["converged"].get<bool>());
    CHECK(j["T"].get<int>() == 50);
}

TEST_CASE("cli geodesic writes T+1 rows") {
    const Run r = cli({"geodesic", "--manifold", "sphere", "--from", "0.1,0.2", "--to", "-0.4,0.5", "--T", "40"});
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,x_0,x_1");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 41);
}

TEST_CASE("cli gen-data feeds mean without coordinate loss") {
    const fs::path dir = scratch("roundtrip");
    REQUIRE(cli({"gen-data", "--manifold", "sphere", "--N", "15", "--seed", "3", "--out", (dir / "d.csv").string()}).code ==
            0);
    const Run a = cli({"mean", "--manifold", "sphere", "--data", (dir / "d.csv").string(), "--T", "30", "--no-moi"});
    const Run b = cli({"mean", "--manifold", "sphere", "--gen", "--N", "15", "--seed", "3", "--T", "30", "--no-moi"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    REQUIRE(cli({"mean", "--manifold", "sphere", "--data", (dir / "d.csv").string(), "--T", "30", "--no-moi",
                 "--curves-dir", (dir / "curves").string(), "--out", (dir / "r.json").string()})
                .code == 0);
    CHECK(fs::exists(dir / "curves" / "curve_14.csv"));
}

TEST_CASE("cli pga reads a mean result") {
    const fs::path dir = scratch("pga");
    REQUIRE(cli({"mean", "--manifold", "sphere", "--gen", "--N", "12", "--seed", "1", "--T", "40", "--tol", "1e-6",
                 "--out", (dir / "r.json").string()})
                .code == 0);
    const Run p = cli({"pga", "--manifold", "sphere", "--result", (dir / "r.json").string(), "--samples", "4",
                       "--samples-out", (dir / "s.csv").string()});
    REQUIRE(p.code == 0);
    const json j = json::parse(p.out);
    CHECK(j["eigenvalues"].size() == 2);
    CHECK(j["eigenvalues"][0].get<double>() >= j["eigenvalues"][1].get<double>());
    CHECK(slurp(dir / "s.csv").rfind("sample,alpha_0,alpha_1,x_0,x_1\n", 0) == 0);
}

TEST_CASE("cli exit codes and error JSON") {
    const Run usage = cli({"mean", "--no-such-flag"});
    CHECK(usage.code == 1);
    CHECK(json::parse(usage.err)["error"]["kind"] == "UsageError");
    CHECK(cli({}).code == 1);

    const Run config = cli({"mean", "--manifold", "sphere", "--gen", "--method", "lbfgs"});
    CHECK(config.code == 2);
    CHECK(json::parse(config.err)["error"]["kind"] == "ConfigError");
    CHECK(cli({"mean", "--manifold", "sphere"}).code == 2);
    CHECK(cli({"benchmark", "/nonexistent/spec.json"}).code == 2);

    const fs::path dir = scratch("numerical");
    std::ofstream(dir / "bad.csv") << "x_0,x_1\n0.5,1\n0.3,-1\n";
    const Run numerical = cli({"mean", "--manifold", "gaussian_fr", "--data", (dir / "bad.csv").string()});
    CHECK(numerical.code == 3);
    const json e = json::parse(numerical.err)["error"];
    CHECK(e["kind"] == "DomainError");
    CHECK(e["curve"] == 1);
}

TEST_CASE("cli benchmark reproduces the adaptive S2 row at N=1000") {
    const fs::path dir = scratch("adaptive");
    std::ofstream(dir / "spec.json") << R"({
        "manifold": {"name": "sphere", "dim": 2},
        "dataset": {"N": 1000, "seed": 0},
        "repeats": 1,
        "methods": [{"method": "georce_fm"},
                    {"method": "adaptive_georce_fm", "batch_size": 100, "sub_iters": 5, "seed": 0}]})";
    const Run r = cli({"benchmark", (dir / "spec.json").string(), "--out", (dir / "out").string()});
    REQUIRE(r.code == 0);
    const json rows = json::parse(slurp(dir / "out" / "results.json"));
    const double full = rows[0]["moi"].get<double>(), adaptive = rows[1]["moi"].get<double>();
    MESSAGE("full " << full << " adaptive " << adaptive);
    CHECK(std::fabs(adaptive - full) <= 0.05 * full);
}
