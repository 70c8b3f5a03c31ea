#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fforge/adaptive/adaptive.hpp"
#include "fforge/baselines/baselines.hpp"
#include "fforge/manifold/finsler.hpp"
#include "fforge/manifold/zoo.hpp"

namespace fforge {

struct FinslerSpec {
    std::string wind = "generic";  // generic | none
    double v0 = 1.5;
};

struct ManifoldSpec {
    std::string name = "sphere";
    int dim = 2;
    ZooParams params;
    std::optional<FinslerSpec> finsler;
};

RiemannianPtr build_background(const ManifoldSpec& m);
FieldPtr build_field(const ManifoldSpec& m);

struct DatasetSpec {
    std::string generator;  // defaults to the manifold name
    int N = 100;
    std::uint64_t seed = 0;
    std::string csv;  // load from file instead of generating
};

enum class MethodKind { georce_fm, adaptive, first_order };

struct MethodSpec {
    std::string label;
    MethodKind kind = MethodKind::georce_fm;
    OptimizerConfig optimizer;      // first_order
    std::optional<MiniBatch> batch;  // first_order mini-batch
    BatchConfig adaptive;           // adaptive
};

struct ExperimentSpec {
    ManifoldSpec manifold;
    DatasetSpec dataset;
    MeanMode mode = MeanMode::riemannian;
    int T = 100;
    double tol = 1e-4;
    int max_iter = 1000;
    int repeats = 3;
    std::vector<MethodSpec> methods;
    std::string output_dir;
};

struct ResultRow {
    std::string manifold;
    std::string method;
    std::optional<double> moi;  // empty when diverged or failed
    int iterations = 0;
    double runtime_mean = 0.0;
    double runtime_std = 0.0;
    bool converged = false;
    bool diverged = false;
    std::uint64_t seed = 0;
    std::string error;
};

// ---- JSON ------------------------------------------------------------------
// Unknown keys are rejected with ConfigError so typos do not pass silently.

ManifoldSpec parse_manifold(const nlohmann::json& j);
MethodSpec parse_method_spec(const nlohmann::json& j, double tol, int max_iter);
ExperimentSpec parse_spec(const nlohmann::json& j);
ExperimentSpec load_spec(const std::string& path);

nlohmann::json to_json(const FrechetResult& r, const WeightedDataset& data);
FrechetResult result_from_json(const nlohmann::json& j, WeightedDataset* data = nullptr);
nlohmann::json to_json(const ResultRow& row);
// {"kind", "message"} plus the location fields the error carries.
nlohmann::json to_json(const Error& e);

// CSV with header manifold,method,moi,iterations,runtime_mean,runtime_std,
// converged,diverged,seed,error.
std::string rows_csv(const std::vector<ResultRow>& rows);

// ---- running -----------------------------------------------------------------

WeightedDataset load_dataset(const ExperimentSpec& spec);

// One row per method. Method failures are recorded in the row and never
// abort the sweep. With an output_dir, writes results.csv, results.json
// and one <label>.json result per method.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec);

}  // namespace fforge
