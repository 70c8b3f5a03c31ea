#pragma once

// First-order optimizers on the joint discretized Fréchet objective: all
// interior curve points plus the shared endpoint y, fixed step sizes.

#include <cstdint>
#include <optional>
#include <string>

#include "fforge/frechet/frechet.hpp"

namespace fforge {

// [x_{1..T-1, i} for i = 0..N-1, then y], i-major, then t, then coordinate.
struct FlatVars {
    int N = 0, T = 0, d = 0;
    Vector v;

    int size() const { return v.dim(); }
    int offset(int i, int t) const { return ((i * (T - 1)) + (t - 1)) * d; }
    int y_offset() const { return N * (T - 1) * d; }

    static FlatVars pack(const SolverState& s);
    SolverState unpack(const WeightedDataset& data) const;
};

struct EnergyGrad {
    double value = 0.0;
    FlatVars grad;
};

// Σ_{i∈I} w_i E_i, scaled by `scale`, with its AD gradient. An empty
// subset means all points.
EnergyGrad joint_energy_and_grad(const FlatVars& vars, const MetricField& field, const WeightedDataset& data,
                                 const std::vector<int>& subset = {}, double scale = 1.0);

enum class Method { adam, rmsprop, rmsprop_momentum, sgd, adamax, adagrad };
Method parse_method(const std::string& s);
std::string to_string(Method m);

struct OptimizerConfig {
    Method method = Method::adam;
    double step_size = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    // RMSprop decay γ and the momentum of rmsprop_momentum / adagrad.
    double gamma = 0.9;
    double momentum = 0.9;
    double tol = 1e-4;
    int max_iter = 1000;
    double divergence_threshold = 1e12;
};

// Update rules in the conventions of jax.example_libraries.optimizers.
class Optimizer {
public:
    Optimizer(const OptimizerConfig& cfg, int n);
    // i is the zero-based step index.
    void step(Vector& x, const Vector& g, int i);

private:
    OptimizerConfig cfg_;
    Vector a_, b_;
};

struct MiniBatch {
    int batch_size = 1;
    std::uint64_t seed = 0;
};

struct BaselineResult {
    FrechetResult result;
    Method method = Method::adam;
    int iterations_run = 0;
    bool diverged = false;
};

// Throws Diverged (with the flat iterate) when the objective exceeds the
// threshold, turns non-finite, or an iterate leaves the chart.
BaselineResult run_first_order(const OptimizerConfig& cfg, const FieldPtr& field, const WeightedDataset& data, int T,
                               const std::optional<MiniBatch>& batch = std::nullopt,
                               MeanMode mode = MeanMode::riemannian, bool evaluate_moi = true);

}  // namespace fforge
