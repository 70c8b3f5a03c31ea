#pragma once

// Mini-batch GEORCE-FM. Each outer step runs a few solver iterations on a
// random subset, forms that subset's W and V and folds them into running
// estimates; the mean is the solution of the running system.

#include <cstdint>
#include <optional>
#include <random>

#include "fforge/frechet/frechet.hpp"

namespace fforge {

struct BatchConfig {
    int batch_size = 1;
    int sub_iters = 5;
    double lambda = 0.5;
    std::uint64_t seed = 0;
    // Outer stop: ‖y_k − y_{k−1}‖₂ ≤ tol.
    double tol = 1e-4;
    int max_outer = 1000;
    // Inner stop_metric threshold; meeting it selects α* = 1/(k+1).
    double inner_tol = 1e-4;
    // Overrides the α* rule (degenerate full-batch checks).
    std::optional<double> fixed_alpha{};
};

// Random stream for outer step k, independent of every other step.
std::mt19937_64 batch_rng(std::uint64_t seed, std::uint64_t k);

// n distinct indices from [0, N), uniform, sorted ascending.
std::vector<int> sample_index_set(int N, int n, std::mt19937_64& rng);

// Curves carried between batches. Entries are empty until a point is
// first sampled.
struct CurveCache {
    std::vector<DiscreteCurve> curves;
};

struct BatchEstimate {
    Matrix W;
    Vector V;
    bool inner_converged = false;
    int inner_iterations = 0;
    double inner_start_energy = 0.0;
    double inner_end_energy = 0.0;
};

// Warm-starts the subset at mean y (cached curves shifted so they end at y,
// straight lines otherwise), runs sub_iters iterations, stores the curves
// back and returns W, V at the final inner iterate.
BatchEstimate batch_WV(const MetricField& work, const WeightedDataset& data, const std::vector<int>& idx,
                       const Vector& y, int T, int sub_iters, double inner_tol, CurveCache& cache,
                       const ArmijoParams& armijo = {});

struct AdaptiveResult {
    FrechetResult result;  // moi over all N points; iterations = outer steps
    int outer_iterations = 0;
    std::vector<Vector> y_trace;     // y_0, y_1, ...
    std::vector<double> alpha_trace; // α* for steps 1, 2, ...
    // Subset energy before and after each inner run, step 0 first.
    std::vector<std::pair<double, double>> inner_energy;
    BatchConfig config;
};

AdaptiveResult adaptive_solve(const FieldPtr& field, const WeightedDataset& data, int T, const BatchConfig& batch,
                              MeanMode mode = MeanMode::riemannian, bool evaluate_moi = true);

}  // namespace fforge
