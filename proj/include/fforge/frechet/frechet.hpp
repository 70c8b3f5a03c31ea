#pragma once

// GEORCE-FM: N discrete geodesics a_i → y updated together with their
// shared endpoint y. Each iteration linearizes every curve, solves for y
// in closed form, rebuilds the controls from the co-states and
// backtracks along the straight line to the proposal.

#include <functional>
#include <optional>

#include "fforge/frechet/dataset.hpp"
#include "fforge/frechet/mode.hpp"
#include "fforge/geodesic/armijo.hpp"
#include "fforge/geodesic/control.hpp"

namespace fforge {

struct SolverState {
    std::vector<DiscreteCurve> curves;  // curves[i].points[t] = x_{t,i}
    Vector y;
    int iteration = 0;

    int N() const { return static_cast<int>(curves.size()); }
    int T() const { return curves.empty() ? 0 : curves.front().T(); }
};

struct UpdateAux {
    std::vector<CurveLinearization> lin;
    // w_i · E_i summed over i
    double energy = 0.0;
    Matrix W;
    Vector V;
};

struct Proposal {
    Vector y;
    std::vector<Vector> mu;               // μ_{T−1,i}
    std::vector<std::vector<Vector>> u;   // u[i][t]
};

enum class InitialMean { first_point, chart_average };

// Passed to the observer after every accepted update.
struct IterationRecord {
    int iteration;
    const SolverState& before;
    const UpdateAux& aux;
    const Proposal& proposal;
    double alpha;
    const SolverState& after;
    double energy_after;
};

struct FrechetOptions {
    int T = 100;
    double tol = 1e-4;
    int max_iter = 1000;
    MeanMode mode = MeanMode::riemannian;
    InitialMean init = InitialMean::first_point;
    std::optional<Vector> y0{};
    ArmijoParams armijo{};
    // Drop per-step tensors after the y update and rebuild them for the
    // controls: O(Nd²) instead of O(NTd²) memory, one extra linearization.
    bool recompute_tensors = false;
    // Run the post-hoc GEORCE distances for moi.
    bool evaluate_moi = true;
    std::function<void(const IterationRecord&)> observer{};
};

struct FrechetResult {
    Vector mean;
    int T = 0;
    std::vector<DiscreteCurve> curves;
    std::vector<Vector> u0;
    std::vector<Vector> uT;
    double moi = 0.0;
    double energy = 0.0;
    int iterations = 0;
    std::vector<double> grad_trace;
    std::vector<double> energy_trace;
    bool converged = false;
    bool stalled = false;
    MeanMode mode = MeanMode::riemannian;
};

// ---- single steps, all on the working field (see working_field) ----------

SolverState init_state(const MetricField& field, const WeightedDataset& data, int T,
                       const std::optional<Vector>& y0 = std::nullopt);
UpdateAux compute_aux(const SolverState& s, const MetricField& field, const WeightedDataset& data,
                      bool keep_tensors = true);
Vector mean_update(const UpdateAux& aux);
Proposal costate_and_controls(const SolverState& s, const UpdateAux& aux, const WeightedDataset& data,
                              const Vector& y, const MetricField& field);
// Total weighted energy, or nullopt if any curve leaves the domain or
// produces an unusable tensor.
std::optional<double> total_energy(const SolverState& s, const MetricField& field, const WeightedDataset& data);
SolverState blend_state(const SolverState& s, const Proposal& p, double alpha);

struct LineSearchResult {
    ArmijoOutcome outcome;
    SolverState state;
};
LineSearchResult line_search(const SolverState& s, double energy, const Proposal& p, const MetricField& field,
                             const WeightedDataset& data, const ArmijoParams& params = {});

// (1/N)·‖∇E‖₂ over all interior points and y.
double stop_metric(const UpdateAux& aux, const WeightedDataset& data);
double stop_metric(const SolverState& s, const MetricField& field, const WeightedDataset& data);

// ---- full solve -----------------------------------------------------------

FrechetResult solve(const FieldPtr& field, const WeightedDataset& data, const FrechetOptions& opts = {});

// Runs the loop on an existing state (already on the working field) and
// stops after max_iter updates or at tol; used by the adaptive variant.
struct LoopOutcome {
    int iterations = 0;
    bool converged = false;
    bool stalled = false;
    std::vector<double> grad_trace;
    std::vector<double> energy_trace;
};
LoopOutcome run_loop(SolverState& s, const MetricField& work, const WeightedDataset& data,
                     const FrechetOptions& opts);

}  // namespace fforge
