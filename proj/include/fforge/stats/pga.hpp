#pragma once

#include <string>
#include <vector>

#include "fforge/frechet/frechet.hpp"
#include "fforge/geodesic/expmap.hpp"

namespace fforge {

// data_tangent: u_{0,i}, a tangent at a_i.
// mean_tangent: −T·u_{T−1,i}, the unit-time tangent at the mean pointing to a_i.
enum class LogConvention { data_tangent, mean_tangent };
LogConvention parse_log_convention(const std::string& s);
std::string to_string(LogConvention c);

std::vector<Vector> log_approx(const FrechetResult& result, LogConvention convention = LogConvention::mean_tangent);

struct PGAResult {
    Vector base;
    Vector eigenvalues;              // descending
    std::vector<Vector> directions;  // chart-orthonormal, sign-normalized
    Matrix scatter;

    // Exp_base(Σ_k α_k v_k) for the leading coefficients given.
    Vector sample(const RiemannianField& field, const std::vector<double>& coefficients,
                  const OdeOptions& opts = {}) const;
};

// S = (1/Σw) Σ_i w_i ℓ_i ℓ_iᵀ with ℓ_i = log_approx.
PGAResult pga(const FrechetResult& result, const WeightedDataset& data,
              LogConvention convention = LogConvention::mean_tangent);

}  // namespace fforge
