#pragma once

#include <vector>

#include "fforge/frechet/dataset.hpp"
#include "fforge/frechet/mode.hpp"
#include "fforge/geodesic/georce.hpp"

namespace fforge {

// Evaluation settings for post-hoc distances: a fresh GEORCE solve per
// point, allowed well past ten iterations.
GeorceOptions moi_georce_options(int T);

// Geodesic distance between each a_i and the mean, measured with the
// midpoint arc length. Finsler modes orient the curve mean → a_i
// (forward) or a_i → mean (backward) on the original field.
std::vector<double> distances_to_mean(const FieldPtr& field, const Vector& mean, const WeightedDataset& data,
                                      MeanMode mode, const GeorceOptions& opts);

// Σ_i w_i d(a_i, mean)²
double moment_of_inertia(const FieldPtr& field, const Vector& mean, const WeightedDataset& data, MeanMode mode,
                         const GeorceOptions& opts);
double moment_of_inertia(const FieldPtr& field, const Vector& mean, const WeightedDataset& data,
                         MeanMode mode = MeanMode::riemannian);

}  // namespace fforge
