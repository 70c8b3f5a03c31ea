#pragma once

#include <vector>

#include "fforge/manifold/field.hpp"

namespace fforge {

struct WeightedDataset {
    std::vector<Vector> points;
    // Empty means all ones.
    std::vector<double> weights;

    int size() const { return static_cast<int>(points.size()); }
    int dim() const { return points.empty() ? 0 : points.front().dim(); }
    double weight(int i) const { return weights.empty() ? 1.0 : weights[i]; }
    double total_weight() const;

    WeightedDataset subset(const std::vector<int>& idx) const;

    // Nonempty, equal dimensions, positive finite weights. With a field,
    // also checks every point is in its domain (DomainError with curve = i).
    void validate() const;
    void validate(const MetricField& field) const;
};

}  // namespace fforge
