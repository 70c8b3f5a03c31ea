#include "fforge/frechet/dataset.hpp"

#include <cmath>

namespace fforge {

double WeightedDataset::total_weight() const {
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += weight(i);
    return s;
}

WeightedDataset WeightedDataset::subset(const std::vector<int>& idx) const {
    WeightedDataset out;
    out.points.reserve(idx.size());
    for (int i : idx) {
        if (i < 0 || i >= size()) throw ConfigError("subset index out of range");
        out.points.push_back(points[i]);
        if (!weights.empty()) out.weights.push_back(weights[i]);
    }
    return out;
}

void WeightedDataset::validate() const {
    if (points.empty()) throw ConfigError("dataset is empty");
    if (!weights.empty() && weights.size() != points.size())
        throw ShapeError("dataset has " + std::to_string(weights.size()) + " weights for " +
                         std::to_string(points.size()) + " points");
    const int d = dim();
    for (int i = 0; i < size(); ++i) {
        if (points[i].dim() != d) throw ShapeError("dataset point " + std::to_string(i) + " has the wrong dimension");
        if (!(weight(i) > 0.0) || !std::isfinite(weight(i)))
            throw ConfigError("dataset weight " + std::to_string(i) + " must be positive");
    }
}

void WeightedDataset::validate(const MetricField& field) const {
    validate();
    if (dim() != field.dim()) throw ShapeError("dataset dimension does not match the manifold");
    for (int i = 0; i < size(); ++i)
        if (!field.in_domain(points[i]))
            throw DomainError("data point " + std::to_string(i) + " outside the chart domain", 0, i);
}

}  // namespace fforge
