#include "fforge/stats/moi.hpp"

#include "fforge/numerics/parallel.hpp"

namespace fforge {

GeorceOptions moi_georce_options(int T) { return {.T = T, .tol = 1e-6, .max_iter = 100}; }

std::vector<double> distances_to_mean(const FieldPtr& field, const Vector& mean, const WeightedDataset& data,
                                      MeanMode mode, const GeorceOptions& opts) {
    working_field(field, mode);  // kind check only
    data.validate(*field);
    if (mean.dim() != field->dim()) throw ShapeError("mean dimension does not match the manifold");
    if (!field->in_domain(mean)) throw DomainError("mean outside the chart domain");
    std::vector<double> out(data.size());
    parallel_for(data.size(), [&](int i) {
        const bool from_mean = mode == MeanMode::finsler_forward;
        const DiscreteCurve init = from_mean ? DiscreteCurve::straight(mean, data.points[i], opts.T)
                                             : DiscreteCurve::straight(data.points[i], mean, opts.T);
        out[i] = georce_any(*field, init, opts).arc_length;
    });
    return out;
}

double moment_of_inertia(const FieldPtr& field, const Vector& mean, const WeightedDataset& data, MeanMode mode,
                         const GeorceOptions& opts) {
    const std::vector<double> d = distances_to_mean(field, mean, data, mode, opts);
    double s = 0.0;
    for (int i = 0; i < data.size(); ++i) s += data.weight(i) * d[i] * d[i];
    return s;
}

double moment_of_inertia(const FieldPtr& field, const Vector& mean, const WeightedDataset& data, MeanMode mode) {
    return moment_of_inertia(field, mean, data, mode, moi_georce_options(100));
}

}  // namespace fforge
