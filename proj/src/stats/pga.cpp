#include "fforge/stats/pga.hpp"

namespace fforge {

LogConvention parse_log_convention(const std::string& s) {
    if (s == "data_tangent") return LogConvention::data_tangent;
    if (s == "mean_tangent") return LogConvention::mean_tangent;
    throw ConfigError("unknown log convention '" + s + "'");
}

std::string to_string(LogConvention c) { return c == LogConvention::data_tangent ? "data_tangent" : "mean_tangent"; }

std::vector<Vector> log_approx(const FrechetResult& result, LogConvention convention) {
    if (convention == LogConvention::data_tangent) return result.u0;
    const int T = result.T;
    std::vector<Vector> out;
    out.reserve(result.uT.size());
    for (const Vector& u : result.uT) out.push_back(-static_cast<double>(T) * u);
    return out;
}

PGAResult pga(const FrechetResult& result, const WeightedDataset& data, LogConvention convention) {
    const std::vector<Vector> logs = log_approx(result, convention);
    if (static_cast<int>(logs.size()) != data.size()) throw ShapeError("result and dataset sizes differ");
    const int d = result.mean.dim();
    std::vector<Matrix> terms;
    terms.reserve(logs.size());
    for (int i = 0; i < data.size(); ++i) terms.push_back(data.weight(i) * outer(logs[i], logs[i]));
    PGAResult r;
    r.base = result.mean;
    r.scatter = symmetrize((1.0 / data.total_weight()) * sum_deterministic(terms, d, d));
    const SymmetricEigen eig = symmetric_eigen(r.scatter);
    r.eigenvalues = eig.values;
    for (int k = 0; k < d; ++k) {
        Vector v(d);
        for (int j = 0; j < d; ++j) v[j] = eig.vectors(j, k);
        r.directions.push_back(std::move(v));
    }
    return r;
}

Vector PGAResult::sample(const RiemannianField& field, const std::vector<double>& coefficients,
                         const OdeOptions& opts) const {
    if (coefficients.size() > directions.size()) throw ShapeError("more coefficients than principal directions");
    Vector v(base.dim());
    for (std::size_t k = 0; k < coefficients.size(); ++k) v += coefficients[k] * directions[k];
    return exp_map_ode(field, base, v, opts);
}

}  // namespace fforge
