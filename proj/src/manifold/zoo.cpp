#include "fforge/manifold/zoo.hpp"

namespace fforge {

const std::vector<std::string>& zoo_names() {
    static const std::vector<std::string> names = {
        "sphere",      "ellipsoid",   "torus",     "hyperbolic", "paraboloid", "hyperbolic_paraboloid",
        "gaussian_fr", "frechet_fr",  "cauchy_fr", "pareto_fr",  "euclidean"};
    return names;
}

Vector linspace(double lo, double hi, int n, bool endpoint) {
    Vector v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    const double step = (hi - lo) / (endpoint ? n - 1 : n);
    for (int i = 0; i < n; ++i) v[i] = lo + step * i;
    if (endpoint) v[n - 1] = hi;
    return v;
}

namespace {
void require_dim(const std::string& name, int dim, int expected) {
    if (dim != expected)
        throw ConfigError(name + " is only defined for dim = " + std::to_string(expected) +
                          " (got " + std::to_string(dim) + ")");
}
}  // namespace

RiemannianPtr zoo_metric(const std::string& name, int dim, const ZooParams& params) {
    if (dim < 1) throw ConfigError("manifold dimension must be >= 1");
    if (name == "euclidean") return make_chart_field(charts::Euclidean{dim});
    if (name == "sphere") return make_chart_field(charts::Sphere{dim, params.chart_cap});
    if (name == "ellipsoid") {
        Vector p = params.half_axes ? *params.half_axes
                                    : linspace(0.5, 1.0, dim + 1, params.half_axes_endpoint);
        if (p.dim() != dim + 1) throw ConfigError("ellipsoid needs dim + 1 half-axes");
        for (double e : p)
            if (!(e > 0.0)) throw ConfigError("ellipsoid half-axes must be positive");
        charts::Ellipsoid chart{EmbeddingSpec<EllipsoidEmbedding>{dim, dim + 1, {p}}, "ellipsoid",
                                params.chart_cap};
        return make_chart_field(std::move(chart));
    }
    if (name == "torus") {
        require_dim(name, dim, 2);
        if (!(params.torus_r > 0.0) || !(params.torus_R > params.torus_r))
            throw ConfigError("torus needs R > r > 0");
        return make_chart_field(charts::Torus{params.torus_R, params.torus_r});
    }
    if (name == "hyperbolic") {
        require_dim(name, dim, 2);
        return make_chart_field(charts::Hyperbolic{});
    }
    if (name == "paraboloid") return make_chart_field(charts::Paraboloid{dim});
    if (name == "hyperbolic_paraboloid") {
        require_dim(name, dim, 2);
        return make_chart_field(charts::HyperbolicParaboloid{});
    }
    if (name == "gaussian_fr") {
        require_dim(name, dim, 2);
        return make_chart_field(charts::GaussianFR{});
    }
    if (name == "cauchy_fr") {
        require_dim(name, dim, 2);
        return make_chart_field(charts::CauchyFR{});
    }
    if (name == "frechet_fr") {
        require_dim(name, dim, 2);
        return make_chart_field(charts::FrechetFR{});
    }
    if (name == "pareto_fr") {
        require_dim(name, dim, 2);
        return make_chart_field(charts::ParetoFR{});
    }
    throw ConfigError("unknown manifold '" + name + "'");
}

}  // namespace fforge
