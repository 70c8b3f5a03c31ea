#include "fforge/bench/datasets.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "fforge/manifold/zoo.hpp"
#include "fforge/numerics/errors.hpp"

namespace fforge {

namespace {

struct Cluster {
    Vector mean;
    double sd;
};

constexpr double kFloor = 0.05;

}  // namespace

WeightedDataset gen_dataset(const std::string& manifold, int dim, int N, std::uint64_t seed) {
    if (N < 1) throw ConfigError("N must be >= 1");
    if (dim < 1) throw ConfigError("dimension must be >= 1");
    std::vector<Cluster> clusters;
    std::vector<int> positive;  // coordinates that must stay > 0
    const double sd01 = std::sqrt(0.1);
    if (manifold == "sphere") {
        clusters = {{linspace(0.0, 1.0, dim), 1.0}};
    } else if (manifold == "ellipsoid") {
        clusters = {{linspace(0.5, 1.0, dim, false), 1.0}};
    } else if (manifold == "euclidean") {
        clusters = {{Vector(dim), 1.0}};
    } else if (manifold == "torus" || manifold == "hyperbolic") {
        clusters = {{Vector(2), 1.0}};
    } else if (manifold == "paraboloid" || manifold == "hyperbolic_paraboloid") {
        clusters = {{Vector(dim, 1.0), sd01}};
    } else if (manifold == "gaussian_fr" || manifold == "cauchy_fr") {
        clusters = {{Vector{-1.0, 0.5}, sd01}, {Vector{1.0, 1.0}, sd01}};
        positive = {1};
    } else if (manifold == "frechet_fr" || manifold == "pareto_fr") {
        clusters = {{Vector{0.5, 0.5}, sd01}, {Vector{1.0, 1.0}, sd01}};
        positive = {0, 1};
    } else {
        throw ConfigError("no dataset generator for '" + manifold + "'");
    }
    if (clusters.front().mean.dim() != dim)
        throw ConfigError(manifold + " data is only defined for dim = " + std::to_string(clusters.front().mean.dim()));

    boost::random::mt19937_64 rng(seed);
    boost::random::normal_distribution<double> z;
    WeightedDataset D;
    D.points.reserve(N);
    const int first = clusters.size() == 1 ? N : N / 2;
    for (int i = 0; i < N; ++i) {
        const Cluster& c = clusters[i < first ? 0 : 1];
        Vector p(dim);
        for (int k = 0; k < dim; ++k) p[k] = c.mean[k] + c.sd * z(rng);
        for (int k : positive) p[k] = std::max(kFloor, std::fabs(p[k]));
        D.points.push_back(std::move(p));
    }
    return D;
}

std::string dataset_csv(const WeightedDataset& data) {
    std::ostringstream os;
    os << std::setprecision(17);
    const int d = data.dim();
    const bool weighted = !data.weights.empty();
    for (int k = 0; k < d; ++k) os << (k ? "," : "") << "x_" << k;
    if (weighted) os << ",weight";
    os << '\n';
    for (int i = 0; i < data.size(); ++i) {
        for (int k = 0; k < d; ++k) os << (k ? "," : "") << data.points[i][k];
        if (weighted) os << ',' << data.weights[i];
        os << '\n';
    }
    return os.str();
}

WeightedDataset parse_dataset_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("dataset CSV is empty");
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
    }
    const bool weighted = !header.empty() && header.back() == "weight";
    const int d = static_cast<int>(header.size()) - (weighted ? 1 : 0);
    if (d < 1) throw ConfigError("dataset CSV has no coordinate columns");
    for (int k = 0; k < d; ++k)
        if (header[k] != "x_" + std::to_string(k)) throw ConfigError("unexpected dataset CSV column '" + header[k] + "'");

    WeightedDataset D;
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                throw ConfigError("row " + std::to_string(row) + ": '" + cell + "' is not a number");
            }
        }
        if (static_cast<int>(vals.size()) != static_cast<int>(header.size()))
            throw ConfigError("row " + std::to_string(row) + " has " + std::to_string(vals.size()) + " columns");
        D.points.push_back(Vector(std::vector<double>(vals.begin(), vals.begin() + d)));
        if (weighted) D.weights.push_back(vals.back());
    }
    if (D.points.empty()) throw ConfigError("dataset CSV has no rows");
    D.validate();
    return D;
}

WeightedDataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dataset '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_dataset_csv(ss.str());
}

void write_dataset_csv(const std::string& path, const WeightedDataset& data) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << dataset_csv(data);
}

}  // namespace fforge
