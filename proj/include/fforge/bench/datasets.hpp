#pragma once

#include <cstdint>
#include <string>

#include "fforge/frechet/dataset.hpp"

namespace fforge {

// Normal samples in chart coordinates around the per-manifold means; the
// Fisher–Rao families draw two clusters of N/2 and N − N/2 points. Scale
// and shape coordinates are reflected to |x| and floored at 0.05.
// Throws ConfigError for names without a generator.
WeightedDataset gen_dataset(const std::string& manifold, int dim, int N, std::uint64_t seed);

// Dataset CSV: header x_0,…,x_{d-1}[,weight], 17 significant digits.
WeightedDataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const WeightedDataset& data);
std::string dataset_csv(const WeightedDataset& data);
WeightedDataset parse_dataset_csv(const std::string& text);

}  // namespace fforge
