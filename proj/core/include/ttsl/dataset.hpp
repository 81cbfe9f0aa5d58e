#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ttsl/tensor.hpp"

namespace ttsl {

/// Vectorized samples as columns of a d x N matrix plus integer labels.
/// dims records the original tensor shape of each sample (prod(dims) = d).
struct LabeledDataset {
    Matrix data;               // d x N, column i = V(X_i)
    std::vector<int> labels;   // length N
    std::vector<Index> dims;   // I_1..I_n

    Index count() const { return data.cols(); }
    Index dim() const { return data.rows(); }

    /// Sample i as a tensor of shape dims.
    DenseTensor sample(Index i) const;
};

/// Throws DataError unless labels are dense 0..C-1; returns C.
int num_classes(const LabeledDataset& ds);

/// Loads an IDX image/label file pair (big-endian magic 0x00000803 /
/// 0x00000801, u8 pixels widened to f64 in [0,255]). If dims is empty the
/// per-image (rows, cols) shape from the header is used; otherwise images
/// are reshaped to dims (product must match).
LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path,
                        std::vector<Index> dims = {});

/// CSV with header "label,x0,x1,...", one sample per line.
LabeledDataset load_csv(const std::string& path, std::vector<Index> dims = {});

void save_csv(const std::string& path, const LabeledDataset& ds);

/// Adds iid N(0, sigma^2) noise to every entry. Deterministic given seed;
/// sigma = 0 returns the input unchanged.
LabeledDataset add_noise(const LabeledDataset& ds, double sigma, uint64_t seed);

/// Keeps only the listed classes (relabeled densely, in the given order) and
/// at most per_class_cap samples of each (0 = no cap), after a seeded shuffle.
LabeledDataset filter_classes(const LabeledDataset& ds, const std::vector<int>& classes,
                              Index per_class_cap, uint64_t seed);

/// Deterministic seeded shuffle then split: first ceil(fraction*N) samples
/// become the training part.
std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds,
                                                        double train_fraction, uint64_t seed);

} // namespace ttsl
