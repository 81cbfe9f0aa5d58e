#pragma once

#include <string>
#include <vector>

#include "ttsl/tensor.hpp"

namespace ttsl {

/// Parameter counts and compression ratio for one method.
/// compression_ratio = total_storage / (n_train * d).
struct StorageReport {
    std::string method;
    long long subspace_dim = 0;   // parameters of the basis / manifold dimension
    long long total_storage = 0;  // what the compression ratio divides
    long long data_storage = 0;   // stored coefficients for n_train samples
    double compression_ratio = 0.0;
};

/// dim(PCA) = d*r - r(r+1)/2. data_storage = r * n_train.
StorageReport storage_pca(Index d, Index r, Index n_train);

/// General rank-vector form: sum_i (I_i r_i - r_i^2) + prod_i r_i.
/// With `main_text_core_count`, all dims/ranks must be equal and the core term
/// is r^{n+1} (r cores of size r^n) instead of prod r_i.
StorageReport storage_tpca(const std::vector<Index>& dims, const std::vector<Index>& ranks,
                           Index n_train, bool main_text_core_count = false);

/// Stiefel parameter count of a left-orthonormal TT basis:
/// sum_i (r_{i-1} I_i r_i - r_i(r_i+1)/2), ranks = (r_1..r_n), r_0 = 1.
/// Equal dims/ranks specialize to d^{1/n} r (r(n-1)+1) - r(r+1) n / 2.
StorageReport storage_ttpca(const std::vector<Index>& dims, const std::vector<Index>& ranks,
                            Index n_train);

/// TT quotient-manifold dimension: sum_i r_{i-1} I_i r_i - sum_{i<n} r_i^2.
/// Counts the basis up to the internal GL gauge instead of per-core Stiefel
/// charts, so it differs from storage_ttpca's subspace_dim in general.
long long manifold_dim_ttpca(const std::vector<Index>& dims, const std::vector<Index>& ranks);

enum class EmbeddingMethod { KNN, TNPE, TTNPE };

/// Closed-form storage of the embedding methods with equal dims d^{1/n} and
/// uniform rank r. d must be a perfect n-th power.
///   Storage(KNN)    = d * N_tr
///   Storage(TNPE)   = r^n N_tr + n (d^{1/n} r - r(r+1)/2)
///   Storage(TT-NPE) = d^{1/n} r (r(n-1)+1) - r(r+1) n / 2 + r N_tr
StorageReport storage_embedding(EmbeddingMethod method, Index d, int n, Index r, Index n_train);

/// Storage of a TT-NPE model with an explicit rank vector: the TT-PCA basis
/// parameters plus r_n coefficients per training sample.
StorageReport storage_ttnpe(const std::vector<Index>& dims, const std::vector<Index>& ranks,
                            Index n_train);

} // namespace ttsl
