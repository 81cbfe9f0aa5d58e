#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "ttsl/dataset.hpp"
#include "ttsl/stiefel.hpp"
#include "ttsl/subspace.hpp"

namespace ttsl {

/// KNN-restricted Gaussian-kernel weights with zero diagonal. Row i holds
/// exp(-||x_i - x_j||^2 / epsilon) for the K nearest j != i, not symmetrized.
struct AffinityMatrix {
    Eigen::SparseMatrix<double, Eigen::RowMajor> weights;  // N x N
    int k = 0;
    double epsilon = 0.0;
};

/// Epsilon: explicit value, or the median squared distance over retained
/// neighbor pairs (falling back to 1 when the median is 0). Ties at the K-th
/// distance break toward the smaller sample index. `row_normalize` rescales
/// each row to sum 1 (off by default; the affinity is used verbatim).
AffinityMatrix build_affinity(const Matrix& data, int k,
                              std::optional<double> epsilon = std::nullopt,
                              bool row_normalize = false);

/// Z = (D - D S^T)(D - D S^T)^T, the d x d PSD matrix whose trace form
/// tr(E^T Z E) is the graph reconstruction objective.
Matrix build_graph_gram(const Matrix& data, const AffinityMatrix& affinity);

/// Orthonormal eigenvectors of the r smallest eigenvalues (ascending).
/// Column signs are fixed so each column's largest-magnitude entry is
/// positive.
Matrix smallest_eigvecs(const Matrix& z, Index r);

struct TTNPEConfig {
    std::vector<Index> ranks;  // r_1..r_n, r_n = embedding dimension
    int knn_k = 5;
    std::optional<double> epsilon;  // affinity scaling, auto when unset
    bool row_normalize = false;
    int max_sweeps = 20;
    double sweep_tol = 1e-8;  // relative decrease of ||E - V||_F^2
    StiefelOptions solver;
};

struct FittedTTNPE {
    TTSubspace subspace;              // orthonormal
    Matrix embedded;                  // r_n x N, t_i = U^T V(x_i)
    std::vector<int> labels;          // training labels
    double objective = 0.0;           // final ||E - V_{r_n}||_F^2
    std::vector<double> objective_trace;  // after init and every core update
};

/// Alternating Stiefel core updates minimizing ||L(U_1..U_n) - v||_F^2 from
/// the given left-orthonormal cores. Appends the objective after the start
/// and after every core update to `trace` when non-null; the sequence is
/// non-increasing.
std::vector<DenseTensor> fit_cores_to_target(const Matrix& v, const std::vector<Index>& dims,
                                             std::vector<DenseTensor> cores, int max_sweeps,
                                             double sweep_tol, const StiefelOptions& solver,
                                             std::vector<double>* trace = nullptr);

/// TT-NPE: initialize cores by fixed-rank TT-PCA, build the affinity graph,
/// Z and its bottom eigenvectors V, then alternate Stiefel core updates
/// minimizing ||L(U_1..U_n) - V||_F^2 until the sweep tolerance or limit.
FittedTTNPE ttnpe_fit(const LabeledDataset& ds, const TTNPEConfig& cfg);

Vector ttnpe_embed(const FittedTTNPE& model, const DenseTensor& x);
Vector ttnpe_embed(const FittedTTNPE& model, const Vector& x);

/// Majority label among the K nearest columns of `points` (Euclidean).
/// Label ties break toward the smaller label, distance ties toward the
/// smaller training index.
int knn_classify(const Matrix& points, const std::vector<int>& labels, const Vector& query, int k);

/// KNN in the fitted embedded space.
int ttnpe_classify(const FittedTTNPE& model, const DenseTensor& x, int k);
int ttnpe_classify(const FittedTTNPE& model, const Vector& x, int k);

/// Raw-space KNN baseline.
int knn_baseline(const LabeledDataset& train, const Vector& query, int k);

/// TTNE model file: magic "TTNE", u64 length + TTSS block, the embedded
/// training matrix, u32 N and N i32 labels.
void save_ttnpe(const std::string& path, const FittedTTNPE& model);
FittedTTNPE load_ttnpe(const std::string& path);

} // namespace ttsl
