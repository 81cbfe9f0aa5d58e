#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttsl/dataset.hpp"
#include "ttsl/subspace.hpp"

namespace ttsl {

/// Fit configuration: exactly one of tau (relative singular-value cutoff in
/// [0,1)) or a fixed rank vector (r_1..r_n) must be set.
struct TTPCAConfig {
    std::optional<double> tau;
    std::optional<std::vector<Index>> ranks;
    bool center = false;  // off by default: the model fits a linear, not affine, span
};

struct FittedTTPCA {
    TTSubspace subspace;   // orthonormal
    Matrix coeffs;         // r_n x N, projections of the training columns
    Vector mean;           // only when centered
    bool centered = false;
    bool degenerate = false;  // all-zero data collapsed to a rank-1 zero basis
};

/// Successive thresholded-SVD fit: sweep modes left to right, at each step
/// SVD the carry matrix, keep singular values > tau * sigma_max (or the top
/// r_i in fixed-rank mode), refold the kept left factors into core i and
/// carry S~ V^T forward. Every core is left-orthonormal by construction.
FittedTTPCA ttpca_fit(const Matrix& data, const std::vector<Index>& dims, const TTPCAConfig& cfg);

/// Residual-distance classifier: one fitted subspace per class.
struct TTPCAClassifier {
    std::vector<FittedTTPCA> classes;
    std::vector<Index> dims;
};

TTPCAClassifier ttpca_fit_classifier(const LabeledDataset& ds, const TTPCAConfig& cfg);

/// argmin over classes of ||U U^T v - v||^2; ties go to the smallest label.
int ttpca_classify(const TTPCAClassifier& model, const Vector& sample);
int ttpca_classify(const TTPCAClassifier& model, const DenseTensor& sample);

/// Classifier container: magic "TTCL", u32 C, C x (u64 length + TTSS block),
/// then the C coefficient matrices.
void save_classifier(const std::string& path, const TTPCAClassifier& model);
TTPCAClassifier load_classifier(const std::string& path);

/// Plain-PCA baseline: top-r left singular vectors of the data matrix
/// (no mean-centering unless asked, matching the TT-PCA objective).
struct FittedPCA {
    Matrix basis;   // d x r, orthonormal columns
    Matrix coeffs;  // r x N
    Vector mean;
    bool centered = false;
};

FittedPCA pca_fit(const Matrix& data, Index r, bool center = false);

/// Thin SVD of a possibly very wide matrix. Uses the Gram-matrix
/// eigendecomposition when cols >> rows. Returns (U, sigma) with sigma
/// descending; columns of U orthonormal.
std::pair<Matrix, Vector> thin_svd_left(const Matrix& m);

} // namespace ttsl
