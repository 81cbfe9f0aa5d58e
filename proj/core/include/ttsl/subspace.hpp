#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "ttsl/tensor.hpp"

namespace ttsl {

/// Orthonormality tolerance used throughout: max-abs of U^T U - I.
inline constexpr double kOrthoTol = 1e-10;

/// Chain of 3-mode cores U_1..U_n spanning a linear subspace of the
/// vectorized data space. Core i has shape (r_{i-1}, I_i, r_i), r_0 = 1.
/// Immutable after construction.
class TTSubspace {
public:
    TTSubspace() = default;

    /// Validates the rank chain (r_0 = 1, adjacent shapes match,
    /// r_i <= r_{i-1} I_i). If `orthonormal`, each core's left unfolding is
    /// checked for orthonormal columns.
    explicit TTSubspace(std::vector<DenseTensor> cores, bool orthonormal = false);

    int order() const { return static_cast<int>(cores_.size()); }
    const std::vector<DenseTensor>& cores() const { return cores_; }
    const DenseTensor& core(int i) const { return cores_.at(static_cast<size_t>(i)); }

    /// (r_0, r_1, ..., r_n)
    std::vector<Index> ranks() const;
    /// (I_1, ..., I_n)
    std::vector<Index> dims() const;
    /// r_n, the subspace dimension.
    Index rank_back() const { return cores_.back().dim(2); }
    /// prod(I_i), the ambient dimension.
    Index ambient_dim() const;

    bool orthonormal() const { return orthonormal_; }

    /// L(U_1 ... U_n): (I_1...I_n) x r_n. If all cores are left-orthonormal,
    /// the columns are orthonormal. Materialized once and cached.
    const Matrix& basis() const;

    /// U^T V(x), requires the orthonormal flag.
    Vector project(const DenseTensor& x) const;
    Vector project(const Vector& x) const;

    /// ||U U^T v - v||^2 = ||v||^2 - ||U^T v||^2; zero iff v lies in the span.
    double residual_norm_sq(const DenseTensor& x) const;
    double residual_norm_sq(const Vector& x) const;

private:
    void require_orthonormal() const;

    std::vector<DenseTensor> cores_;
    bool orthonormal_ = false;

    struct BasisCache {
        std::once_flag once;
        Matrix value;
    };
    std::shared_ptr<BasisCache> cache_ = std::make_shared<BasisCache>();
};

/// max-abs of U^T U - I for a materialized basis.
double orthonormality_defect(const Matrix& basis);

} // namespace ttsl
