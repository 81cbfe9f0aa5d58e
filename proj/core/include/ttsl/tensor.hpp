#pragma once

#include <vector>

#include <Eigen/Core>

#include "ttsl/errors.hpp"

namespace ttsl {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense n-way real tensor. Entries are stored first-index-fastest, i.e.
/// flat(i1,...,in) = i1 + I1*i2 + I1*I2*i3 + ... This matches Eigen's
/// column-major layout, so most unfoldings are plain buffer relabelings.
class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero tensor of the given shape.
    explicit DenseTensor(std::vector<Index> shape);

    /// Tensor from a flat first-index-fastest buffer.
    DenseTensor(std::vector<Index> shape, Vector data);

    int order() const { return static_cast<int>(shape_.size()); }
    const std::vector<Index>& shape() const { return shape_; }
    Index dim(int mode) const { return shape_.at(static_cast<size_t>(mode)); }
    Index size() const { return data_.size(); }

    const Vector& data() const { return data_; }
    Vector& data() { return data_; }

    double operator()(const std::vector<Index>& idx) const { return data_[flat_index(idx)]; }
    double& operator()(const std::vector<Index>& idx) { return data_[flat_index(idx)]; }

    Index flat_index(const std::vector<Index>& idx) const;

private:
    std::vector<Index> shape_;
    Vector data_;
};

/// 3-mode tensor (TT core) from its left unfolding. m has r_prev*mid rows.
DenseTensor core_from_left(const Matrix& m, Index r_prev, Index mid, Index r_next);

/// V(t): column vector of length prod(shape). Pure relabeling.
Matrix vectorize(const DenseTensor& t);

/// Mode-i unfolding (1-based mode): I_i x prod(I_j, j != i). Columns run over
/// the remaining modes in original order, earliest remaining mode fastest.
Matrix mode_unfold(const DenseTensor& t, int mode);

/// Inverse of mode_unfold for the same mode and shape.
DenseTensor mode_refold(const Matrix& m, const std::vector<Index>& shape, int mode);

/// L(t) = (t_[3])^T: (r_prev*I) x r_next, first two modes as rows.
Matrix left_unfold(const DenseTensor& t);

/// R(t) = t_[1]: r_prev x (I*r_next), column multi-index (i, r_next), i fastest.
Matrix right_unfold(const DenseTensor& t);

/// L^{-1}: exact inverse of left_unfold.
DenseTensor left_refold(const Matrix& m, Index r_prev, Index mid, Index r_next);

/// Tensor connect product of two adjacent 3-mode cores:
/// L(u v) = (I_{I_v} kron L(u)) * L(v), result shape (r_u_prev, I_u*I_v, r_v_next).
DenseTensor connect_product(const DenseTensor& u, const DenseTensor& v);

/// Connect product of a chain of cores (associative).
DenseTensor connect_product(const std::vector<DenseTensor>& cores);

/// Regroups a (I_1...I_n) x r_tail matrix into (I_1...I_k) x (I_{k+1}...I_n * r_tail).
/// Pure relabeling under the first-index-fastest convention; identity for k = n.
Matrix fold_leading_modes(const Matrix& m, const std::vector<Index>& dims, Index r_tail, int k);

} // namespace ttsl
