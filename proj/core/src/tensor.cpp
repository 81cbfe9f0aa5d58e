#include "ttsl/tensor.hpp"

#include <numeric>

namespace ttsl {

namespace {

Index shape_product(const std::vector<Index>& shape) {
    Index p = 1;
    for (Index s : shape) {
        if (s < 1) throw DataError("tensor shape entries must be >= 1");
        p *= s;
    }
    return p;
}

} // namespace

DenseTensor::DenseTensor(std::vector<Index> shape)
    : shape_(std::move(shape)), data_(Vector::Zero(shape_product(shape_))) {}

DenseTensor::DenseTensor(std::vector<Index> shape, Vector data)
    : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_product(shape_))
        throw DataError("tensor data length does not match shape product");
}

Index DenseTensor::flat_index(const std::vector<Index>& idx) const {
    if (idx.size() != shape_.size()) throw DataError("index arity mismatch");
    Index flat = 0;
    Index stride = 1;
    for (size_t k = 0; k < shape_.size(); ++k) {
        if (idx[k] < 0 || idx[k] >= shape_[k]) throw DataError("tensor index out of range");
        flat += idx[k] * stride;
        stride *= shape_[k];
    }
    return flat;
}

DenseTensor core_from_left(const Matrix& m, Index r_prev, Index mid, Index r_next) {
    return left_refold(m, r_prev, mid, r_next);
}

Matrix vectorize(const DenseTensor& t) {
    return Eigen::Map<const Matrix>(t.data().data(), t.size(), 1);
}

Matrix mode_unfold(const DenseTensor& t, int mode) {
    const auto& shape = t.shape();
    const int n = t.order();
    if (mode < 1 || mode > n) throw DataError("mode index out of range");
    const Index rows = shape[static_cast<size_t>(mode - 1)];
    const Index cols = t.size() / rows;
    Matrix out(rows, cols);

    // Walk the flat buffer once; decompose each flat index into (row, col).
    std::vector<Index> idx(static_cast<size_t>(n), 0);
    for (Index flat = 0; flat < t.size(); ++flat) {
        Index col = 0;
        Index cstride = 1;
        for (int k = 0; k < n; ++k) {
            if (k == mode - 1) continue;
            col += idx[static_cast<size_t>(k)] * cstride;
            cstride *= shape[static_cast<size_t>(k)];
        }
        out(idx[static_cast<size_t>(mode - 1)], col) = t.data()[flat];
        for (int k = 0; k < n; ++k) {
            if (++idx[static_cast<size_t>(k)] < shape[static_cast<size_t>(k)]) break;
            idx[static_cast<size_t>(k)] = 0;
        }
    }
    return out;
}

DenseTensor mode_refold(const Matrix& m, const std::vector<Index>& shape, int mode) {
    const int n = static_cast<int>(shape.size());
    if (mode < 1 || mode > n) throw DataError("mode index out of range");
    DenseTensor t(shape);
    if (m.rows() != shape[static_cast<size_t>(mode - 1)] || m.size() != t.size())
        throw DataError("mode_refold dimension mismatch");

    std::vector<Index> idx(static_cast<size_t>(n), 0);
    for (Index flat = 0; flat < t.size(); ++flat) {
        Index col = 0;
        Index cstride = 1;
        for (int k = 0; k < n; ++k) {
            if (k == mode - 1) continue;
            col += idx[static_cast<size_t>(k)] * cstride;
            cstride *= shape[static_cast<size_t>(k)];
        }
        t.data()[flat] = m(idx[static_cast<size_t>(mode - 1)], col);
        for (int k = 0; k < n; ++k) {
            if (++idx[static_cast<size_t>(k)] < shape[static_cast<size_t>(k)]) break;
            idx[static_cast<size_t>(k)] = 0;
        }
    }
    return t;
}

Matrix left_unfold(const DenseTensor& t) {
    if (t.order() != 3) throw DataError("left_unfold requires a 3-mode tensor");
    // Column-major buffer with first two indices fastest: a plain reshape.
    return Eigen::Map<const Matrix>(t.data().data(), t.dim(0) * t.dim(1), t.dim(2));
}

Matrix right_unfold(const DenseTensor& t) {
    if (t.order() != 3) throw DataError("right_unfold requires a 3-mode tensor");
    return Eigen::Map<const Matrix>(t.data().data(), t.dim(0), t.dim(1) * t.dim(2));
}

DenseTensor left_refold(const Matrix& m, Index r_prev, Index mid, Index r_next) {
    if (m.rows() != r_prev * mid || m.cols() != r_next)
        throw DataError("left_refold dimension mismatch");
    Vector data = Eigen::Map<const Vector>(m.data(), m.size());
    return DenseTensor({r_prev, mid, r_next}, std::move(data));
}

DenseTensor connect_product(const DenseTensor& u, const DenseTensor& v) {
    if (u.order() != 3 || v.order() != 3)
        throw DataError("connect_product requires 3-mode tensors");
    if (u.dim(2) != v.dim(0))
        throw DataError("connect_product rank mismatch");

    const Index r_mid = u.dim(2);
    const Matrix lu = left_unfold(u);
    const Matrix lv = left_unfold(v);

    // (I_{I_v} kron L(u)) * L(v): block row b of the result is L(u) * L(v).middleRows(b*r_mid).
    Matrix out(lu.rows() * v.dim(1), v.dim(2));
    for (Index b = 0; b < v.dim(1); ++b)
        out.middleRows(b * lu.rows(), lu.rows()).noalias() = lu * lv.middleRows(b * r_mid, r_mid);
    return left_refold(out, u.dim(0), u.dim(1) * v.dim(1), v.dim(2));
}

DenseTensor connect_product(const std::vector<DenseTensor>& cores) {
    if (cores.empty()) throw DataError("connect_product of empty chain");
    DenseTensor acc = cores.front();
    for (size_t i = 1; i < cores.size(); ++i) acc = connect_product(acc, cores[i]);
    return acc;
}

Matrix fold_leading_modes(const Matrix& m, const std::vector<Index>& dims, Index r_tail, int k) {
    const int n = static_cast<int>(dims.size());
    if (k < 1 || k > n) throw DataError("fold_leading_modes: k out of range");
    Index d = 1;
    for (Index s : dims) d *= s;
    if (m.rows() != d || m.cols() != r_tail)
        throw DataError("fold_leading_modes dimension mismatch");

    Index rows = 1;
    for (int i = 0; i < k; ++i) rows *= dims[static_cast<size_t>(i)];
    // The flat buffer already orders indices (i1..in, tail) fastest-first.
    return Eigen::Map<const Matrix>(m.data(), rows, m.size() / rows);
}

} // namespace ttsl
