#pragma once

#include <random>
#include <vector>

#include <Eigen/QR>

#include "ttsl/subspace.hpp"
#include "ttsl/tensor.hpp"

namespace testutil {

using ttsl::Index;
using ttsl::Matrix;
using ttsl::Vector;

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
    return m;
}

/// Orthonormal columns via QR of a Gaussian matrix, rows >= cols.
inline Matrix random_orthonormal(Index rows, Index cols, std::mt19937_64& rng) {
    const Matrix g = random_matrix(rows, cols, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    // fix the gauge so tests do not depend on QR sign conventions
    for (Index j = 0; j < cols; ++j)
        if (qr.matrixQR()(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

/// Random TT core chain, every left unfolding orthonormal. ranks holds
/// (r_1..r_n); requires r_i <= r_{i-1} I_i.
inline std::vector<ttsl::DenseTensor> random_orthonormal_cores(const std::vector<Index>& dims,
                                                               const std::vector<Index>& ranks,
                                                               std::mt19937_64& rng) {
    std::vector<ttsl::DenseTensor> cores;
    Index r_prev = 1;
    for (size_t i = 0; i < dims.size(); ++i) {
        const Matrix q = random_orthonormal(r_prev * dims[i], ranks[i], rng);
        cores.push_back(ttsl::left_refold(q, r_prev, dims[i], ranks[i]));
        r_prev = ranks[i];
    }
    return cores;
}

inline ttsl::TTSubspace random_subspace(const std::vector<Index>& dims,
                                        const std::vector<Index>& ranks, std::mt19937_64& rng) {
    return ttsl::TTSubspace(random_orthonormal_cores(dims, ranks, rng), true);
}

/// Random feasible rank vector for the given dims, 1 <= r_i <= min(cap, r_{i-1} I_i).
inline std::vector<Index> random_ranks(const std::vector<Index>& dims, Index cap,
                                       std::mt19937_64& rng) {
    std::vector<Index> ranks;
    Index r_prev = 1;
    for (Index d : dims) {
        std::uniform_int_distribution<Index> pick(1, std::min(cap, r_prev * d));
        ranks.push_back(pick(rng));
        r_prev = ranks.back();
    }
    return ranks;
}

inline ttsl::DenseTensor random_core(Index r_prev, Index mid, Index r_next, std::mt19937_64& rng) {
    ttsl::DenseTensor t({r_prev, mid, r_next});
    std::normal_distribution<double> dist;
    for (Index i = 0; i < t.size(); ++i) t.data()[i] = dist(rng);
    return t;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace testutil
