#include "ttsl/subspace.hpp"

namespace ttsl {

TTSubspace::TTSubspace(std::vector<DenseTensor> cores, bool orthonormal)
    : cores_(std::move(cores)), orthonormal_(orthonormal) {
    if (cores_.empty()) throw DataError("TTSubspace requires at least one core");
    if (cores_.front().order() != 3 || cores_.front().dim(0) != 1)
        throw DataError("first core must have shape (1, I_1, r_1)");
    for (size_t i = 0; i < cores_.size(); ++i) {
        const auto& c = cores_[i];
        if (c.order() != 3) throw DataError("TT cores must be 3-mode tensors");
        if (i > 0 && cores_[i - 1].dim(2) != c.dim(0))
            throw DataError("TT rank chain mismatch between adjacent cores");
        if (c.dim(2) > c.dim(0) * c.dim(1))
            throw DataError("rank r_i exceeds r_{i-1} * I_i (left-orthogonality infeasible)");
    }
    if (orthonormal_) {
        for (const auto& c : cores_) {
            if (orthonormality_defect(left_unfold(c)) > kOrthoTol)
                throw NumericError("core left unfolding is not orthonormal");
        }
    }
}

std::vector<Index> TTSubspace::ranks() const {
    std::vector<Index> r;
    r.reserve(cores_.size() + 1);
    r.push_back(1);
    for (const auto& c : cores_) r.push_back(c.dim(2));
    return r;
}

std::vector<Index> TTSubspace::dims() const {
    std::vector<Index> d;
    d.reserve(cores_.size());
    for (const auto& c : cores_) d.push_back(c.dim(1));
    return d;
}

Index TTSubspace::ambient_dim() const {
    Index d = 1;
    for (const auto& c : cores_) d *= c.dim(1);
    return d;
}

const Matrix& TTSubspace::basis() const {
    std::call_once(cache_->once, [this] { cache_->value = left_unfold(connect_product(cores_)); });
    return cache_->value;
}

void TTSubspace::require_orthonormal() const {
    if (!orthonormal_) throw NumericError("operation requires an orthonormal TT subspace");
}

Vector TTSubspace::project(const DenseTensor& x) const {
    if (x.shape() != dims()) throw DataError("tensor shape does not match subspace dims");
    return project(Vector(x.data()));
}

Vector TTSubspace::project(const Vector& x) const {
    require_orthonormal();
    if (x.size() != ambient_dim()) throw DataError("vector length does not match ambient dim");
    return basis().transpose() * x;
}

double TTSubspace::residual_norm_sq(const DenseTensor& x) const {
    if (x.shape() != dims()) throw DataError("tensor shape does not match subspace dims");
    return residual_norm_sq(Vector(x.data()));
}

double TTSubspace::residual_norm_sq(const Vector& x) const {
    const Vector coeffs = project(x);
    const double r = x.squaredNorm() - coeffs.squaredNorm();
    return r > 0.0 ? r : 0.0;
}

double orthonormality_defect(const Matrix& basis) {
    const Matrix gram = basis.transpose() * basis;
    return (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

} // namespace ttsl
