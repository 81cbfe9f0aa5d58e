#include "ttsl/storage.hpp"

#include <cmath>

namespace ttsl {

namespace {

void check_positive(Index v, const char* what) {
    if (v <= 0) throw DataError(std::string("storage formula requires positive ") + what);
}

double ratio(long long total, Index n_train, Index d) {
    return static_cast<double>(total) / (static_cast<double>(n_train) * static_cast<double>(d));
}

Index integral_nth_root(Index d, int n) {
    const auto root = static_cast<Index>(std::llround(std::pow(static_cast<double>(d), 1.0 / n)));
    for (Index c = root > 1 ? root - 1 : 1; c <= root + 1; ++c) {
        Index p = 1;
        for (int i = 0; i < n; ++i) p *= c;
        if (p == d) return c;
    }
    throw DataError("d is not a perfect n-th power");
}

} // namespace

StorageReport storage_pca(Index d, Index r, Index n_train) {
    check_positive(d, "d");
    check_positive(n_train, "n_train");
    if (r < 0) throw DataError("storage formula requires r >= 0");
    StorageReport rep;
    rep.method = "pca";
    rep.subspace_dim = r == 0 ? 0 : static_cast<long long>(d) * r - r * (r + 1) / 2;
    rep.data_storage = static_cast<long long>(r) * n_train;
    rep.total_storage = rep.subspace_dim;
    rep.compression_ratio = ratio(rep.total_storage, n_train, d);
    return rep;
}

StorageReport storage_tpca(const std::vector<Index>& dims, const std::vector<Index>& ranks,
                           Index n_train, bool main_text_core_count) {
    if (dims.size() != ranks.size() || dims.empty())
        throw DataError("storage_tpca: dims and ranks must be non-empty and equal-length");
    check_positive(n_train, "n_train");
    const int n = static_cast<int>(dims.size());
    Index d = 1;
    long long transform = 0;
    long long core = 1;
    for (int i = 0; i < n; ++i) {
        check_positive(dims[static_cast<size_t>(i)], "dims");
        if (ranks[static_cast<size_t>(i)] < 0) throw DataError("storage_tpca: negative rank");
        d *= dims[static_cast<size_t>(i)];
        const Index ri = ranks[static_cast<size_t>(i)];
        transform += static_cast<long long>(dims[static_cast<size_t>(i)]) * ri - ri * ri;
        core *= ri;
    }
    if (main_text_core_count) {
        for (int i = 1; i < n; ++i)
            if (dims[static_cast<size_t>(i)] != dims[0] || ranks[static_cast<size_t>(i)] != ranks[0])
                throw DataError("main-text T-PCA form requires equal dims and ranks");
        core = 1;
        for (int i = 0; i <= n; ++i) core *= ranks[0];  // r^{n+1}
        // main-text transform term uses r(1+r)/2 savings, same as general form
        transform = static_cast<long long>(n) * (dims[0] * ranks[0] - ranks[0] * (ranks[0] + 1) / 2);
    }
    StorageReport rep;
    rep.method = "tpca";
    rep.subspace_dim = transform + core;
    rep.data_storage = core * n_train;
    rep.total_storage = rep.subspace_dim;
    rep.compression_ratio = ratio(rep.total_storage, n_train, d);
    return rep;
}

StorageReport storage_ttpca(const std::vector<Index>& dims, const std::vector<Index>& ranks,
                            Index n_train) {
    if (dims.size() != ranks.size() || dims.empty())
        throw DataError("storage_ttpca: dims and ranks must be non-empty and equal-length");
    check_positive(n_train, "n_train");
    const int n = static_cast<int>(dims.size());
    Index d = 1;
    long long params = 0;
    Index r_prev = 1;
    for (int i = 0; i < n; ++i) {
        check_positive(dims[static_cast<size_t>(i)], "dims");
        const Index ri = ranks[static_cast<size_t>(i)];
        if (ri < 0) throw DataError("storage_ttpca: negative rank");
        d *= dims[static_cast<size_t>(i)];
        // Stiefel count per left-orthonormal core: r_{i-1} I_i r_i - r_i(r_i+1)/2.
        params += static_cast<long long>(r_prev) * dims[static_cast<size_t>(i)] * ri -
                  static_cast<long long>(ri) * (ri + 1) / 2;
        r_prev = ri;
    }
    if (params < 0) params = 0;
    const Index rn = ranks.back();
    StorageReport rep;
    rep.method = "ttpca";
    rep.subspace_dim = params;
    rep.data_storage = static_cast<long long>(rn) * n_train;
    rep.total_storage = rep.subspace_dim;
    rep.compression_ratio = ratio(rep.total_storage, n_train, d);
    return rep;
}

long long manifold_dim_ttpca(const std::vector<Index>& dims, const std::vector<Index>& ranks) {
    if (dims.size() != ranks.size() || dims.empty())
        throw DataError("manifold_dim_ttpca: dims and ranks must be non-empty and equal-length");
    const int n = static_cast<int>(dims.size());
    long long params = 0;
    Index r_prev = 1;
    for (int i = 0; i < n; ++i) {
        check_positive(dims[static_cast<size_t>(i)], "dims");
        const Index ri = ranks[static_cast<size_t>(i)];
        if (ri < 0) throw DataError("manifold_dim_ttpca: negative rank");
        params += static_cast<long long>(r_prev) * dims[static_cast<size_t>(i)] * ri;
        if (i < n - 1) params -= static_cast<long long>(ri) * ri;
        r_prev = ri;
    }
    return params;
}

StorageReport storage_embedding(EmbeddingMethod method, Index d, int n, Index r, Index n_train) {
    check_positive(d, "d");
    check_positive(n_train, "n_train");
    if (n < 1) throw DataError("storage formula requires n >= 1");
    if (r < 0) throw DataError("storage formula requires r >= 0");
    StorageReport rep;
    switch (method) {
    case EmbeddingMethod::KNN: {
        rep.method = "knn";
        rep.subspace_dim = 0;
        rep.data_storage = static_cast<long long>(d) * n_train;
        rep.total_storage = rep.data_storage;
        break;
    }
    case EmbeddingMethod::TNPE: {
        const Index di = integral_nth_root(d, n);
        rep.method = "tnpe";
        long long rn = 1;
        for (int i = 0; i < n; ++i) rn *= r;
        rep.subspace_dim = static_cast<long long>(n) * (di * r - r * (r + 1) / 2);
        rep.data_storage = rn * n_train;
        rep.total_storage = rep.subspace_dim + rep.data_storage;
        break;
    }
    case EmbeddingMethod::TTNPE: {
        const Index di = integral_nth_root(d, n);
        rep.method = "ttnpe";
        rep.subspace_dim =
            static_cast<long long>(di) * r * (r * (n - 1) + 1) - r * (r + 1) * n / 2;
        rep.data_storage = static_cast<long long>(r) * n_train;
        rep.total_storage = rep.subspace_dim + rep.data_storage;
        break;
    }
    }
    rep.compression_ratio = ratio(rep.total_storage, n_train, d);
    return rep;
}

StorageReport storage_ttnpe(const std::vector<Index>& dims, const std::vector<Index>& ranks,
                            Index n_train) {
    StorageReport rep = storage_ttpca(dims, ranks, n_train);
    rep.method = "ttnpe";
    rep.total_storage = rep.subspace_dim + rep.data_storage;
    Index d = 1;
    for (Index s : dims) d *= s;
    rep.compression_ratio = ratio(rep.total_storage, n_train, d);
    return rep;
}

} // namespace ttsl
