#include "ttsl/pca.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ttsl/parallel.hpp"
#include "ttsl/serialize.hpp"

namespace ttsl {

namespace {

constexpr double kSigmaZeroRel = 1e-12;  // sigma below this times sigma_max counts as zero

} // namespace

std::pair<Matrix, Vector> thin_svd_left(const Matrix& m) {
    if (m.cols() > 4 * m.rows() && m.rows() > 0) {
        // Gram route: eigendecomposition of the small m x m matrix.
        const Matrix gram = m * m.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
        if (eig.info() != Eigen::Success) throw NumericError("Gram eigendecomposition failed");
        const Index k = m.rows();
        // eigenvalues of the Gram matrix carry squared noise; rank-deficient
        // directions surface at eps * lambda_max and must be zeroed here, not
        // after the square root.
        const double lam_max = std::max(eig.eigenvalues()(k - 1), 0.0);
        const double lam_tol =
            std::numeric_limits<double>::epsilon() * static_cast<double>(m.cols()) * lam_max;
        Matrix u(m.rows(), k);
        Vector sigma(k);
        for (Index j = 0; j < k; ++j) {
            // eigenvalues ascending; reverse to descending sigma
            const Index src = k - 1 - j;
            const double lambda = eig.eigenvalues()(src);
            sigma(j) = lambda > lam_tol ? std::sqrt(lambda) : 0.0;
            u.col(j) = eig.eigenvectors().col(src);
        }
        return {std::move(u), std::move(sigma)};
    }
    Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeThinU);
    return {svd.matrixU(), svd.singularValues()};
}

FittedTTPCA ttpca_fit(const Matrix& data, const std::vector<Index>& dims, const TTPCAConfig& cfg) {
    if (data.cols() < 1) throw DataError("ttpca_fit: empty data");
    if (dims.empty()) throw DataError("ttpca_fit: empty dims");
    Index d = 1;
    for (Index s : dims) d *= s;
    if (data.rows() != d) throw DataError("ttpca_fit: data rows do not match prod(dims)");
    if (cfg.tau.has_value() == cfg.ranks.has_value())
        throw DataError("ttpca_fit: exactly one of tau / rank vector must be set");
    if (cfg.tau && (*cfg.tau < 0.0 || *cfg.tau >= 1.0))
        throw DataError("ttpca_fit: tau must lie in [0,1)");
    if (cfg.ranks && cfg.ranks->size() != dims.size())
        throw DataError("ttpca_fit: rank vector length must equal number of modes");

    FittedTTPCA fit;
    fit.centered = cfg.center;
    Matrix carry;
    if (cfg.center) {
        fit.mean = data.rowwise().mean();
        carry = data.colwise() - fit.mean;
    } else {
        carry = data;
    }

    const int n = static_cast<int>(dims.size());
    const Index num_samples = data.cols();

    std::vector<DenseTensor> cores;
    cores.reserve(static_cast<size_t>(n));
    Index r_prev = 1;
    for (int i = 0; i < n; ++i) {
        const Index mid = dims[static_cast<size_t>(i)];
        const Matrix unfolded =
            Eigen::Map<const Matrix>(carry.data(), r_prev * mid, carry.size() / (r_prev * mid));
        auto [u, sigma] = thin_svd_left(unfolded);

        const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
        if (sigma_max == 0.0) fit.degenerate = true;
        Index nonzero = 0;
        for (Index j = 0; j < sigma.size(); ++j)
            if (sigma(j) > kSigmaZeroRel * sigma_max && sigma(j) > 0.0) ++nonzero;

        Index r;
        if (cfg.tau) {
            r = 0;
            for (Index j = 0; j < nonzero; ++j)
                if (sigma(j) > *cfg.tau * sigma_max) ++r;
        } else {
            r = std::min((*cfg.ranks)[static_cast<size_t>(i)], nonzero);
        }
        if (r < 1) r = 1;  // degenerate all-zero carry keeps a single basis vector

        const Matrix u_kept = u.leftCols(r);
        cores.push_back(left_refold(u_kept, r_prev, mid, r));
        carry = u_kept.transpose() * unfolded;
        r_prev = r;
    }

    fit.subspace = TTSubspace(std::move(cores), /*orthonormal=*/true);
    fit.coeffs = Eigen::Map<const Matrix>(carry.data(), r_prev, num_samples);
    return fit;
}

TTPCAClassifier ttpca_fit_classifier(const LabeledDataset& ds, const TTPCAConfig& cfg) {
    const int c = num_classes(ds);
    TTPCAClassifier model;
    model.dims = ds.dims;
    model.classes.resize(static_cast<size_t>(c));

    std::vector<std::vector<Index>> members(static_cast<size_t>(c));
    for (Index i = 0; i < ds.count(); ++i)
        members[static_cast<size_t>(ds.labels[static_cast<size_t>(i)])].push_back(i);
    for (int j = 0; j < c; ++j)
        if (members[static_cast<size_t>(j)].empty())
            throw DataError("class " + std::to_string(j) + " has no training samples");

    parallel_for(static_cast<size_t>(c), [&](size_t j) {
        const auto& idx = members[j];
        Matrix block(ds.dim(), static_cast<Index>(idx.size()));
        for (size_t k = 0; k < idx.size(); ++k) block.col(static_cast<Index>(k)) = ds.data.col(idx[k]);
        model.classes[j] = ttpca_fit(block, ds.dims, cfg);
    });
    return model;
}

int ttpca_classify(const TTPCAClassifier& model, const Vector& sample) {
    if (model.classes.empty()) throw DataError("empty classifier");
    int best = 0;
    double best_res = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < model.classes.size(); ++j) {
        const auto& cls = model.classes[j];
        const Vector v = cls.centered ? Vector(sample - cls.mean) : sample;
        const double res = cls.subspace.residual_norm_sq(v);
        if (res < best_res) {  // strict: ties keep the smallest label
            best_res = res;
            best = static_cast<int>(j);
        }
    }
    return best;
}

int ttpca_classify(const TTPCAClassifier& model, const DenseTensor& sample) {
    if (sample.shape() != model.dims) throw DataError("sample shape does not match classifier dims");
    return ttpca_classify(model, Vector(sample.data()));
}

void save_classifier(const std::string& path, const TTPCAClassifier& model) {
    for (const auto& cls : model.classes)
        if (cls.centered) throw DataError("centered classifiers are not serializable");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path);
    os.write("TTCL", 4);
    wire::put_u32(os, static_cast<uint32_t>(model.classes.size()));
    for (const auto& cls : model.classes) {
        std::ostringstream block;
        write_subspace(block, cls.subspace);
        const std::string bytes = block.str();
        wire::put_u64(os, bytes.size());
        os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    for (const auto& cls : model.classes) wire::put_matrix(os, cls.coeffs);
}

TTPCAClassifier load_classifier(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TTCL", 4) != 0)
        throw DataError("bad magic: not a TTCL classifier file");
    const uint32_t c = wire::get_u32(is);
    if (c == 0) throw DataError("classifier with zero classes");
    TTPCAClassifier model;
    model.classes.resize(c);
    for (uint32_t j = 0; j < c; ++j) {
        const uint64_t len = wire::get_u64(is);
        std::string bytes(len, '\0');
        if (!is.read(bytes.data(), static_cast<std::streamsize>(len)))
            throw DataError("truncated TTCL block");
        std::istringstream block(bytes);
        model.classes[j].subspace = read_subspace(block);
    }
    for (uint32_t j = 0; j < c; ++j) model.classes[j].coeffs = wire::get_matrix(is);
    model.dims = model.classes.front().subspace.dims();
    for (const auto& cls : model.classes)
        if (cls.subspace.dims() != model.dims) throw DataError("TTCL classes disagree on dims");
    return model;
}

FittedPCA pca_fit(const Matrix& data, Index r, bool center) {
    if (r < 1 || r > std::min(data.rows(), data.cols()))
        throw DataError("pca_fit: rank out of range");
    FittedPCA fit;
    fit.centered = center;
    Matrix d = data;
    if (center) {
        fit.mean = data.rowwise().mean();
        d = data.colwise() - fit.mean;
    }
    auto [u, sigma] = thin_svd_left(d);
    (void)sigma;
    fit.basis = u.leftCols(r);
    fit.coeffs = fit.basis.transpose() * d;
    return fit;
}

} // namespace ttsl
