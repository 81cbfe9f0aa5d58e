#include "ttsl/npe.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "ttsl/parallel.hpp"
#include "ttsl/pca.hpp"
#include "ttsl/serialize.hpp"

namespace ttsl {

AffinityMatrix build_affinity(const Matrix& data, int k, std::optional<double> epsilon,
                              bool row_normalize) {
    const Index n = data.cols();
    if (n < 2) throw DataError("build_affinity requires at least 2 samples");
    if (k < 1) throw DataError("build_affinity requires K >= 1");
    if (epsilon && *epsilon <= 0.0) throw DataError("affinity epsilon must be positive");

    const Index keep = std::min<Index>(k, n - 1);
    const Vector sq_norms = data.colwise().squaredNorm();

    // neighbor lists with squared distances, ties at the K-th distance broken
    // by smaller sample index
    std::vector<std::vector<std::pair<double, Index>>> nbrs(static_cast<size_t>(n));
    parallel_for(static_cast<size_t>(n), [&](size_t si) {
        const Index i = static_cast<Index>(si);
        Vector dists = sq_norms.array() + sq_norms(i) - 2.0 * (data.transpose() * data.col(i)).array();
        std::vector<std::pair<double, Index>> cand;
        cand.reserve(static_cast<size_t>(n - 1));
        for (Index j = 0; j < n; ++j) {
            if (j == i) continue;
            cand.emplace_back(std::max(dists(j), 0.0), j);
        }
        std::partial_sort(cand.begin(), cand.begin() + keep, cand.end());
        cand.resize(static_cast<size_t>(keep));
        nbrs[si] = std::move(cand);
    });

    double eps;
    if (epsilon) {
        eps = *epsilon;
    } else {
        std::vector<double> retained;
        retained.reserve(static_cast<size_t>(n * keep));
        for (const auto& row : nbrs)
            for (const auto& [d2, j] : row) retained.push_back(d2);
        std::nth_element(retained.begin(), retained.begin() + static_cast<std::ptrdiff_t>(retained.size() / 2),
                         retained.end());
        eps = retained[retained.size() / 2];
        if (eps <= 0.0) eps = 1.0;
    }

    AffinityMatrix aff;
    aff.k = static_cast<int>(keep);
    aff.epsilon = eps;
    aff.weights.resize(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(n * keep));
    for (Index i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (const auto& [d2, j] : nbrs[static_cast<size_t>(i)]) row_sum += std::exp(-d2 / eps);
        for (const auto& [d2, j] : nbrs[static_cast<size_t>(i)]) {
            double w = std::exp(-d2 / eps);
            if (row_normalize && row_sum > 0.0) w /= row_sum;
            trips.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
        }
    }
    aff.weights.setFromTriplets(trips.begin(), trips.end());
    return aff;
}

Matrix build_graph_gram(const Matrix& data, const AffinityMatrix& affinity) {
    if (affinity.weights.rows() != data.cols() || affinity.weights.cols() != data.cols())
        throw DataError("affinity matrix size does not match sample count");
    const Matrix y = data - data * Matrix(affinity.weights).transpose();
    return y * y.transpose();
}

Matrix smallest_eigvecs(const Matrix& z, Index r) {
    if (z.rows() != z.cols()) throw DataError("smallest_eigvecs requires a square matrix");
    if (r < 1 || r > z.rows()) throw DataError("smallest_eigvecs rank out of range");
    const double scale = std::max(z.cwiseAbs().maxCoeff(), 1.0);
    if ((z - z.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
        throw NumericError("smallest_eigvecs: matrix is not symmetric");

    Eigen::SelfAdjointEigenSolver<Matrix> eig((z + z.transpose()) / 2.0);
    if (eig.info() != Eigen::Success) throw NumericError("symmetric eigendecomposition failed");
    Matrix v = eig.eigenvectors().leftCols(r);  // ascending eigenvalues
    for (Index c = 0; c < v.cols(); ++c) {
        Index arg = 0;
        v.col(c).cwiseAbs().maxCoeff(&arg);
        if (v(arg, c) < 0.0) v.col(c) = -v.col(c);
    }
    return v;
}

namespace {

// (I_{I_k} kron L) as a dense block-diagonal matrix.
Matrix kron_identity(Index blocks, const Matrix& l) {
    Matrix out = Matrix::Zero(blocks * l.rows(), blocks * l.cols());
    for (Index b = 0; b < blocks; ++b)
        out.block(b * l.rows(), b * l.cols(), l.rows(), l.cols()) = l;
    return out;
}

void check_ranks_feasible(const std::vector<Index>& dims, const std::vector<Index>& ranks) {
    if (ranks.size() != dims.size() || ranks.empty())
        throw DataError("rank vector length must equal number of modes");
    Index r_prev = 1;
    for (size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] < 1) throw DataError("ranks must be >= 1");
        if (ranks[i] > r_prev * dims[i])
            throw DataError("rank r_i exceeds r_{i-1} * I_i");
        r_prev = ranks[i];
    }
    // right-side feasibility: r_i <= I_{i+1}...I_n * r_n
    Index tail = ranks.back();
    for (size_t i = ranks.size(); i-- > 0;) {
        if (ranks[i] > tail) throw DataError("rank r_i exceeds I_{i+1}...I_n * r_n");
        tail *= dims[i];
    }
}

} // namespace

std::vector<DenseTensor> fit_cores_to_target(const Matrix& v, const std::vector<Index>& dims,
                                             std::vector<DenseTensor> cores, int max_sweeps,
                                             double sweep_tol, const StiefelOptions& solver,
                                             std::vector<double>* trace) {
    const int n = static_cast<int>(dims.size());
    if (cores.size() != dims.size()) throw DataError("core count must equal number of modes");
    const Index rn = cores.back().dim(2);
    if (v.rows() != left_unfold(connect_product(cores)).rows() || v.cols() != rn)
        throw DataError("target matrix shape does not match the core chain");

    double obj = (left_unfold(connect_product(cores)) - v).squaredNorm();
    if (trace) trace->push_back(obj);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const double sweep_start = obj;
        for (int k = 0; k < n; ++k) {
            Matrix l_left = Matrix::Identity(1, 1);
            if (k > 0) {
                std::vector<DenseTensor> left(cores.begin(), cores.begin() + k);
                l_left = left_unfold(connect_product(left));
            }
            Matrix r_right = Matrix::Identity(rn, rn);
            if (k < n - 1) {
                std::vector<DenseTensor> right(cores.begin() + k + 1, cores.end());
                r_right = right_unfold(connect_product(right));
            }
            StiefelProblem prob;
            prob.A = kron_identity(dims[static_cast<size_t>(k)], l_left);
            prob.B = std::move(r_right);
            prob.C = fold_leading_modes(v, dims, rn, k + 1);
            const auto res = stiefel_minimize(prob, left_unfold(cores[static_cast<size_t>(k)]), solver);
            cores[static_cast<size_t>(k)] = left_refold(res.x, cores[static_cast<size_t>(k)].dim(0),
                                                        cores[static_cast<size_t>(k)].dim(1),
                                                        cores[static_cast<size_t>(k)].dim(2));
            obj = res.objective;
            if (trace) trace->push_back(obj);
        }
        if (sweep_start - obj < sweep_tol * std::max(sweep_start, 1e-300)) break;
    }
    return cores;
}

FittedTTNPE ttnpe_fit(const LabeledDataset& ds, const TTNPEConfig& cfg) {
    check_ranks_feasible(ds.dims, cfg.ranks);
    if (ds.count() < cfg.knn_k + 1)
        throw DataError("ttnpe_fit requires N >= K + 1 samples");

    const int n = static_cast<int>(ds.dims.size());
    const Index rn = cfg.ranks.back();

    // TT-PCA initialization at the requested ranks. If the data is too
    // degenerate to support them, pad cores with orthonormal completions.
    TTPCAConfig init_cfg;
    init_cfg.ranks = cfg.ranks;
    FittedTTPCA init = ttpca_fit(ds.data, ds.dims, init_cfg);
    std::vector<DenseTensor> cores = init.subspace.cores();
    for (int i = 0; i < n; ++i) {
        const auto& c = cores[static_cast<size_t>(i)];
        const Index want_prev = i == 0 ? 1 : cfg.ranks[static_cast<size_t>(i - 1)];
        const Index want = cfg.ranks[static_cast<size_t>(i)];
        if (c.dim(0) != want_prev || c.dim(2) != want) {
            Matrix l = Matrix::Zero(want_prev * ds.dims[static_cast<size_t>(i)], want);
            const Matrix have = left_unfold(c);
            l.topLeftCorner(have.rows(), have.cols()) = have;
            // complete to orthonormal columns
            Eigen::HouseholderQR<Matrix> qr(l);
            const Matrix q = qr.householderQ() * Matrix::Identity(l.rows(), want);
            cores[static_cast<size_t>(i)] = left_refold(q, want_prev, ds.dims[static_cast<size_t>(i)], want);
        }
    }

    const AffinityMatrix aff = build_affinity(ds.data, cfg.knn_k, cfg.epsilon, cfg.row_normalize);
    const Matrix z = build_graph_gram(ds.data, aff);
    const Matrix v = smallest_eigvecs(z, rn);

    FittedTTNPE fit;
    cores = fit_cores_to_target(v, ds.dims, std::move(cores), cfg.max_sweeps, cfg.sweep_tol,
                                cfg.solver, &fit.objective_trace);
    fit.subspace = TTSubspace(std::move(cores), /*orthonormal=*/true);
    fit.embedded = fit.subspace.basis().transpose() * ds.data;
    fit.labels = ds.labels;
    fit.objective = fit.objective_trace.back();
    return fit;
}

Vector ttnpe_embed(const FittedTTNPE& model, const DenseTensor& x) {
    return model.subspace.project(x);
}

Vector ttnpe_embed(const FittedTTNPE& model, const Vector& x) {
    return model.subspace.project(x);
}

int knn_classify(const Matrix& points, const std::vector<int>& labels, const Vector& query, int k) {
    const Index n = points.cols();
    if (n == 0 || labels.size() != static_cast<size_t>(n))
        throw DataError("knn_classify: bad training set");
    if (k < 1 || k > n) throw DataError("knn_classify: K out of range");
    if (query.size() != points.rows()) throw DataError("knn_classify: query dimension mismatch");

    std::vector<std::pair<double, Index>> dists;
    dists.reserve(static_cast<size_t>(n));
    for (Index j = 0; j < n; ++j)
        dists.emplace_back((points.col(j) - query).squaredNorm(), j);
    std::partial_sort(dists.begin(), dists.begin() + k, dists.end());

    int max_label = 0;
    for (int j = 0; j < k; ++j)
        max_label = std::max(max_label, labels[static_cast<size_t>(dists[static_cast<size_t>(j)].second)]);
    std::vector<int> votes(static_cast<size_t>(max_label) + 1, 0);
    for (int j = 0; j < k; ++j)
        ++votes[static_cast<size_t>(labels[static_cast<size_t>(dists[static_cast<size_t>(j)].second)])];
    int best = 0;
    for (size_t l = 1; l < votes.size(); ++l)
        if (votes[l] > votes[static_cast<size_t>(best)]) best = static_cast<int>(l);
    return best;
}

int ttnpe_classify(const FittedTTNPE& model, const DenseTensor& x, int k) {
    return knn_classify(model.embedded, model.labels, ttnpe_embed(model, x), k);
}

int ttnpe_classify(const FittedTTNPE& model, const Vector& x, int k) {
    return knn_classify(model.embedded, model.labels, ttnpe_embed(model, x), k);
}

int knn_baseline(const LabeledDataset& train, const Vector& query, int k) {
    return knn_classify(train.data, train.labels, query, k);
}

void save_ttnpe(const std::string& path, const FittedTTNPE& model) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path);
    os.write("TTNE", 4);
    std::ostringstream block;
    write_subspace(block, model.subspace);
    const std::string bytes = block.str();
    wire::put_u64(os, bytes.size());
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    wire::put_matrix(os, model.embedded);
    wire::put_u32(os, static_cast<uint32_t>(model.labels.size()));
    for (int l : model.labels) wire::put_u32(os, static_cast<uint32_t>(l));
}

FittedTTNPE load_ttnpe(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TTNE", 4) != 0)
        throw DataError("bad magic: not a TTNE model file");
    FittedTTNPE model;
    const uint64_t len = wire::get_u64(is);
    std::string bytes(len, '\0');
    if (!is.read(bytes.data(), static_cast<std::streamsize>(len)))
        throw DataError("truncated TTNE block");
    std::istringstream block(bytes);
    model.subspace = read_subspace(block);
    model.embedded = wire::get_matrix(is);
    const uint32_t n = wire::get_u32(is);
    model.labels.resize(n);
    for (auto& l : model.labels) l = static_cast<int>(wire::get_u32(is));
    if (model.embedded.cols() != static_cast<Index>(n))
        throw DataError("TTNE embedded/label count mismatch");
    return model;
}

} // namespace ttsl
