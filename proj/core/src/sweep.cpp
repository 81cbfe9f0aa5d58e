#include "ttsl/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "ttsl/parallel.hpp"
#include "ttsl/pca.hpp"
#include "ttsl/storage.hpp"

namespace ttsl {

namespace {

std::vector<std::string> split(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, delim))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<Index> parse_dims(const std::string& s) {
    std::vector<Index> dims;
    for (const auto& part : split(s, 'x')) dims.push_back(std::stoll(part));
    if (dims.empty()) throw DataError("empty dims spec: " + s);
    return dims;
}

std::vector<Index> parse_rank_vector(const std::string& s) {
    std::vector<Index> ranks;
    for (const auto& part : split(s, ',')) ranks.push_back(std::stoll(part));
    if (ranks.empty()) throw DataError("empty rank vector: " + s);
    return ranks;
}

std::string format_ranks(const std::vector<Index>& ranks) {
    std::string out;
    for (size_t i = 0; i < ranks.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(ranks[i]);
    }
    return out;
}

double classification_error(const std::function<int(Index)>& predict, const LabeledDataset& test) {
    std::vector<int> pred(static_cast<size_t>(test.count()));
    parallel_for(static_cast<size_t>(test.count()),
                 [&](size_t i) { pred[i] = predict(static_cast<Index>(i)); });
    Index wrong = 0;
    for (Index i = 0; i < test.count(); ++i)
        if (pred[static_cast<size_t>(i)] != test.labels[static_cast<size_t>(i)]) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(test.count());
}

class Stopwatch {
public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    }

private:
    using Clock = std::chrono::steady_clock;
    Clock::time_point start_ = Clock::now();
};

LabeledDataset load_any(const std::string& path, const std::string& labels_path,
                        const std::vector<Index>& dims) {
    if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
        return load_csv(path, dims);
    if (labels_path.empty())
        throw DataError("IDX dataset needs a labels file: " + path);
    return load_idx(path, labels_path, dims);
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open config: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.empty() || line[0] == '#' || line[0] == ';') continue;
        if (line.front() == '[' && line.back() == ']') continue;  // sections are cosmetic
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw DataError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        key.erase(key.find_last_not_of(" \t") + 1);
        const auto vstart = value.find_first_not_of(" \t");
        value = vstart == std::string::npos ? "" : value.substr(vstart);
        kv[key] = value;
    }
    return kv;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "train") cfg.train_path = value;
    else if (key == "train-labels") cfg.train_labels_path = value;
    else if (key == "test") cfg.test_path = value;
    else if (key == "test-labels") cfg.test_labels_path = value;
    else if (key == "dims") cfg.dims = parse_dims(value);
    else if (key == "method") cfg.method = value;
    else if (key == "tau") {
        cfg.tau_grid.clear();
        for (const auto& p : split(value, ',')) cfg.tau_grid.push_back(std::stod(p));
    } else if (key == "ranks") {
        cfg.rank_grid.clear();
        for (const auto& p : split(value, ';')) cfg.rank_grid.push_back(parse_rank_vector(p));
    } else if (key == "knn-k") {
        cfg.k_grid.clear();
        for (const auto& p : split(value, ',')) cfg.k_grid.push_back(std::stoi(p));
    } else if (key == "noise-sigma") cfg.noise_sigma = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "classes") {
        cfg.class_filter.clear();
        for (const auto& p : split(value, ',')) cfg.class_filter.push_back(std::stoi(p));
    } else if (key == "per-class-cap") cfg.per_class_cap = std::stoll(value);
    else if (key == "train-fraction") cfg.train_fraction = std::stod(value);
    else if (key == "out") cfg.out_path = value;
    else if (key == "max-sweeps") cfg.max_sweeps = std::stoi(value);
    else if (key == "sweep-tol") cfg.sweep_tol = std::stod(value);
    else if (key == "solver-iters") cfg.solver.max_iters = std::stoi(value);
    else if (key == "solver-step") cfg.solver.step0 = std::stod(value);
    else throw DataError("unknown config key: " + key);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
    if (cfg.train_path.empty()) throw DataError("no training dataset configured");
    LabeledDataset train, test;
    if (cfg.test_path.empty()) {
        LabeledDataset all = load_any(cfg.train_path, cfg.train_labels_path, cfg.dims);
        std::tie(train, test) = split_dataset(all, cfg.train_fraction, cfg.seed);
    } else {
        train = load_any(cfg.train_path, cfg.train_labels_path, cfg.dims);
        test = load_any(cfg.test_path, cfg.test_labels_path, cfg.dims);
    }
    if (!cfg.class_filter.empty()) {
        train = filter_classes(train, cfg.class_filter, cfg.per_class_cap, cfg.seed);
        test = filter_classes(test, cfg.class_filter, cfg.per_class_cap, cfg.seed + 1);
    } else if (cfg.per_class_cap > 0) {
        std::vector<int> all_classes(static_cast<size_t>(num_classes(train)));
        for (size_t c = 0; c < all_classes.size(); ++c) all_classes[c] = static_cast<int>(c);
        train = filter_classes(train, all_classes, cfg.per_class_cap, cfg.seed);
        test = filter_classes(test, all_classes, cfg.per_class_cap, cfg.seed + 1);
    }
    return run_sweep(cfg, train, test);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const LabeledDataset& train_in,
                                const LabeledDataset& test_in) {
    if (train_in.count() < 1) throw DataError("empty training set");
    if (test_in.count() < 1) throw DataError("empty test set");
    if (train_in.dim() != test_in.dim()) throw DataError("train/test dimension mismatch");

    const LabeledDataset train = add_noise(train_in, cfg.noise_sigma, cfg.seed);
    const LabeledDataset test = add_noise(test_in, cfg.noise_sigma, cfg.seed + 1);
    const Index d = train.dim();
    const Index n_tr = train.count();
    const double raw = static_cast<double>(n_tr) * static_cast<double>(d);

    std::vector<SweepRow> rows;

    if (cfg.method == "ttpca") {
        const bool use_tau = !cfg.tau_grid.empty();
        if (!use_tau && cfg.rank_grid.empty())
            throw DataError("ttpca sweep needs a tau or rank grid");
        const size_t points = use_tau ? cfg.tau_grid.size() : cfg.rank_grid.size();
        const double data_norm = train.data.norm();
        for (size_t g = 0; g < points; ++g) {
            Stopwatch clock;
            TTPCAConfig fit_cfg;
            SweepRow row;
            row.method = "ttpca";
            if (use_tau) {
                fit_cfg.tau = cfg.tau_grid[g];
                row.param = "tau=" + std::to_string(cfg.tau_grid[g]);
            } else {
                fit_cfg.ranks = cfg.rank_grid[g];
                row.param = "ranks=" + format_ranks(cfg.rank_grid[g]);
            }
            const TTPCAClassifier model = ttpca_fit_classifier(train, fit_cfg);

            long long params = 0;
            for (const auto& cls : model.classes) {
                const std::vector<Index> rk = cls.subspace.ranks();
                const std::vector<Index> fitted(rk.begin() + 1, rk.end());
                params += storage_ttpca(train.dims, fitted, n_tr).subspace_dim;
            }
            // reconstruction error over the whole training matrix
            double err_sq = 0.0;
            {
                std::vector<Index> next(static_cast<size_t>(model.classes.size()), 0);
                for (Index i = 0; i < n_tr; ++i) {
                    const auto cls_idx = static_cast<size_t>(train.labels[static_cast<size_t>(i)]);
                    const auto& cls = model.classes[cls_idx];
                    const Vector rec = cls.subspace.basis() * cls.coeffs.col(next[cls_idx]++);
                    err_sq += (rec - train.data.col(i)).squaredNorm();
                }
            }
            row.compression_ratio = static_cast<double>(params) / raw;
            row.recon_error = data_norm > 0 ? std::sqrt(err_sq) / data_norm : 0.0;
            row.error = classification_error(
                [&](Index i) { return ttpca_classify(model, Vector(test.data.col(i))); }, test);
            row.wall_ms = clock.ms();
            rows.push_back(std::move(row));
        }
    } else if (cfg.method == "pca") {
        if (cfg.rank_grid.empty()) throw DataError("pca sweep needs a rank grid");
        for (const auto& ranks : cfg.rank_grid) {
            Stopwatch clock;
            const Index r = ranks.front();
            SweepRow row;
            row.method = "pca";
            row.param = "r=" + std::to_string(r);
            const int c = num_classes(train);
            std::vector<Matrix> bases(static_cast<size_t>(c));
            double err_sq = 0.0;
            for (int j = 0; j < c; ++j) {
                std::vector<Index> idx;
                for (Index i = 0; i < n_tr; ++i)
                    if (train.labels[static_cast<size_t>(i)] == j) idx.push_back(i);
                if (idx.empty()) throw DataError("empty class in pca sweep");
                Matrix block(d, static_cast<Index>(idx.size()));
                for (size_t m = 0; m < idx.size(); ++m) block.col(static_cast<Index>(m)) = train.data.col(idx[m]);
                const Index r_eff = std::min<Index>(r, std::min(block.rows(), block.cols()));
                const FittedPCA fit = pca_fit(block, r_eff);
                err_sq += (fit.basis * fit.coeffs - block).squaredNorm();
                bases[static_cast<size_t>(j)] = fit.basis;
            }
            long long params = 0;
            for (const auto& b : bases) params += storage_pca(d, b.cols(), n_tr).subspace_dim;
            row.compression_ratio = static_cast<double>(params) / raw;
            const double data_norm = train.data.norm();
            row.recon_error = data_norm > 0 ? std::sqrt(err_sq) / data_norm : 0.0;
            row.error = classification_error(
                [&](Index i) {
                    const Vector y = test.data.col(i);
                    int best = 0;
                    double best_res = std::numeric_limits<double>::infinity();
                    for (size_t j = 0; j < bases.size(); ++j) {
                        const double res = y.squaredNorm() - (bases[j].transpose() * y).squaredNorm();
                        if (res < best_res) {
                            best_res = res;
                            best = static_cast<int>(j);
                        }
                    }
                    return best;
                },
                test);
            row.wall_ms = clock.ms();
            rows.push_back(std::move(row));
        }
    } else if (cfg.method == "ttnpe") {
        if (cfg.rank_grid.empty()) throw DataError("ttnpe sweep needs a rank grid");
        if (cfg.k_grid.empty()) throw DataError("ttnpe sweep needs a K grid");
        for (const auto& ranks : cfg.rank_grid) {
            TTNPEConfig fit_cfg;
            fit_cfg.ranks = ranks;
            fit_cfg.knn_k = cfg.k_grid.front();
            fit_cfg.max_sweeps = cfg.max_sweeps;
            fit_cfg.sweep_tol = cfg.sweep_tol;
            fit_cfg.solver = cfg.solver;
            Stopwatch fit_clock;
            const FittedTTNPE model = ttnpe_fit(train, fit_cfg);
            const double fit_ms = fit_clock.ms();
            for (int k : cfg.k_grid) {
                Stopwatch clock;
                SweepRow row;
                row.method = "ttnpe";
                row.param = "ranks=" + format_ranks(ranks) + ",k=" + std::to_string(k);
                row.compression_ratio = storage_ttnpe(train.dims, ranks, n_tr).compression_ratio;
                row.error = classification_error(
                    [&](Index i) { return ttnpe_classify(model, Vector(test.data.col(i)), k); }, test);
                row.wall_ms = fit_ms + clock.ms();
                rows.push_back(std::move(row));
            }
        }
    } else if (cfg.method == "knn") {
        if (cfg.k_grid.empty()) throw DataError("knn sweep needs a K grid");
        for (int k : cfg.k_grid) {
            Stopwatch clock;
            SweepRow row;
            row.method = "knn";
            row.param = "k=" + std::to_string(k);
            row.compression_ratio = 1.0;  // stores the raw training data
            row.error = classification_error(
                [&](Index i) { return knn_baseline(train, Vector(test.data.col(i)), k); }, test);
            row.wall_ms = clock.ms();
            rows.push_back(std::move(row));
        }
    } else if (cfg.method == "tnpe") {
        // storage-only comparison curve; the TNPE classifier is not built
        if (cfg.rank_grid.empty()) throw DataError("tnpe sweep needs a rank grid");
        for (const auto& ranks : cfg.rank_grid) {
            SweepRow row;
            row.method = "tnpe(storage-only)";
            row.param = "r=" + std::to_string(ranks.front());
            row.compression_ratio =
                storage_embedding(EmbeddingMethod::TNPE, d, static_cast<int>(train.dims.size()),
                                  ranks.front(), n_tr)
                    .compression_ratio;
            rows.push_back(std::move(row));
        }
    } else {
        throw DataError("unknown sweep method: " + cfg.method);
    }

    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.compression_ratio < b.compression_ratio;
    });
    return rows;
}

void emit_plotdata(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    os << "compression_ratio,error,log10_error,method\n";
    os.precision(12);
    for (const auto& row : rows) {
        os << row.compression_ratio << ",";
        if (row.error) os << *row.error;
        os << ",";
        if (row.error && *row.error > 0.0) os << std::log10(*row.error);
        os << "," << row.method << "\n";
    }

    std::ofstream gp(path + ".dat");
    if (!gp) throw DataError("cannot open for writing: " + path + ".dat");
    gp << "# compression_ratio error log10_error method\n";
    gp.precision(12);
    for (const auto& row : rows) {
        gp << row.compression_ratio << " ";
        if (row.error) gp << *row.error;
        else gp << "NaN";
        gp << " ";
        if (row.error && *row.error > 0.0) gp << std::log10(*row.error);
        else gp << "NaN";
        gp << " " << row.method << "\n";
    }
}

void emit_rows_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    os << "method,param,compression_ratio,error,recon_error,wall_ms\n";
    os.precision(12);
    for (const auto& row : rows) {
        os << row.method << "," << row.param << "," << row.compression_ratio << ",";
        if (row.error) os << *row.error;
        os << ",";
        if (row.recon_error) os << *row.recon_error;
        os << "," << row.wall_ms << "\n";
    }
}

} // namespace ttsl
