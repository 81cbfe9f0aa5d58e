// ttsl command line: fit / classify / sweep / storage / inspect.
// Exit codes: 0 ok, 1 usage, 2 bad data, 3 numeric failure.

#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttsl/dataset.hpp"
#include "ttsl/errors.hpp"
#include "ttsl/npe.hpp"
#include "ttsl/pca.hpp"
#include "ttsl/serialize.hpp"
#include "ttsl/storage.hpp"
#include "ttsl/sweep.hpp"

namespace {

std::vector<ttsl::Index> parse_dims_arg(const std::string& s) {
    std::vector<ttsl::Index> dims;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find('x', pos);
        if (next == std::string::npos) next = s.size();
        dims.push_back(std::stoll(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (dims.empty()) throw ttsl::DataError("empty --dims");
    return dims;
}

std::vector<ttsl::Index> parse_ranks_arg(const std::string& s) {
    std::vector<ttsl::Index> ranks;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        ranks.push_back(std::stoll(s.substr(pos, next - pos)));
        pos = next + 1;
    }
    if (ranks.empty()) throw ttsl::DataError("empty --ranks");
    return ranks;
}

struct DataArgs {
    std::string data_path, labels_path, dims_spec;
    std::vector<int> classes;
    ttsl::Index per_class_cap = 0;
    double noise_sigma = 0.0;
    uint64_t seed = 0;
};

void add_data_flags(CLI::App* cmd, DataArgs& args, const char* prefix) {
    const std::string p(prefix);
    cmd->add_option("--" + p, args.data_path, "IDX or CSV data file")->required();
    cmd->add_option("--" + p + "-labels", args.labels_path, "IDX label file (IDX data only)");
    cmd->add_option("--dims", args.dims_spec, "tensor shape, e.g. 4x7x4x7");
    cmd->add_option("--classes", args.classes, "keep only these labels (relabeled densely)");
    cmd->add_option("--per-class-cap", args.per_class_cap, "max samples per class (0 = all)");
    cmd->add_option("--noise-sigma", args.noise_sigma, "additive Gaussian noise stddev");
    cmd->add_option("--seed", args.seed, "RNG seed for noise / shuffles");
}

ttsl::LabeledDataset load_data(const DataArgs& args, uint64_t seed_offset = 0) {
    std::vector<ttsl::Index> dims;
    if (!args.dims_spec.empty()) dims = parse_dims_arg(args.dims_spec);
    ttsl::LabeledDataset ds;
    if (args.data_path.size() >= 4 &&
        args.data_path.compare(args.data_path.size() - 4, 4, ".csv") == 0)
        ds = ttsl::load_csv(args.data_path, dims);
    else {
        if (args.labels_path.empty())
            throw ttsl::DataError("IDX data needs a label file (--*-labels)");
        ds = ttsl::load_idx(args.data_path, args.labels_path, dims);
    }
    if (!args.classes.empty())
        ds = ttsl::filter_classes(ds, args.classes, args.per_class_cap, args.seed + seed_offset);
    return ttsl::add_noise(ds, args.noise_sigma, args.seed + seed_offset);
}

int run_fit(const DataArgs& data, const std::string& method, std::optional<double> tau,
            const std::string& ranks_spec, int knn_k, std::optional<double> epsilon,
            int max_sweeps, const std::string& out) {
    const ttsl::LabeledDataset train = load_data(data);
    if (method == "ttpca") {
        ttsl::TTPCAConfig cfg;
        if (tau) cfg.tau = *tau;
        if (!ranks_spec.empty()) cfg.ranks = parse_ranks_arg(ranks_spec);
        const ttsl::TTPCAClassifier model = ttsl::ttpca_fit_classifier(train, cfg);
        ttsl::save_classifier(out, model);
        std::cout << "ttpca: " << model.classes.size() << " classes";
        for (const auto& cls : model.classes) {
            std::cout << " ranks=[";
            const auto& r = cls.subspace.ranks();
            for (size_t i = 1; i < r.size(); ++i) std::cout << (i > 1 ? "," : "") << r[i];
            std::cout << "]";
        }
        std::cout << " -> " << out << "\n";
        return 0;
    }
    if (method == "ttnpe") {
        ttsl::TTNPEConfig cfg;
        if (ranks_spec.empty()) throw ttsl::DataError("ttnpe fit needs --ranks");
        cfg.ranks = parse_ranks_arg(ranks_spec);
        cfg.knn_k = knn_k;
        cfg.epsilon = epsilon;
        cfg.max_sweeps = max_sweeps;
        const ttsl::FittedTTNPE model = ttsl::ttnpe_fit(train, cfg);
        ttsl::save_ttnpe(out, model);
        std::cout << "ttnpe: objective " << model.objective << " after "
                  << model.objective_trace.size() - 1 << " core updates -> " << out << "\n";
        return 0;
    }
    throw ttsl::DataError("fit supports methods ttpca and ttnpe, got: " + method);
}

int run_classify(const std::string& model_path, const DataArgs& data, int knn_k) {
    const ttsl::LabeledDataset test = load_data(data, 1);
    std::ifstream probe(model_path, std::ios::binary);
    if (!probe) throw ttsl::DataError("cannot open model: " + model_path);
    char magic[4] = {};
    probe.read(magic, 4);
    probe.close();

    std::vector<int> pred(static_cast<size_t>(test.count()));
    if (std::memcmp(magic, "TTCL", 4) == 0) {
        const ttsl::TTPCAClassifier model = ttsl::load_classifier(model_path);
        for (ttsl::Index i = 0; i < test.count(); ++i)
            pred[static_cast<size_t>(i)] =
                ttsl::ttpca_classify(model, ttsl::Vector(test.data.col(i)));
    } else if (std::memcmp(magic, "TTNE", 4) == 0) {
        const ttsl::FittedTTNPE model = ttsl::load_ttnpe(model_path);
        for (ttsl::Index i = 0; i < test.count(); ++i)
            pred[static_cast<size_t>(i)] =
                ttsl::ttnpe_classify(model, ttsl::Vector(test.data.col(i)), knn_k);
    } else {
        throw ttsl::DataError("unrecognized model magic in " + model_path);
    }

    ttsl::Index wrong = 0;
    for (ttsl::Index i = 0; i < test.count(); ++i)
        if (pred[static_cast<size_t>(i)] != test.labels[static_cast<size_t>(i)]) ++wrong;
    std::cout << "samples " << test.count() << " errors " << wrong << " error-rate "
              << static_cast<double>(wrong) / static_cast<double>(test.count()) << "\n";
    return 0;
}

int run_sweep_cmd(ttsl::ExperimentConfig cfg, const std::string& config_path,
                  const std::vector<std::string>& overrides) {
    if (!config_path.empty())
        for (const auto& [key, value] : ttsl::parse_config_file(config_path))
            ttsl::apply_config_entry(cfg, key, value);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ttsl::DataError("--set expects key=value, got: " + kv);
        ttsl::apply_config_entry(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    const std::vector<ttsl::SweepRow> rows = ttsl::run_sweep(cfg);
    for (const auto& row : rows) {
        std::cout << row.method << " " << row.param << " ratio=" << row.compression_ratio;
        if (row.error) std::cout << " error=" << *row.error;
        if (row.recon_error) std::cout << " recon=" << *row.recon_error;
        std::cout << " wall_ms=" << row.wall_ms << "\n";
    }
    if (!cfg.out_path.empty()) {
        ttsl::emit_rows_csv(rows, cfg.out_path);
        ttsl::emit_plotdata(rows, cfg.out_path + ".plot.csv");
        std::cout << "wrote " << cfg.out_path << " and " << cfg.out_path << ".plot.csv\n";
    }
    return 0;
}

void print_report(const ttsl::StorageReport& rep) {
    std::cout << rep.method << ": subspace_dim " << rep.subspace_dim << " total " << rep.total_storage
              << " data " << rep.data_storage << " ratio " << rep.compression_ratio << "\n";
}

int run_storage(const std::string& dims_spec, const std::string& ranks_spec, ttsl::Index n_train) {
    const std::vector<ttsl::Index> dims = parse_dims_arg(dims_spec);
    const std::vector<ttsl::Index> ranks = parse_ranks_arg(ranks_spec);
    ttsl::Index d = 1;
    for (ttsl::Index i : dims) d *= i;
    print_report(ttsl::storage_pca(d, ranks.back(), n_train));
    print_report(ttsl::storage_tpca(dims, ranks, n_train));
    print_report(ttsl::storage_ttpca(dims, ranks, n_train));
    print_report(ttsl::storage_ttnpe(dims, ranks, n_train));
    std::cout << "ttpca manifold_dim " << ttsl::manifold_dim_ttpca(dims, ranks) << "\n";
    return 0;
}

int run_inspect(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw ttsl::DataError("cannot open: " + path);
    char magic[4] = {};
    probe.read(magic, 4);
    probe.close();

    auto print_subspace = [](const ttsl::TTSubspace& sub) {
        std::cout << "  dims [";
        for (size_t i = 0; i < sub.dims().size(); ++i)
            std::cout << (i ? "," : "") << sub.dims()[i];
        std::cout << "] ranks [";
        for (size_t i = 0; i < sub.ranks().size(); ++i)
            std::cout << (i ? "," : "") << sub.ranks()[i];
        std::cout << "] orthonormal " << (sub.orthonormal() ? "yes" : "no") << "\n";
    };

    if (std::memcmp(magic, "TTSS", 4) == 0) {
        std::cout << "TTSS subspace\n";
        print_subspace(ttsl::load_subspace(path));
    } else if (std::memcmp(magic, "TTCL", 4) == 0) {
        const ttsl::TTPCAClassifier model = ttsl::load_classifier(path);
        std::cout << "TTCL classifier, " << model.classes.size() << " classes\n";
        for (size_t j = 0; j < model.classes.size(); ++j) {
            std::cout << " class " << j << " coeffs " << model.classes[j].coeffs.rows() << "x"
                      << model.classes[j].coeffs.cols() << "\n";
            print_subspace(model.classes[j].subspace);
        }
    } else if (std::memcmp(magic, "TTNE", 4) == 0) {
        const ttsl::FittedTTNPE model = ttsl::load_ttnpe(path);
        std::cout << "TTNE model, " << model.embedded.cols() << " training samples embedded in "
                  << model.embedded.rows() << " dims\n";
        print_subspace(model.subspace);
    } else {
        throw ttsl::DataError("unrecognized magic in " + path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensor-train subspace learning toolkit"};
    app.require_subcommand(1);

    // fit
    auto* fit = app.add_subcommand("fit", "fit a ttpca or ttnpe model");
    DataArgs fit_data;
    add_data_flags(fit, fit_data, "train");
    std::string fit_method = "ttpca", fit_ranks, fit_out;
    std::optional<double> fit_tau, fit_eps;
    int fit_knn_k = 5, fit_max_sweeps = 20;
    fit->add_option("--method", fit_method, "ttpca | ttnpe");
    fit->add_option("--tau", fit_tau, "relative singular value cutoff (ttpca)");
    fit->add_option("--ranks", fit_ranks, "fixed rank vector r1,...,rn");
    fit->add_option("--knn-k", fit_knn_k, "affinity graph neighbor count (ttnpe)");
    fit->add_option("--epsilon", fit_eps, "affinity kernel scale (ttnpe, auto if unset)");
    fit->add_option("--max-sweeps", fit_max_sweeps, "alternating sweep limit (ttnpe)");
    fit->add_option("--out", fit_out, "model output path")->required();

    // classify
    auto* cls = app.add_subcommand("classify", "evaluate a saved model on labeled data");
    DataArgs cls_data;
    add_data_flags(cls, cls_data, "test");
    std::string cls_model;
    int cls_knn_k = 5;
    cls->add_option("--model", cls_model, "model file (TTCL or TTNE)")->required();
    cls->add_option("--knn-k", cls_knn_k, "embedded-space KNN vote size (TTNE)");

    // sweep
    auto* swp = app.add_subcommand("sweep", "run a parameter sweep from a config file");
    std::string swp_config;
    std::vector<std::string> swp_overrides;
    swp->add_option("--config", swp_config, "key=value config file");
    swp->add_option("--set", swp_overrides, "override config entries, key=value");

    // storage
    auto* sto = app.add_subcommand("storage", "print storage reports for a shape/rank choice");
    std::string sto_dims, sto_ranks;
    ttsl::Index sto_n = 1;
    sto->add_option("--dims", sto_dims, "tensor shape, e.g. 4x7x4x7")->required();
    sto->add_option("--ranks", sto_ranks, "rank vector r1,...,rn")->required();
    sto->add_option("--n-train", sto_n, "training set size")->required();

    // inspect
    auto* ins = app.add_subcommand("inspect", "describe a saved model file");
    std::string ins_path;
    ins->add_option("path", ins_path, "model file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit)
            return run_fit(fit_data, fit_method, fit_tau, fit_ranks, fit_knn_k, fit_eps,
                           fit_max_sweeps, fit_out);
        if (*cls) return run_classify(cls_model, cls_data, cls_knn_k);
        if (*swp) return run_sweep_cmd(ttsl::ExperimentConfig{}, swp_config, swp_overrides);
        if (*sto) return run_storage(sto_dims, sto_ranks, sto_n);
        if (*ins) return run_inspect(ins_path);
    } catch (const ttsl::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const ttsl::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
