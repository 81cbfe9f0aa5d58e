#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttsl/dataset.hpp"
#include "ttsl/npe.hpp"

namespace ttsl {

/// Experiment knobs. Every key in the flat key=value config file maps to the
/// CLI flag of the same name; CLI flags win.
struct ExperimentConfig {
    std::string train_path, train_labels_path;
    std::string test_path, test_labels_path;
    std::vector<Index> dims;
    std::string method = "ttpca";  // ttpca | ttnpe | pca | knn | tnpe
    std::vector<double> tau_grid;
    std::vector<std::vector<Index>> rank_grid;
    std::vector<int> k_grid{5};
    double noise_sigma = 0.0;
    uint64_t seed = 0;
    std::vector<int> class_filter;
    Index per_class_cap = 0;
    double train_fraction = 0.5;  // single-file datasets: seeded shuffle then split
    std::string out_path;
    // ttnpe iteration controls
    int max_sweeps = 20;
    double sweep_tol = 1e-8;
    StiefelOptions solver;
};

struct SweepRow {
    std::string method;
    std::string param;  // tau=0.3 / ranks=2,2,3 / k=5
    double compression_ratio = 0.0;
    std::optional<double> error;        // empty for storage-only methods
    std::optional<double> recon_error;  // relative Frobenius, subspace methods
    double wall_ms = 0.0;
};

/// Key=value config file with optional [sections] (sections are cosmetic).
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Loads train/test per cfg (splitting a single file when no test path is
/// given), applies class filter, caps and noise, then runs the grid.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg);

/// Grid run on preloaded data. Noise is applied here (seeded, train and test
/// independently). Rows come back sorted by compression ratio.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const LabeledDataset& train,
                                const LabeledDataset& test);

/// CSV "compression_ratio,error,log10_error,method" (log cell empty for
/// error = 0 or storage-only rows) plus a gnuplot-friendly variant at
/// path + ".dat".
void emit_plotdata(const std::vector<SweepRow>& rows, const std::string& path);

/// Full row dump including parameters, reconstruction error and timings.
void emit_rows_csv(const std::vector<SweepRow>& rows, const std::string& path);

} // namespace ttsl
