#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"
#include "ttsl/storage.hpp"
#include "ttsl/sweep.hpp"

using namespace ttsl;

namespace {

/// Two-class dataset whose classes live in disjoint TT subspaces.
std::pair<LabeledDataset, LabeledDataset> synthetic_two_class(std::mt19937_64& rng) {
    const std::vector<Index> dims{3, 4};
    const TTSubspace sa = testutil::random_subspace(dims, {2, 2}, rng);
    const TTSubspace sb = testutil::random_subspace(dims, {2, 2}, rng);
    auto make = [&](Index n) {
        LabeledDataset ds;
        ds.dims = dims;
        ds.data.resize(12, 2 * n);
        ds.labels.assign(static_cast<size_t>(2 * n), 0);
        for (Index i = 0; i < n; ++i) {
            ds.data.col(i) = sa.basis() * testutil::random_matrix(2, 1, rng);
            ds.data.col(n + i) = sb.basis() * testutil::random_matrix(2, 1, rng);
            ds.labels[static_cast<size_t>(n + i)] = 1;
        }
        return ds;
    };
    return {make(20), make(10)};
}

struct TmpFile {
    std::string path;
    ~TmpFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("config file parsing") {
    TmpFile tmp{"test_sweep_config.cfg"};
    std::ofstream(tmp.path) << "# comment\n[data]\ntrain = foo.csv\ndims=4x7x4x7\n\n"
                               "[grid]\nmethod = ttnpe\nranks = 2,2;3,4\nknn-k = 3,5\n"
                               "noise-sigma = 2.5\nseed = 9\n";
    const auto kv = parse_config_file(tmp.path);
    ExperimentConfig cfg;
    for (const auto& [k, v] : kv) apply_config_entry(cfg, k, v);
    CHECK(cfg.train_path == "foo.csv");
    CHECK(cfg.dims == std::vector<Index>{4, 7, 4, 7});
    CHECK(cfg.method == "ttnpe");
    REQUIRE(cfg.rank_grid.size() == 2);
    CHECK(cfg.rank_grid[1] == std::vector<Index>{3, 4});
    CHECK(cfg.k_grid == std::vector<int>{3, 5});
    CHECK(cfg.noise_sigma == 2.5);
    CHECK(cfg.seed == 9);
    CHECK_THROWS_AS(apply_config_entry(cfg, "bogus", "1"), DataError);
}

TEST_CASE("config file syntax errors") {
    TmpFile tmp{"test_sweep_bad.cfg"};
    std::ofstream(tmp.path) << "not a key value line\n";
    CHECK_THROWS_AS(parse_config_file(tmp.path), DataError);
    CHECK_THROWS_AS(parse_config_file("no_such_file.cfg"), DataError);
}

TEST_CASE("ttpca sweep finds a zero-error row at the true rank") {
    std::mt19937_64 rng(90);
    const auto [train, test] = synthetic_two_class(rng);
    ExperimentConfig cfg;
    cfg.method = "ttpca";
    cfg.rank_grid = {{1, 1}, {2, 2}};
    const auto rows = run_sweep(cfg, train, test);
    REQUIRE(rows.size() == 2);
    bool zero_row = false;
    for (const auto& row : rows) {
        REQUIRE(row.error.has_value());
        if (row.param == "ranks=2,2") zero_row = *row.error == 0.0;
        CHECK(row.compression_ratio > 0.0);
    }
    CHECK(zero_row);
}

TEST_CASE("sweep rows are sorted by compression ratio and match the storage formulas") {
    std::mt19937_64 rng(91);
    const auto [train, test] = synthetic_two_class(rng);
    ExperimentConfig cfg;
    cfg.method = "ttnpe";
    cfg.rank_grid = {{2, 4}, {1, 1}, {2, 2}};
    cfg.k_grid = {1, 3};
    const auto rows = run_sweep(cfg, train, test);
    REQUIRE(rows.size() == 6);  // |rank grid| x |K grid|
    for (size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].compression_ratio >= rows[i - 1].compression_ratio);
    for (const auto& row : rows) {
        std::vector<Index> ranks;
        const auto pos = row.param.find("ranks=");
        REQUIRE(pos != std::string::npos);
        std::stringstream ss(row.param.substr(6, row.param.find(",k=") - 6));
        std::string part;
        while (std::getline(ss, part, ',')) ranks.push_back(std::stoll(part));
        CHECK(row.compression_ratio ==
              doctest::Approx(storage_ttnpe(train.dims, ranks, train.count()).compression_ratio));
    }
}

TEST_CASE("knn sweep yields one row per K at compression ratio 1") {
    std::mt19937_64 rng(92);
    const auto [train, test] = synthetic_two_class(rng);
    ExperimentConfig cfg;
    cfg.method = "knn";
    cfg.k_grid = {1};
    const auto rows = run_sweep(cfg, train, test);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].compression_ratio == 1.0);
    REQUIRE(rows[0].error.has_value());
    CHECK(*rows[0].error <= 1.0);
}

TEST_CASE("tnpe rows are storage-only") {
    std::mt19937_64 rng(93);
    LabeledDataset train, test;
    std::tie(train, test) = synthetic_two_class(rng);
    // tnpe closed form needs equal dims; reshape 12 = impossible, use 16-dim data
    LabeledDataset sq;
    sq.dims = {4, 4};
    sq.data = testutil::random_matrix(16, 20, rng);
    sq.labels.assign(20, 0);
    for (size_t i = 10; i < 20; ++i) sq.labels[i] = 1;
    ExperimentConfig cfg;
    cfg.method = "tnpe";
    cfg.rank_grid = {{2, 2}};
    const auto rows = run_sweep(cfg, sq, sq);
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].error.has_value());
    CHECK(rows[0].method.find("storage-only") != std::string::npos);
    CHECK(rows[0].compression_ratio ==
          doctest::Approx(storage_embedding(EmbeddingMethod::TNPE, 16, 2, 2, 20).compression_ratio));
}

TEST_CASE("sweeps are reproducible under a fixed seed") {
    std::mt19937_64 rng(94);
    const auto [train, test] = synthetic_two_class(rng);
    ExperimentConfig cfg;
    cfg.method = "ttpca";
    cfg.tau_grid = {0.2, 0.5};
    cfg.noise_sigma = 0.05;
    cfg.seed = 123;
    const auto a = run_sweep(cfg, train, test);
    const auto b = run_sweep(cfg, train, test);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].compression_ratio == b[i].compression_ratio);
        CHECK(*a[i].error == *b[i].error);
    }
}

TEST_CASE("sweep input validation") {
    std::mt19937_64 rng(95);
    const auto [train, test] = synthetic_two_class(rng);
    ExperimentConfig cfg;
    cfg.method = "ttpca";
    cfg.tau_grid = {0.2};
    LabeledDataset empty;
    empty.dims = train.dims;
    empty.data.resize(12, 0);
    CHECK_THROWS_AS(run_sweep(cfg, train, empty), DataError);
    cfg.method = "nonsense";
    CHECK_THROWS_AS(run_sweep(cfg, train, test), DataError);
    cfg.method = "ttpca";
    cfg.tau_grid.clear();
    CHECK_THROWS_AS(run_sweep(cfg, train, test), DataError);
}

TEST_CASE("plot data emission") {
    std::vector<SweepRow> rows;
    SweepRow a;
    a.method = "ttpca";
    a.param = "tau=0.3";
    a.compression_ratio = 0.25;
    a.error = 0.125;
    rows.push_back(a);
    SweepRow b;
    b.method = "knn";
    b.param = "k=5";
    b.compression_ratio = 1.0;
    b.error = 0.0;  // log10 cell must be empty
    rows.push_back(b);
    SweepRow c;
    c.method = "tnpe(storage-only)";
    c.param = "r=2";
    c.compression_ratio = 0.5;
    rows.push_back(c);

    TmpFile csv{"test_plot.csv"};
    TmpFile dat{"test_plot.csv.dat"};
    emit_plotdata(rows, csv.path);

    std::ifstream is(csv.path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "compression_ratio,error,log10_error,method");
    std::getline(is, line);
    CHECK(line.find("0.25,0.125,") != std::string::npos);
    CHECK(line.find("ttpca") != std::string::npos);
    std::getline(is, line);
    CHECK(line.find("1,0,,knn") != std::string::npos);  // empty log cell for error = 0
    std::getline(is, line);
    CHECK(line.find(",,,") != std::string::npos);  // storage-only: empty error cells

    SUBCASE("empty rows give a header-only file") {
        emit_plotdata({}, csv.path);
        std::ifstream hdr(csv.path);
        std::getline(hdr, line);
        CHECK(line == "compression_ratio,error,log10_error,method");
        CHECK(!std::getline(hdr, line));
    }
}

TEST_CASE("row csv emission round-trips the numbers") {
    std::vector<SweepRow> rows;
    SweepRow a;
    a.method = "pca";
    a.param = "r=3";
    a.compression_ratio = 0.4;
    a.error = 0.05;
    a.recon_error = 0.01;
    a.wall_ms = 12.5;
    rows.push_back(a);
    TmpFile csv{"test_rows.csv"};
    emit_rows_csv(rows, csv.path);
    std::ifstream is(csv.path);
    std::string line;
    std::getline(is, line);
    CHECK(line == "method,param,compression_ratio,error,recon_error,wall_ms");
    std::getline(is, line);
    CHECK(line == "pca,r=3,0.4,0.05,0.01,12.5");
}
