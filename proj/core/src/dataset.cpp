#include "ttsl/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace ttsl {

namespace {

uint32_t read_be_u32(std::istream& is, const std::string& path) {
    unsigned char b[4];
    if (!is.read(reinterpret_cast<char*>(b), 4)) throw DataError("truncated IDX header: " + path);
    return (uint32_t(b[0]) << 24) | (uint32_t(b[1]) << 16) | (uint32_t(b[2]) << 8) | uint32_t(b[3]);
}

Index dims_product(const std::vector<Index>& dims) {
    Index p = 1;
    for (Index d : dims) p *= d;
    return p;
}

LabeledDataset take_columns(const LabeledDataset& ds, const std::vector<Index>& idx) {
    LabeledDataset out;
    out.dims = ds.dims;
    out.data.resize(ds.dim(), static_cast<Index>(idx.size()));
    out.labels.resize(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) {
        out.data.col(static_cast<Index>(i)) = ds.data.col(idx[i]);
        out.labels[i] = ds.labels[static_cast<size_t>(idx[i])];
    }
    return out;
}

} // namespace

DenseTensor LabeledDataset::sample(Index i) const {
    if (i < 0 || i >= count()) throw DataError("sample index out of range");
    return DenseTensor(dims, data.col(i));
}

int num_classes(const LabeledDataset& ds) {
    if (ds.labels.empty()) throw DataError("dataset has no labels");
    const int c = *std::max_element(ds.labels.begin(), ds.labels.end()) + 1;
    std::vector<bool> seen(static_cast<size_t>(c), false);
    for (int l : ds.labels) {
        if (l < 0) throw DataError("negative label");
        seen[static_cast<size_t>(l)] = true;
    }
    for (bool s : seen)
        if (!s) throw DataError("labels are not dense 0..C-1");
    return c;
}

LabeledDataset load_idx(const std::string& images_path, const std::string& labels_path,
                        std::vector<Index> dims) {
    std::ifstream imgs(images_path, std::ios::binary);
    if (!imgs) throw DataError("cannot open: " + images_path);
    if (read_be_u32(imgs, images_path) != 0x00000803u)
        throw DataError("bad IDX image magic in " + images_path);
    const uint32_t n = read_be_u32(imgs, images_path);
    const uint32_t rows = read_be_u32(imgs, images_path);
    const uint32_t cols = read_be_u32(imgs, images_path);
    const Index pixels = static_cast<Index>(rows) * static_cast<Index>(cols);

    if (dims.empty()) dims = {static_cast<Index>(rows), static_cast<Index>(cols)};
    if (dims_product(dims) != pixels)
        throw DataError("reshape dims do not match IDX image size");

    LabeledDataset ds;
    ds.dims = std::move(dims);
    ds.data.resize(pixels, static_cast<Index>(n));
    std::vector<unsigned char> buf(static_cast<size_t>(pixels));
    for (uint32_t i = 0; i < n; ++i) {
        if (!imgs.read(reinterpret_cast<char*>(buf.data()), pixels))
            throw DataError("truncated IDX image payload in " + images_path);
        for (Index p = 0; p < pixels; ++p)
            ds.data(p, static_cast<Index>(i)) = static_cast<double>(buf[static_cast<size_t>(p)]);
    }

    std::ifstream labs(labels_path, std::ios::binary);
    if (!labs) throw DataError("cannot open: " + labels_path);
    if (read_be_u32(labs, labels_path) != 0x00000801u)
        throw DataError("bad IDX label magic in " + labels_path);
    const uint32_t nl = read_be_u32(labs, labels_path);
    if (nl != n) throw DataError("IDX image/label count mismatch");
    ds.labels.resize(n);
    for (uint32_t i = 0; i < n; ++i) {
        char c;
        if (!labs.get(c)) throw DataError("truncated IDX label payload in " + labels_path);
        ds.labels[i] = static_cast<unsigned char>(c);
    }
    return ds;
}

LabeledDataset load_csv(const std::string& path, std::vector<Index> dims) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open: " + path);
    std::string line;
    if (!std::getline(is, line) || line.rfind("label", 0) != 0)
        throw DataError("missing CSV header 'label,x0,...' in " + path);

    std::vector<std::vector<double>> cols;
    std::vector<int> labels;
    size_t width = 0;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        bool first = true;
        while (std::getline(ss, cell, ',')) {
            size_t pos = 0;
            double v;
            try {
                v = std::stod(cell, &pos);
            } catch (const std::exception&) {
                throw DataError(path + ":" + std::to_string(lineno) + ": non-numeric cell '" + cell + "'");
            }
            if (pos != cell.size())
                throw DataError(path + ":" + std::to_string(lineno) + ": non-numeric cell '" + cell + "'");
            if (first) {
                labels.push_back(static_cast<int>(v));
                first = false;
            } else {
                row.push_back(v);
            }
        }
        if (width == 0) width = row.size();
        if (row.size() != width || row.empty())
            throw DataError(path + ":" + std::to_string(lineno) + ": ragged row");
        cols.push_back(std::move(row));
    }
    if (cols.empty()) throw DataError("empty CSV dataset: " + path);

    LabeledDataset ds;
    ds.dims = dims.empty() ? std::vector<Index>{static_cast<Index>(width)} : std::move(dims);
    if (dims_product(ds.dims) != static_cast<Index>(width))
        throw DataError("reshape dims do not match CSV sample width");
    ds.data.resize(static_cast<Index>(width), static_cast<Index>(cols.size()));
    for (size_t i = 0; i < cols.size(); ++i)
        for (size_t p = 0; p < width; ++p)
            ds.data(static_cast<Index>(p), static_cast<Index>(i)) = cols[i][p];
    ds.labels = std::move(labels);
    return ds;
}

void save_csv(const std::string& path, const LabeledDataset& ds) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open for writing: " + path);
    os << "label";
    for (Index p = 0; p < ds.dim(); ++p) os << ",x" << p;
    os << "\n";
    os.precision(17);
    for (Index i = 0; i < ds.count(); ++i) {
        os << ds.labels[static_cast<size_t>(i)];
        for (Index p = 0; p < ds.dim(); ++p) os << "," << ds.data(p, i);
        os << "\n";
    }
}

LabeledDataset add_noise(const LabeledDataset& ds, double sigma, uint64_t seed) {
    if (sigma == 0.0) return ds;
    if (sigma < 0.0) throw DataError("noise sigma must be >= 0");
    LabeledDataset out = ds;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (Index i = 0; i < out.count(); ++i)
        for (Index p = 0; p < out.dim(); ++p) out.data(p, i) += gauss(rng);
    return out;
}

LabeledDataset filter_classes(const LabeledDataset& ds, const std::vector<int>& classes,
                              Index per_class_cap, uint64_t seed) {
    std::vector<Index> order(static_cast<size_t>(ds.count()));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Index> keep;
    std::vector<Index> taken(classes.size(), 0);
    for (Index i : order) {
        const int l = ds.labels[static_cast<size_t>(i)];
        const auto it = std::find(classes.begin(), classes.end(), l);
        if (it == classes.end()) continue;
        const size_t c = static_cast<size_t>(it - classes.begin());
        if (per_class_cap > 0 && taken[c] >= per_class_cap) continue;
        ++taken[c];
        keep.push_back(i);
    }
    if (keep.empty()) throw DataError("class filter removed every sample");
    LabeledDataset out = take_columns(ds, keep);
    for (auto& l : out.labels) {
        const auto it = std::find(classes.begin(), classes.end(), l);
        l = static_cast<int>(it - classes.begin());
    }
    return out;
}

std::pair<LabeledDataset, LabeledDataset> split_dataset(const LabeledDataset& ds,
                                                        double train_fraction, uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw DataError("train fraction must lie in (0,1)");
    std::vector<Index> order(static_cast<size_t>(ds.count()));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    const auto cut = static_cast<size_t>(
        std::min<double>(std::ceil(train_fraction * static_cast<double>(ds.count())),
                         static_cast<double>(ds.count() - 1)));
    std::vector<Index> tr(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(cut));
    std::vector<Index> te(order.begin() + static_cast<std::ptrdiff_t>(cut), order.end());
    return {take_columns(ds, tr), take_columns(ds, te)};
}

} // namespace ttsl
