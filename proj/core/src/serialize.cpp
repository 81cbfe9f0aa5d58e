#include "ttsl/serialize.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace ttsl {

static_assert(std::endian::native == std::endian::little,
              "wire format assumes a little-endian host");

namespace wire {

void put_u8(std::ostream& os, uint8_t v) { os.put(static_cast<char>(v)); }

void put_u32(std::ostream& os, uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_u64(std::ostream& os, uint64_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_f64(std::ostream& os, const double* data, size_t count) {
    os.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

uint8_t get_u8(std::istream& is) {
    char c;
    if (!is.get(c)) throw DataError("truncated model stream");
    return static_cast<uint8_t>(c);
}

uint32_t get_u32(std::istream& is) {
    uint32_t v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(v))) throw DataError("truncated model stream");
    return v;
}

uint64_t get_u64(std::istream& is) {
    uint64_t v;
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(v))) throw DataError("truncated model stream");
    return v;
}

void get_f64(std::istream& is, double* data, size_t count) {
    if (!is.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double))))
        throw DataError("truncated model stream");
}

void put_matrix(std::ostream& os, const Matrix& m) {
    put_u32(os, static_cast<uint32_t>(m.rows()));
    put_u32(os, static_cast<uint32_t>(m.cols()));
    put_f64(os, m.data(), static_cast<size_t>(m.size()));
}

Matrix get_matrix(std::istream& is) {
    const uint32_t rows = get_u32(is);
    const uint32_t cols = get_u32(is);
    Matrix m(rows, cols);
    get_f64(is, m.data(), static_cast<size_t>(m.size()));
    return m;
}

} // namespace wire

void write_subspace(std::ostream& os, const TTSubspace& s) {
    os.write("TTSS", 4);
    wire::put_u32(os, 1);
    const auto ranks = s.ranks();
    const auto dims = s.dims();
    wire::put_u32(os, static_cast<uint32_t>(s.order()));
    for (Index r : ranks) wire::put_u32(os, static_cast<uint32_t>(r));
    for (Index d : dims) wire::put_u32(os, static_cast<uint32_t>(d));
    for (const auto& core : s.cores())
        wire::put_f64(os, core.data().data(), static_cast<size_t>(core.size()));
    wire::put_u8(os, s.orthonormal() ? 1 : 0);
}

TTSubspace read_subspace(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "TTSS", 4) != 0)
        throw DataError("bad magic: not a TTSS model stream");
    const uint32_t version = wire::get_u32(is);
    if (version != 1) throw DataError("unsupported TTSS version");
    const uint32_t n = wire::get_u32(is);
    if (n == 0) throw DataError("TTSS model with zero cores");
    std::vector<Index> ranks(n + 1);
    std::vector<Index> dims(n);
    for (auto& r : ranks) r = wire::get_u32(is);
    for (auto& d : dims) d = wire::get_u32(is);
    if (ranks[0] != 1) throw DataError("TTSS rank chain must start at 1");
    std::vector<DenseTensor> cores;
    cores.reserve(n);
    for (uint32_t i = 0; i < n; ++i) {
        if (dims[i] < 1 || ranks[i + 1] < 1) throw DataError("TTSS non-positive dim or rank");
        Vector data(ranks[i] * dims[i] * ranks[i + 1]);
        wire::get_f64(is, data.data(), static_cast<size_t>(data.size()));
        cores.emplace_back(std::vector<Index>{ranks[i], dims[i], ranks[i + 1]}, std::move(data));
    }
    const bool orthonormal = wire::get_u8(is) != 0;
    return TTSubspace(std::move(cores), orthonormal);
}

void save_subspace(const std::string& path, const TTSubspace& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for writing: " + path);
    write_subspace(os, s);
}

TTSubspace load_subspace(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open: " + path);
    return read_subspace(is);
}

} // namespace ttsl
