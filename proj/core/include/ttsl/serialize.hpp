#pragma once

#include <iosfwd>
#include <string>

#include "ttsl/subspace.hpp"

namespace ttsl {

/// TTSS model stream: magic "TTSS", u32 version=1, u32 n, (n+1) u32 ranks,
/// n u32 dims, cores in order as f64 arrays (first-index-fastest), u8
/// orthonormal flag. All integers and floats little-endian.
void write_subspace(std::ostream& os, const TTSubspace& s);
TTSubspace read_subspace(std::istream& is);

void save_subspace(const std::string& path, const TTSubspace& s);
TTSubspace load_subspace(const std::string& path);

// Raw little-endian primitives shared by the model container formats.
namespace wire {
void put_u8(std::ostream& os, uint8_t v);
void put_u32(std::ostream& os, uint32_t v);
void put_u64(std::ostream& os, uint64_t v);
void put_f64(std::ostream& os, const double* data, size_t count);
uint8_t get_u8(std::istream& is);
uint32_t get_u32(std::istream& is);
uint64_t get_u64(std::istream& is);
void get_f64(std::istream& is, double* data, size_t count);
void put_matrix(std::ostream& os, const Matrix& m);
Matrix get_matrix(std::istream& is);
} // namespace wire

} // namespace ttsl
