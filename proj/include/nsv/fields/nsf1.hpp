#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "nsv/fields/field.hpp"

namespace nsv {

// NSF1 binary field dump, all integers and floats little-endian:
//
//   "NSF1" | u32 N | u32 cells[N] | u8 layout | u8 domain | f64 lengths[N]
//   | f64 values, component 0 first, each row-major (axis 0 slowest)
//
// layout: 0 collocated, 1 staggered_mac. domain: 0 periodic torus,
// 1 bounded box. Collocated components on a box are node-centred; staggered
// component d has cells[d]+1 samples along d and cells[e] along e != d.
void write_nsf1(std::ostream& out, const VectorField& v);
void write_nsf1(const std::filesystem::path& path, const VectorField& v);

// Throws FormatError on wrong magic, bad tags, invalid grid or truncation.
VectorField read_nsf1(std::istream& in);
VectorField read_nsf1(const std::filesystem::path& path);

}  // namespace nsv
