#pragma once

#include <string>

#include "cnls/grid.hpp"

namespace cnls {

// Field snapshot CSV: header x,re,im (xi,re,im for frequency fields).
void write_field_csv(const Field& f, double t, const std::string& path);

// Little-endian binary snapshot.
// Header: u64 n, f64 L, f64 t, u8 space (0 physical, 1 frequency).
// Payload: n interleaved re/im f64 pairs.
void write_field_binary(const Field& f, double t, const std::string& path);

struct BinarySnapshot {
    Field field;
    double t = 0.0;
};

BinarySnapshot read_field_binary(const std::string& path);

} // namespace cnls
