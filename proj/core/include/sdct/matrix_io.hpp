#pragma once

#include <filesystem>
#include <iosfwd>

#include "sdct/model.hpp"

namespace sdct {

/// Binary matrix file: 16-byte header ("SDCT", u32 rows, u32 cols,
/// u32 reserved = 0) followed by rows * cols little-endian float64 values
/// in column-major order.
void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);
void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

/// Plain CSV, one matrix row per line, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);

}  // namespace sdct
