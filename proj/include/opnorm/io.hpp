#ifndef OPNORM_IO_HPP
#define OPNORM_IO_HPP

#include <string>

#include "opnorm/linalg.hpp"
#include "opnorm/reduction.hpp"

namespace opnorm::io {

enum class MatrixFormat { matrix_market, csv, binary };

/// Chooses by extension: .mtx/.mm -> Matrix Market, .csv -> CSV,
/// .bin/.opnb -> binary. Anything else parses as Matrix Market.
MatrixFormat format_from_path(const std::string& path);

/// Reads a dense matrix. Matrix Market supports both the array and the
/// coordinate banner (coordinate entries land in a dense zero matrix).
/// Malformed content raises parse_error with the offending line number.
Matrix read_matrix(const std::string& path);
Matrix read_matrix(const std::string& path, MatrixFormat fmt);

/// Writes a matrix. Matrix Market uses the array banner with full-precision
/// column-major entries; binary is the OPNB record below.
void write_matrix(const std::string& path, const Matrix& M);
void write_matrix(const std::string& path, const Matrix& M, MatrixFormat fmt);

// Binary layout (little endian): magic "OPNB", u32 version = 1, u64 rows,
// u64 cols, then rows*cols f64 values in row-major order.

/// Instance file: header line `labelcover V E R L`, then one line per edge
/// `u v  pi_u(1..R)  pi_v(1..R)` with vertices 0-based and map values 1-based.
reduction::LabelCoverInstance read_instance(const std::string& path);
void write_instance(const std::string& path, const reduction::LabelCoverInstance& inst);

/// Labeling file: V whitespace-separated integers in 1..R.
reduction::Labeling read_labeling(const std::string& path, int num_vertices);
void write_labeling(const std::string& path, const reduction::Labeling& l);

}  // namespace opnorm::io

#endif
