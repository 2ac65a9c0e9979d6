#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ginv/dense.hpp"
#include "ginv/instance.hpp"

namespace ginv {

enum class MatrixMarketFormat { array, coordinate };

struct MatrixFile {
  DenseMatrix matrix;
  // Present when the file carries a `%ginv ...` comment line.
  std::optional<InstanceSpec> spec;
};

// Values are written with 17 significant digits so a read-back is exact.
void write_matrix_market(std::ostream& out, const DenseMatrix& a, MatrixMarketFormat format,
                         const InstanceSpec* spec = nullptr);
void write_matrix_market(const std::string& path, const DenseMatrix& a, MatrixMarketFormat format,
                         const InstanceSpec* spec = nullptr);

// Accepts array and coordinate files with real/integer fields and
// general/symmetric/skew-symmetric qualifiers. Throws ParseError, IoError.
MatrixFile read_matrix_market(std::istream& in);
MatrixFile read_matrix_market(const std::string& path);

std::string spec_comment(const InstanceSpec& spec);
std::optional<InstanceSpec> parse_spec_comment(const std::string& line);

}  // namespace ginv
