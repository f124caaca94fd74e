#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "lse/core.hpp"

namespace lse {

// Thrown on malformed MatrixMarket input; the message carries the source name
// and 1-based line number.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads a dense or coordinate MatrixMarket file (real field, general
// symmetry). Coordinate entries not listed are zero; duplicate coordinate
// entries are rejected.
Matrix<double> read_matrix_market(std::istream& in, const std::string& name);
Matrix<double> read_matrix_market(const std::string& path);

// As read_matrix_market, then checks for exactly one column.
Vector<double> read_vector_market(std::istream& in, const std::string& name);
Vector<double> read_vector_market(const std::string& path);

// Writes in array format with 17 significant digits, enough for an exact
// double round-trip.
void write_matrix_market(std::ostream& out, const Matrix<double>& m);
void write_matrix_market(const std::string& path, const Matrix<double>& m);

}  // namespace lse
