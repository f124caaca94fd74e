#include "lse/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace lse {

namespace {

[[noreturn]] void fail(const std::string& name, long line, const std::string& what) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + what);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Next non-comment, non-blank line; returns false at end of input.
bool next_content_line(std::istream& in, std::string& line, long& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const auto pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) continue;
    if (line[pos] == '%') continue;
    return true;
  }
  return false;
}

double parse_value(const std::string& token, const std::string& name, long lineno) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) fail(name, lineno, "bad numeric value '" + token + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(name, lineno, "bad numeric value '" + token + "'");
  } catch (const std::out_of_range&) {
    fail(name, lineno, "numeric value out of range '" + token + "'");
  }
}

}  // namespace

Matrix<double> read_matrix_market(std::istream& in, const std::string& name) {
  long lineno = 0;
  std::string line;
  if (!std::getline(in, line)) fail(name, 1, "empty file");
  ++lineno;
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lowercase(object) != "matrix" || header.fail()) {
    fail(name, lineno, "malformed MatrixMarket header");
  }
  format = lowercase(format);
  field = lowercase(field);
  symmetry = lowercase(symmetry);
  if (format != "array" && format != "coordinate") {
    fail(name, lineno, "unsupported format '" + format + "' (need array or coordinate)");
  }
  if (field != "real") {
    fail(name, lineno, "unsupported field '" + field + "' (need real)");
  }
  if (symmetry != "general") {
    fail(name, lineno, "unsupported symmetry '" + symmetry + "' (need general)");
  }

  if (!next_content_line(in, line, lineno)) fail(name, lineno + 1, "missing size line");
  std::istringstream size(line);
  long rows = 0, cols = 0, nnz = 0;
  size >> rows >> cols;
  if (format == "coordinate") size >> nnz;
  if (size.fail() || rows < 0 || cols < 0 || nnz < 0) {
    fail(name, lineno, "malformed size line");
  }
  std::string trailing;
  if (size >> trailing) fail(name, lineno, "trailing tokens on size line");

  Matrix<double> out = Matrix<double>::Zero(rows, cols);
  if (format == "array") {
    long count = 0;
    const long total = rows * cols;
    while (count < total) {
      if (!next_content_line(in, line, lineno)) {
        fail(name, lineno + 1, "expected " + std::to_string(total) + " entries, got " +
                                   std::to_string(count));
      }
      std::istringstream values(line);
      std::string token;
      while (values >> token) {
        if (count >= total) fail(name, lineno, "more entries than the size line declares");
        const double v = parse_value(token, name, lineno);
        out(count % rows, count / rows) = v;  // column-major entry order
        ++count;
      }
    }
    if (next_content_line(in, line, lineno)) {
      fail(name, lineno, "more entries than the size line declares");
    }
  } else {
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen(rows, cols);
    seen.setConstant(false);
    for (long k = 0; k < nnz; ++k) {
      if (!next_content_line(in, line, lineno)) {
        fail(name, lineno + 1, "expected " + std::to_string(nnz) + " entries, got " +
                                   std::to_string(k));
      }
      std::istringstream entry(line);
      long i = 0, j = 0;
      std::string token;
      entry >> i >> j >> token;
      if (entry.fail()) fail(name, lineno, "malformed coordinate entry");
      if (entry >> trailing) fail(name, lineno, "trailing tokens on coordinate entry");
      if (i < 1 || i > rows || j < 1 || j > cols) {
        fail(name, lineno, "index (" + std::to_string(i) + "," + std::to_string(j) +
                               ") outside " + std::to_string(rows) + "x" +
                               std::to_string(cols));
      }
      if (seen(i - 1, j - 1)) {
        fail(name, lineno, "duplicate entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ")");
      }
      seen(i - 1, j - 1) = true;
      out(i - 1, j - 1) = parse_value(token, name, lineno);
    }
    if (next_content_line(in, line, lineno)) {
      fail(name, lineno, "more entries than the size line declares");
    }
  }
  return out;
}

Matrix<double> read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_matrix_market(in, path);
}

Vector<double> read_vector_market(std::istream& in, const std::string& name) {
  Matrix<double> m = read_matrix_market(in, name);
  if (m.cols() != 1) {
    throw ParseError(name + ": expected a single-column vector, got " +
                     std::to_string(m.cols()) + " columns");
  }
  return m.col(0);
}

Vector<double> read_vector_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  return read_vector_market(in, path);
}

void write_matrix_market(std::ostream& out, const Matrix<double>& m) {
  out << "%%MatrixMarket matrix array real general\n";
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << buf << "\n";
    }
  }
}

void write_matrix_market(const std::string& path, const Matrix<double>& m) {
  std::ofstream out(path);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  write_matrix_market(out, m);
}

}  // namespace lse
