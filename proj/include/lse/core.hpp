#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>

namespace lse {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Thrown when an input has incompatible or inadmissible dimensions.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a triangular or square solve meets a numerically singular matrix.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when one of the problem rank conditions fails: rank(C) = p or
// rank([A; C]) = n.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class Scalar>
constexpr Scalar eps() {
  return std::numeric_limits<Scalar>::epsilon();
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* name) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(name) + " has non-finite entries");
  }
}

}  // namespace lse
