#pragma once

//
// ... Standard header files
//
#include <cstddef>
#include <stdexcept>
#include <string>

//
// ... External header files
//
#include <Eigen/Core>

namespace ifkrylov {

  using Index = Eigen::Index;
  using Vector = Eigen::VectorXd;
  using Matrix = Eigen::MatrixXd;

  /// Error raised for contract violations and numerical breakdown.
  class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
  };

  class Dimension_error : public Error {
  public:
    using Error::Error;
  };

  class Not_spd_error : public Error {
  public:
    using Error::Error;
  };

  inline void
  require_dimension(Index expected, Index actual, char const* what) {
    if (expected != actual) {
      throw Dimension_error(std::string(what) + ": expected dimension " +
                            std::to_string(expected) + ", got " +
                            std::to_string(actual));
    }
  }

} // namespace ifkrylov
