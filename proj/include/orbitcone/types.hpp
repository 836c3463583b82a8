#ifndef ORBITCONE_TYPES_HPP
#define ORBITCONE_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace orbitcone {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Base class for all errors raised by the toolkit.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct AlgebraError : Error {
  using Error::Error;
};

struct UnclassifiableError : AlgebraError {
  using AlgebraError::AlgebraError;
};

struct ConeError : Error {
  using Error::Error;
};

struct QuadratureError : Error {
  using Error::Error;
};

}  // namespace orbitcone

#endif
