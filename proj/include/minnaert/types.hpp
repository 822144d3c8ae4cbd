#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace minnaert {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// Raised when a factorization or solve trips the conditioning guard.
// The CLI maps it to exit code 2.
class NumericalGuard : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments or malformed inputs.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace minnaert
