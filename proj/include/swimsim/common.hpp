#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace swimsim {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

// Error hierarchy. The C API maps each class onto a status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad geometry or parameters passed to a library function.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Singular systems, degenerate segments, failed residual checks.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

const char* version() noexcept;

}  // namespace swimsim
