#pragma once

// Eigen support for khier::Real. Boost 1.74 ships NumTraits without
// infinity()/quiet_NaN(), which the eigensolvers need.

#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include "khier/scalar.hpp"

namespace Eigen {
template <>
struct NumTraits<khier::Real> : GenericNumTraits<khier::Real> {
  using Real = khier::Real;
  using NonInteger = khier::Real;
  using Nested = khier::Real;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 4,
    MulCost = 8
  };
  static Real epsilon() { return std::numeric_limits<Real>::epsilon(); }
  static Real dummy_precision() { return 1000 * epsilon(); }
  static Real highest() { return (std::numeric_limits<Real>::max)(); }
  static Real lowest() { return -(std::numeric_limits<Real>::max)(); }
  static Real infinity() { return std::numeric_limits<Real>::infinity(); }
  static Real quiet_NaN() { return std::numeric_limits<Real>::quiet_NaN(); }
  static int digits10() { return std::numeric_limits<Real>::digits10; }
};
}  // namespace Eigen

namespace khier {
using RealMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using RealVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
}  // namespace khier
