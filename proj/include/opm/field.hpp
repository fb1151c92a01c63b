#pragma once

#include <cmath>

#include "opm/rational.hpp"

namespace opm {

/// Sign and conversion policy used by the templated exact/floating kernels.
template <class T>
struct Field;

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static int sign(const Rational& x) { return sgn(x); }
  static double to_double(const Rational& x) { return x.get_d(); }
};

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static constexpr double eps = 1e-11;
  static int sign(double x) { return x > eps ? 1 : (x < -eps ? -1 : 0); }
  static double to_double(double x) { return x; }
};

}  // namespace opm
