#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "json.hpp"

namespace opm {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;
using Rational = mpq_class;
using Json = nlohmann::json;

/// Numerical slack used throughout. Every verdict that compares floating
/// point values against an exact identity reads its threshold from here.
struct Tolerances {
  double sum = 1e-9;        // normalization and marginal checks
  double zero = 1e-10;      // support / membership checks
  double constant = 1e-8;   // "constant across the orbit" checks
  double kkt = 1e-9;        // projection optimality and orthogonality
  double interior = 1e-7;   // strict interiority
  double map = 1e-9;        // image of a certified map
  double entropy = 1e-9;    // |H - S|
  double invariance = 1e-9; // exact (finite group) invariance
  double unique = 1e-6;     // agreement of two independent projections
  double condition_cap = 1e10;

  Json to_json() const;
  /// Applies "name=value" style overrides; unknown names throw.
  void set(const std::string& name, double value);
  /// Named profiles: "default", "strict", "loose".
  static Tolerances profile(const std::string& name);
};

enum class ErrorCode {
  ParseError,
  IoError,
  EmptyTest,
  StateSumViolation,
  NonSeparating,
  UnknownOutcome,
  UnknownField,
  InvalidGroup,
  Signaling,
  NotNormalized,
  UnitMismatch,
  NotFullDimensional,
  NoConvergence,
  NotInvertible,
  ConeViolation,
  TooLarge,
  Degenerate,
  NonUniformRank,
  NotConstant,
  PositiveOffDiagonal,
  UnnormalizedUnit,
  NotMinimizing,
  NotUnital,
  NotUnique,
  Infeasible,
  ConditionalMismatch,
  NoCapability,
  ZeroAttenuation,
  MethodDisagreement,
  NotJordan,
  NotInterior,
  NoGroupMatch,
  NotIsomorphismState,
  BadDimension,
  NotAFrame,
  NotInOmega,
  InvalidArgument,
};

std::string to_string(ErrorCode code);

/// The single exception type of the library. `witness()` carries whatever
/// evidence the failing check produced (offending pair, two states, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, Json witness = Json::object());

  ErrorCode code() const { return code_; }
  const Json& witness() const { return witness_; }
  Json to_json() const;

 private:
  ErrorCode code_;
  Json witness_;
};

Json to_json(const Vec& v);
Json to_json(const Mat& m);

}  // namespace opm
