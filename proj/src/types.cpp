#include "opm/types.hpp"

namespace opm {

Json Tolerances::to_json() const {
  return Json{{"sum", sum},         {"zero", zero},
              {"constant", constant}, {"kkt", kkt},
              {"interior", interior}, {"map", map},
              {"entropy", entropy},   {"invariance", invariance},
              {"unique", unique},     {"condition_cap", condition_cap}};
}

void Tolerances::set(const std::string& name, double value) {
  if (!(value > 0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance '" + name + "' must be positive");
  }
  if (name == "sum") sum = value;
  else if (name == "zero") zero = value;
  else if (name == "constant") constant = value;
  else if (name == "kkt") kkt = value;
  else if (name == "interior") interior = value;
  else if (name == "map") map = value;
  else if (name == "entropy") entropy = value;
  else if (name == "invariance") invariance = value;
  else if (name == "unique") unique = value;
  else if (name == "condition_cap") condition_cap = value;
  else throw Error(ErrorCode::InvalidArgument, "unknown tolerance '" + name + "'");
}

Tolerances Tolerances::profile(const std::string& name) {
  Tolerances t;
  if (name.empty() || name == "default") return t;
  if (name == "strict") {
    t.sum = 1e-11;
    t.zero = 1e-12;
    t.constant = 1e-10;
    t.kkt = 1e-11;
    t.map = 1e-11;
    t.entropy = 1e-11;
    t.invariance = 1e-11;
    t.unique = 1e-8;
    return t;
  }
  if (name == "loose") {
    t.sum = 1e-7;
    t.zero = 1e-8;
    t.constant = 1e-6;
    t.kkt = 1e-7;
    t.interior = 1e-6;
    t.map = 1e-7;
    t.entropy = 1e-7;
    t.invariance = 1e-7;
    t.unique = 1e-5;
    return t;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown tolerance profile '" + name + "'");
}

std::string to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::EmptyTest: return "EmptyTest";
    case ErrorCode::StateSumViolation: return "StateSumViolation";
    case ErrorCode::NonSeparating: return "NonSeparating";
    case ErrorCode::UnknownOutcome: return "UnknownOutcome";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::Signaling: return "Signaling";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::UnitMismatch: return "UnitMismatch";
    case ErrorCode::NotFullDimensional: return "NotFullDimensional";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::ConeViolation: return "ConeViolation";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::NonUniformRank: return "NonUniformRank";
    case ErrorCode::NotConstant: return "NotConstant";
    case ErrorCode::PositiveOffDiagonal: return "PositiveOffDiagonal";
    case ErrorCode::UnnormalizedUnit: return "UnnormalizedUnit";
    case ErrorCode::NotMinimizing: return "NotMinimizing";
    case ErrorCode::NotUnital: return "NotUnital";
    case ErrorCode::NotUnique: return "NotUnique";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ConditionalMismatch: return "ConditionalMismatch";
    case ErrorCode::NoCapability: return "NoCapability";
    case ErrorCode::ZeroAttenuation: return "ZeroAttenuation";
    case ErrorCode::MethodDisagreement: return "MethodDisagreement";
    case ErrorCode::NotJordan: return "NotJordan";
    case ErrorCode::NotInterior: return "NotInterior";
    case ErrorCode::NoGroupMatch: return "NoGroupMatch";
    case ErrorCode::NotIsomorphismState: return "NotIsomorphismState";
    case ErrorCode::BadDimension: return "BadDimension";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::NotInOmega: return "NotInOmega";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, Json witness)
    : std::runtime_error(to_string(code) + ": " + message),
      code_(code),
      witness_(std::move(witness)) {}

Json Error::to_json() const {
  return Json{{"error", to_string(code_)}, {"message", what()}, {"witness", witness_}};
}

Json to_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Mat& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

}  // namespace opm
