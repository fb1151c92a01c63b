#pragma once

#include <string>
#include <vector>

#include "opm/cone.hpp"
#include "opm/model.hpp"

namespace opm {

/// Shannon entropy in bits; the probabilities are sorted before summing so
/// that permuted distributions give bit-identical results.
double shannon_bits(std::vector<double> p);

struct MeasurementEntropy {
  double value = 0;
  int test = -1;              // argmin among the listed tests
  double listed_minimum = 0;  // minimum over the listed tests
  bool analytic = false;      // value from the spectrum (quantum / spin)
  Json to_json(const TestSpace& space) const;
};

/// min over tests E of the Shannon entropy of alpha restricted to E. For
/// quantum models the value is the von Neumann entropy (attained on the
/// eigenframe) and the listed tests only corroborate it from above.
MeasurementEntropy measurement_entropy(const Model& model, const LinearRep& rep, const StateVec& alpha,
                                       const Tolerances& tol = {});

struct MixingEntropy {
  double value = 0;
  std::string bound = "exact";  // exact, upper bound, analytic
  std::vector<int> support;     // pure-state indices
  std::vector<double> weights;
  long supports_checked = 0;
  Json to_json() const;
};

/// Minimal Shannon entropy of the weights of a convex decomposition of alpha
/// into pure states. Polytopes: exhaustive over the vertices of the weight
/// polytope (supports with independent states); labelled "upper bound" when
/// the budget runs out. Throws NotInOmega with a Farkas certificate.
MixingEntropy mixing_entropy(const Model& model, const LinearRep& rep, const StateVec& alpha,
                             const Tolerances& tol = {}, long budget = 200000);

struct EntropyReport {
  MeasurementEntropy h;
  MixingEntropy s;
  double gap = 0;
  bool monoentropic = false;
  Json to_json(const TestSpace& space) const;
};
EntropyReport entropy_report(const Model& model, const LinearRep& rep, const StateVec& alpha,
                             const Tolerances& tol = {});

struct MonoentropyReport {
  std::vector<EntropyReport> states;
  double worst_gap = 0;
  bool monoentropic = false;
  bool zero_entropy_chain = true;  // H = 0 iff some alpha(x) = 1, and H = 0 implies S = 0
  Json chain_witness;
  Json to_json(const TestSpace& space) const;
};
MonoentropyReport monoentropy_check(const Model& model, const LinearRep& rep, const std::vector<StateVec>& states,
                                    const Tolerances& tol = {});

}  // namespace opm
