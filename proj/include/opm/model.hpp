#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "opm/types.hpp"

namespace opm {

/// Outcomes are addressed by their index in TestSpace::outcomes().
using Outcome = int;
/// A test is a sorted list of distinct outcome indices.
using Test = std::vector<Outcome>;
/// A state assigns a probability to every outcome (indexed like outcomes()).
using StateVec = Vec;

class TestSpace {
 public:
  TestSpace() = default;
  /// Validates local finiteness and coverage. Tests are stored in canonical
  /// sorted form; duplicate tests are merged.
  TestSpace(std::vector<std::string> outcomes, const std::vector<std::vector<std::string>>& tests);
  TestSpace(std::vector<std::string> outcomes, std::vector<Test> tests);

  size_t size() const { return outcomes_.size(); }
  const std::vector<std::string>& outcomes() const { return outcomes_; }
  const std::string& name(Outcome x) const;
  Outcome index(const std::string& name) const;
  const std::vector<Test>& tests() const { return tests_; }
  /// Common test cardinality, absent when tests differ in size.
  std::optional<int> rank() const { return rank_; }
  /// Indices of tests containing x.
  const std::vector<int>& tests_containing(Outcome x) const;
  bool contains(int test, Outcome x) const;
  std::vector<std::string> test_names(int test) const;

 private:
  void finish();
  std::vector<std::string> outcomes_;
  std::map<std::string, Outcome> index_;
  std::vector<Test> tests_;
  std::vector<std::vector<int>> containing_;
  std::optional<int> rank_;
};

/// x and y are orthogonal iff they are distinct and share a test.
bool orthogonal(const TestSpace& space, Outcome x, Outcome y);
bool orthogonal(const TestSpace& space, const std::string& x, const std::string& y);

/// Largest deviation of sum_{x in E} alpha(x) from 1 over all tests.
double normalization_defect(const TestSpace& space, const StateVec& alpha);

enum class ModelKind { generic, classical, quantum, spin_factor, square_bit };
std::string to_string(ModelKind kind);
ModelKind parse_kind(const std::string& text);

/// A symmetry group acting on outcomes. Finite groups are kept fully closed
/// (identity first); analytic groups carry only a sampling seed.
struct GroupAction {
  enum class Kind { finite, unitary, orthogonal };
  Kind kind = Kind::finite;
  std::vector<std::vector<Outcome>> elements;  // each maps x -> element[x]
  std::uint64_t seed = 0;
  int base_state = 0;  // index into Model::pure_states

  size_t order() const { return elements.size(); }
};

/// Operator representation of a finite piece of the frame manual.
struct QuantumRep {
  int n = 0;
  std::vector<CVec> outcome_vectors;  // unit vector per outcome
  std::vector<std::vector<Outcome>> frames;
  std::vector<CVec> pure_vectors;  // pure state i is the Gleason state of this vector
};

/// Spin factor data: outcome x is the direction of the yes/no test {x, -x}.
struct SpinRep {
  int d = 0;
  std::vector<Vec> outcome_directions;
  std::vector<Vec> pure_directions;  // pure state alpha_b(x) = (1 + b.x)/2
};

enum class FilterCapability { none, diagonal, congruence, lorentz_boost };

struct Model {
  TestSpace space;
  std::vector<StateVec> pure_states;
  std::optional<GroupAction> group;
  FilterCapability filter = FilterCapability::none;
  ModelKind kind = ModelKind::generic;
  std::shared_ptr<const QuantumRep> quantum;
  std::shared_ptr<const SpinRep> spin;

  bool analytic() const { return kind == ModelKind::quantum || kind == ModelKind::spin_factor; }
};

/// Parsed but unchecked model description (the model-file contents).
struct RawModel {
  std::vector<std::string> outcomes;
  std::vector<std::vector<std::string>> tests;
  std::vector<std::map<std::string, double>> pure_states;
  std::optional<std::vector<std::map<std::string, std::string>>> permutations;
  std::optional<std::string> analytic_group;
  std::optional<std::uint64_t> seed;
  std::optional<int> base_state;
  std::optional<std::string> kind;
};

/// Checks every type invariant; throws EmptyTest, StateSumViolation,
/// NonSeparating, UnknownOutcome or InvalidGroup.
Model validate_model(const RawModel& raw, const Tolerances& tol = {});
/// Re-validates an assembled model (idempotent on valid input).
Model validate_model(const Model& model, const Tolerances& tol = {});
RawModel to_raw(const Model& model);

/// Closes a set of permutations under composition and inverse.
std::vector<std::vector<Outcome>> close_group(const std::vector<std::vector<Outcome>>& generators,
                                              size_t budget = 1000000);
/// (g alpha)(x) = alpha(g^{-1} x).
StateVec act_on_state(const std::vector<Outcome>& g, const StateVec& alpha);

struct BipartiteState {
  Mat table;  // table(x, y) = omega(x, y) on the full X x X grid
  StateVec left_marginal;
  StateVec right_marginal;
  std::vector<std::optional<StateVec>> right_given_left;  // omega_{2|x}
  std::vector<std::optional<StateVec>> left_given_right;  // omega_{1|y}
  double total_probability_residual = 0;                  // worst law-of-total-probability residual
};

/// Computes and checks marginals over every completing test (Signaling,
/// NotNormalized) and verifies the laws of total probability.
BipartiteState marginals_and_conditionals(const Model& model, const Mat& table,
                                          const Tolerances& tol = {});

struct Correlation {
  int left_test = 0;
  int right_test = 0;
  std::vector<Outcome> left;   // outcomes of E in order
  std::vector<Outcome> right;  // f(left[i]) = right[i]
};

/// Finds tests E, F and a bijection f with omega(x, y) = 0 off the graph.
std::optional<Correlation> is_correlating(const Model& model, const BipartiteState& omega,
                                          const Tolerances& tol = {});

}  // namespace opm
