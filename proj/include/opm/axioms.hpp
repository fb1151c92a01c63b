#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "opm/cone.hpp"
#include "opm/embedding.hpp"
#include "opm/model.hpp"
#include "opm/symmetry.hpp"

namespace opm {

/// The states eps_x, one per outcome, each the unique state with eps_x(x) = 1.
struct SharpFamily {
  std::vector<StateVec> eps;    // outcome values
  std::vector<Vec> eps_coords;  // V coordinates
  std::vector<int> pure_index;  // index among the pure states (-1 when analytic)
  bool analytic = false;
  Json to_json(const TestSpace& space) const;
};

/// Face {alpha in Omega : alpha(x) = 1} for every outcome. Throws NotUnital
/// when a face is empty and NotUnique (two-state witness) when it is not a
/// single vertex.
SharpFamily check_sharpness(const Model& model, const LinearRep& rep, const Tolerances& tol = {});

/// A correlating non-signaling state whose left marginal is a given state.
/// For quantum and spin models the returned model may carry extra frames
/// (the eigenframe and its complex conjugate) or directions.
struct Dilation {
  Model model;
  BipartiteState omega;
  Correlation correlation;
  bool exact = false;
  std::string method;
  long lp_solves = 0;
  Json to_json() const;
};

/// Searches test pairs (E, F) and bijections f : E -> F in lexicographic
/// order for a dilation supported on the graph of f inside E x F. Finite
/// models solve a linear feasibility problem per candidate (exact rational
/// arithmetic when the data rationalize); quantum models use the Schmidt
/// purification and spin factors the two-point spectral mixture.
Dilation find_correlating_dilation(const Model& model, const LinearRep& rep, const StateVec& alpha,
                                   const Tolerances& tol = {}, long max_solves = 5000);

struct SpectralDecomposition {
  Model model;  // possibly extended with new frames / directions
  LinearRep rep;
  SharpFamily sharp;
  int test = 0;
  std::vector<Outcome> outcomes;
  std::vector<double> weights;  // mu(x) for x in outcomes
  double mass = 0;              // <u, mu>
  double reconstruction_residual = 0;
  double conditional_residual = 0;
  Dilation dilation;
  Json to_json() const;
};

/// mu = sum_{x in E} mu(x) eps_x for a test E read off a correlating
/// dilation of mu / <u, mu>. Throws ConditionalMismatch when a conditional
/// of the dilation differs from the sharp state of its partner outcome.
SpectralDecomposition spectral_decompose(const Model& model, const LinearRep& rep, const SharpFamily& sharp,
                                         const Vec& mu, const Tolerances& tol = {});

/// Order automorphism of V* with T(x) = f(x) x for the outcomes x of a test.
/// Throws NoCapability for models without a filter family and
/// ZeroAttenuation when some f(x) <= 0.
ConeMap make_filter(const Model& model, const LinearRep& rep, const std::vector<Outcome>& test,
                    const std::vector<double>& f, const Tolerances& tol = {});

/// Euclidean form in the natural coordinates of the model: delta coordinates
/// for polytopes, the trace form for quantum models, the Lorentz form for
/// spin factors and the (t, x, y) frame of the square bit.
InnerProduct standard_inner_product(const Model& model, const LinearRep& rep, const Tolerances& tol = {});

struct JordanDecomposition {
  Vec plus;
  Vec minus;
  double pairing = 0;     // <plus, minus>
  double difference = 0;  // distance to the second solver's answer
  bool unique = false;
  Json to_json() const;
};

/// a = plus - minus with plus, minus in the cone and <plus, minus> = 0.
/// Throws NotJordan when the projection residual leaves the cone.
JordanDecomposition orthogonal_jordan_decompose(const Vec& a, const Cone& cone, const InnerProduct& ip,
                                                const Tolerances& tol = {});

struct MethodVerdict {
  std::string status = "not_checked";  // holds, fails, not_checked
  Json evidence = Json::object();
  bool ran() const { return status != "not_checked"; }
};

struct SelfDualityEvidence {
  MethodVerdict dual_cone;     // the dual cone equals the cone
  MethodVerdict pure_states;   // pure states are outcome states and lie in the ip image of the cone
  MethodVerdict jordan;        // orthogonal Jordan decompositions exist on a probe set
  bool self_dual = false;
  Json to_json() const;
};

/// Runs the three self-duality checks on the effect cone. The pure-state
/// method needs a minimizing ip and an embedding; pass nullptr to skip it.
/// Throws MethodDisagreement when two methods that ran disagree.
SelfDualityEvidence certify_self_duality(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                                         const EmbeddingResult* emb, const Tolerances& tol = {},
                                         std::uint64_t seed = 0x5eed);

struct HomogeneityResult {
  ConeMap map;
  Model model;  // model after spectral decompositions extended it
  std::vector<Outcome> from_test;
  std::vector<Outcome> to_test;
  std::vector<double> t;  // t(x) = b(gx) / a(x)
  double t_max = 0;
  double residual = 0;    // |T a - b|
  Json to_json(const TestSpace& space) const;
};

/// Order automorphism of V* sending the interior effect a to b, built as
/// t_max * g o phi where phi is the filter with factors t / t_max.
HomogeneityResult homogeneity_map(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                                  const SharpFamily& sharp, const Vec& a, const Vec& b,
                                  const Tolerances& tol = {});

struct IsomorphismCheck {
  bool holds = false;
  Mat w;  // omega(x, y) = x^T W y
  double condition = 0;
  double fit_residual = 0;
  Json diagnostics = Json::object();
  Json to_json() const;
};

/// True iff y -> omega(., y) is an order isomorphism V*_+ -> V_+.
IsomorphismCheck is_isomorphism_state(const Model& model, const LinearRep& rep, const Mat& table,
                                      const Tolerances& tol = {});

/// Order automorphism of V taking the left marginal of omega_a to that of
/// omega_b. Throws NotIsomorphismState.
ConeMap homogeneity_via_steering(const Model& model, const LinearRep& rep, const Mat& omega_a,
                                 const Mat& omega_b, const Tolerances& tol = {});

/// Seeded states in V coordinates: random density matrices (quantum), random
/// points of the ball (spin factor) or random mixtures of pure states.
std::vector<Vec> sample_state_coords(const Model& model, const LinearRep& rep, int count, std::uint64_t seed);

/// The first candidate inner product (canonical, then the trace / Lorentz
/// form for quantum / spin models) that is minimizing and embeds the
/// outcomes inside the effect cone.
struct WorkingInnerProduct {
  bool found = false;
  InnerProduct ip;
  EmbeddingResult emb;
  Json candidates = Json::array();
};
WorkingInnerProduct working_inner_product(const Model& model, const LinearRep& rep, const Tolerances& tol = {});

struct Stage {
  std::string name;
  std::string status = "not_checked";
  Json evidence = Json::object();
};

struct AxiomOptions {
  std::uint64_t seed = 20240601;
  int state_samples = 4;
  int homogeneity_samples = 3;
  double symmetry_budget = 1e6;
};

struct AxiomReport {
  std::vector<Stage> stages;
  std::optional<Json> certificate;
  const Stage* stage(const std::string& name) const;
  bool all_hold() const;
  Json to_json() const;
};

/// Runs every stage in dependency order, short-circuiting with explicit
/// not_checked reasons.
AxiomReport verify_axioms(const Model& model, const AxiomOptions& options = {}, const Tolerances& tol = {});

}  // namespace opm
