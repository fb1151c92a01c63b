#pragma once

#include <vector>

#include "opm/cone.hpp"
#include "opm/model.hpp"
#include "opm/symmetry.hpp"

namespace opm {

/// Unit vectors v_x in V* with v_x perpendicular to v_y whenever x and y are
/// orthogonal outcomes, together with the constants of the construction.
struct EmbeddingResult {
  std::vector<Vec> v;  // unit vectors
  std::vector<Vec> q;  // x - <x,u> u
  double m = 0;        // <x, u>
  double r = 0;        // |q_x|
  double s = 0;        // <x, y> for x perpendicular to y
  double s_q = 0;      // <q_x, q_y> for x perpendicular to y
  double c = 0;        // shift coefficient (0 when no shift is needed)
  double scale = 0;    // |q_x + c u|, divided out of v_x
  int n = 0;
  bool shifted = false;

  Json to_json(const TestSpace& space) const;
  /// The embedding formula applied to an arbitrary effect with <a, u> = m.
  Vec embed(const Vec& a, const InnerProduct& ip, const Vec& unit) const;
};

EmbeddingResult embed_outcomes(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                               const Tolerances& tol = {});

struct EmbeddingChecks {
  double q_sum = 0;            // max over tests of |sum_{y in E} q_y|
  double norm_identity = 0;  // |r^2 + (n-1) s_q| (0 when s_q = 0)
  double gram_shift = 0;           // max |scale^2 <v_x, v_y> - (<x,y> - s)|
  double unit_norm = 0;        // max | |v_x| - 1 |
  double orthogonality = 0;    // max |<v_x, v_y>| over orthogonal pairs
  double min_distance = 0;     // min |v_x - v_y| over distinct outcomes
  double unit_multiple = 0;    // max over tests of the distance of sum v_y from R+ u
  Json to_json() const;
};
EmbeddingChecks check_embedding(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                              const EmbeddingResult& emb);

struct MinimizingReport {
  bool minimizing = false;
  bool analytic = false;
  double min_value = 0;
  Json witness;  // a pair attaining a value below s, if any
  Json to_json() const;
};
/// <x, y> >= s for all outcome pairs; sets ip.minimizing.
MinimizingReport is_minimizing(const Model& model, const LinearRep& rep, InnerProduct& ip,
                               const EmbeddingResult& emb, const Tolerances& tol = {});

/// Every v_x lies in the effect cone.
Verdict vectors_in_cone(const Model& model, const LinearRep& rep, const EmbeddingResult& emb,
                        const Tolerances& tol = {});

/// For all x, y there is z with x perpendicular to z perpendicular to y.
bool is_two_connected(const TestSpace& space);
/// Frame manuals of dimension >= 3 are 2-connected (analytic); qubits are not.
Verdict two_connected(const Model& model);

/// alpha_x(y) = <v_x, v_y>. Requires ip.minimizing == true.
StateVec outcome_state(const Model& model, const InnerProduct& ip, const EmbeddingResult& emb, Outcome x,
                       const Tolerances& tol = {});

}  // namespace opm
