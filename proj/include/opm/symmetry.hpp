#pragma once

#include <cstdint>
#include <vector>

#include "opm/cone.hpp"
#include "opm/model.hpp"

namespace opm {

/// Verdict with evidence. `analytic` marks answers taken from a documented
/// fact about the unitary / orthogonal group rather than from enumeration.
struct Verdict {
  bool holds = false;
  bool analytic = false;
  Json witness = Json::object();

  Json to_json() const;
};

/// Matrix of x -> g x on V* coordinates for each element of a finite group
/// (InvalidGroup if some element does not extend linearly).
std::vector<Mat> effect_actions(const Model& model, const LinearRep& rep, const Tolerances& tol = {});
/// Seeded Haar samples of the analytic group acting on V* coordinates.
std::vector<Mat> sampled_effect_actions(const Model& model, const LinearRep& rep, int count,
                                        std::uint64_t seed);

/// Every bijection between two tests is realized by a group element.
/// Throws TooLarge when rank! * |tests|^2 exceeds the budget or rank > 6.
Verdict check_full_symmetry(const Model& model, double budget = 1e6);
/// The orbit of the base state is exactly the listed pure states.
Verdict check_transitive_pure(const Model& model, const Tolerances& tol = {});
/// The group acts transitively on ordered pairs of orthogonal outcomes.
Verdict check_two_symmetric(const Model& model);

/// The group-averaged form <a, b> = E_g a(g alpha0) b(g alpha0). Exact for
/// finite groups with rational data; closed forms for the analytic kinds.
InnerProduct canonical_inner_product(const Model& model, const LinearRep& rep, const Tolerances& tol = {});

/// Largest |<g a, g b> - <a, b>| over the group (finite) or over `samples`
/// seeded Haar draws (analytic), relative to the Gram scale.
double invariance_defect(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                         int samples = 200, const Tolerances& tol = {});

}  // namespace opm
