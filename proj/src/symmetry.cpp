#include "opm/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "opm/polyhedral.hpp"
#include "opm/zoo.hpp"

namespace opm {

Json Verdict::to_json() const {
  Json j{{"holds", holds}, {"analytic", analytic}};
  if (!witness.empty()) j["witness"] = witness;
  return j;
}

namespace {

const GroupAction& finite_group(const Model& model) {
  if (!model.group) throw Error(ErrorCode::InvalidGroup, "model has no symmetry group");
  return *model.group;
}

std::vector<std::vector<Outcome>> all_elements(const Model& model) {
  return finite_group(model).elements;
}

/// Outcome columns forming a basis of V*, in order.
std::vector<size_t> effect_basis(const LinearRep& rep) {
  if (rep.exact()) {
    return q_independent_rows(*rep.exact_effect_coords);
  }
  polyhedral::Rows<double> rows;
  for (const auto& e : rep.effect_coords) rows.emplace_back(e.data(), e.data() + e.size());
  return polyhedral::independent_rows(rows);
}

}  // namespace

std::vector<Mat> effect_actions(const Model& model, const LinearRep& rep, const Tolerances& tol) {
  const auto& group = finite_group(model);
  if (group.kind != GroupAction::Kind::finite) {
    throw Error(ErrorCode::InvalidGroup, "effect_actions needs a finite group");
  }
  auto idx = effect_basis(rep);
  if (static_cast<int>(idx.size()) != rep.dim) {
    throw Error(ErrorCode::NotFullDimensional, "outcome effects do not span V*");
  }
  Mat b(rep.dim, rep.dim);
  for (int k = 0; k < rep.dim; ++k) b.col(k) = rep.effect_coords[idx[k]];
  Eigen::PartialPivLU<Mat> lu(b);
  Mat binv = lu.inverse();
  std::vector<Mat> out;
  for (size_t e = 0; e < group.elements.size(); ++e) {
    const auto& g = group.elements[e];
    Mat img(rep.dim, rep.dim);
    for (int k = 0; k < rep.dim; ++k) img.col(k) = rep.effect_coords[g[idx[k]]];
    Mat a = img * binv;
    for (size_t x = 0; x < rep.effect_coords.size(); ++x) {
      double dev = (a * rep.effect_coords[x] - rep.effect_coords[g[x]]).cwiseAbs().maxCoeff();
      if (dev > tol.sum) {
        throw Error(ErrorCode::InvalidGroup, "group element does not act linearly on effects",
                    Json{{"element", e}, {"outcome", model.space.name(static_cast<Outcome>(x))}});
      }
    }
    out.push_back(a);
  }
  return out;
}

std::vector<Mat> sampled_effect_actions(const Model& model, const LinearRep& rep, int count,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Mat> out;
  if (model.kind == ModelKind::quantum) {
    for (int k = 0; k < count; ++k) {
      out.push_back(rep.hermitian->conjugation_action(herm::haar_unitary(model.quantum->n, rng)));
    }
  } else if (model.kind == ModelKind::spin_factor) {
    const int d = model.spin->d;
    for (int k = 0; k < count; ++k) {
      Mat a = Mat::Identity(d + 1, d + 1);
      a.bottomRightCorner(d, d) = herm::haar_orthogonal(d, rng);
      out.push_back(a);
    }
  } else {
    throw Error(ErrorCode::InvalidGroup, "sampled actions need an analytic model");
  }
  return out;
}

Verdict check_full_symmetry(const Model& model, double budget) {
  Verdict v;
  const auto& space = model.space;
  if (!space.rank()) {
    v.witness = Json{{"reason", "tests differ in cardinality"}};
    return v;
  }
  const int n = *space.rank();
  if (model.kind == ModelKind::quantum || model.kind == ModelKind::spin_factor) {
    // U = sum |f(e)><e| (resp. an orthogonal map sending w to +-w') realizes
    // every bijection of frames (resp. antipodal pairs).
    v.holds = true;
    v.analytic = true;
    v.witness = Json{{"reason", model.kind == ModelKind::quantum ? "unitary group acts transitively on ordered frames"
                                                                 : "orthogonal group acts transitively on ordered antipodal pairs"}};
    return v;
  }
  const auto& group = finite_group(model);
  const size_t nt = space.tests().size();
  double fact = 1;
  for (int k = 2; k <= n; ++k) fact *= k;
  if (n > 6 || fact * static_cast<double>(nt * nt) > budget) {
    throw Error(ErrorCode::TooLarge, "bijection enumeration exceeds the budget",
                Json{{"rank", n}, {"tests", nt}, {"budget", budget}});
  }
  for (size_t e = 0; e < nt; ++e) {
    const Test& E = space.tests()[e];
    for (size_t f = 0; f < nt; ++f) {
      const Test& F = space.tests()[f];
      std::set<std::vector<Outcome>> realized;
      for (const auto& g : group.elements) {
        std::vector<Outcome> image;
        for (Outcome x : E) image.push_back(g[x]);
        std::vector<Outcome> sorted = image;
        std::sort(sorted.begin(), sorted.end());
        if (sorted == F) realized.insert(image);
      }
      std::vector<Outcome> perm = F;
      do {
        if (!realized.count(perm)) {
          Json map = Json::object();
          for (int i = 0; i < n; ++i) map[space.name(E[i])] = space.name(perm[i]);
          v.witness = Json{{"from", space.test_names(static_cast<int>(e))},
                           {"to", space.test_names(static_cast<int>(f))},
                           {"unrealized_bijection", map}};
          return v;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
  v.holds = true;
  v.witness = Json{{"bijections_checked", fact * static_cast<double>(nt * nt)}};
  return v;
}

Verdict check_transitive_pure(const Model& model, const Tolerances& tol) {
  Verdict v;
  if (model.kind == ModelKind::quantum || model.kind == ModelKind::spin_factor) {
    v.holds = true;
    v.analytic = true;
    v.witness = Json{{"reason", "the group acts transitively on unit vectors"}};
    return v;
  }
  const auto& group = finite_group(model);
  const auto& base = model.pure_states.at(group.base_state);
  std::vector<char> hit(model.pure_states.size(), 0);
  for (const auto& g : group.elements) {
    StateVec image = act_on_state(g, base);
    for (size_t i = 0; i < model.pure_states.size(); ++i) {
      if ((model.pure_states[i] - image).cwiseAbs().maxCoeff() <= tol.zero) hit[i] = 1;
    }
  }
  for (size_t i = 0; i < hit.size(); ++i) {
    if (!hit[i]) {
      v.witness = Json{{"unreached_state", i}, {"base_state", group.base_state}};
      return v;
    }
  }
  v.holds = true;
  v.witness = Json{{"orbit_size", model.pure_states.size()}};
  return v;
}

Verdict check_two_symmetric(const Model& model) {
  Verdict v;
  if (model.kind == ModelKind::quantum || model.kind == ModelKind::spin_factor) {
    v.holds = true;
    v.analytic = true;
    v.witness = Json{{"reason", "the group acts transitively on ordered orthogonal pairs"}};
    return v;
  }
  const auto& space = model.space;
  std::set<std::pair<Outcome, Outcome>> pairs;
  for (const auto& t : space.tests()) {
    for (Outcome x : t) {
      for (Outcome y : t) {
        if (x != y) pairs.insert({x, y});
      }
    }
  }
  if (pairs.empty()) {
    v.witness = Json{{"reason", "no orthogonal pairs"}};
    return v;
  }
  auto first = *pairs.begin();
  std::set<std::pair<Outcome, Outcome>> orbit;
  for (const auto& g : all_elements(model)) orbit.insert({g[first.first], g[first.second]});
  for (const auto& p : pairs) {
    if (!orbit.count(p)) {
      v.witness = Json{{"from", {space.name(first.first), space.name(first.second)}},
                       {"unreached", {space.name(p.first), space.name(p.second)}}};
      return v;
    }
  }
  v.holds = true;
  return v;
}

InnerProduct canonical_inner_product(const Model& model, const LinearRep& rep, const Tolerances& tol) {
  if (model.kind == ModelKind::quantum) {
    const int n = model.quantum->n;
    InnerProduct ip = zoo::lambda_ip(n, 1.0 / (n + 1), rep.cone_Vstar, tol);
    ip.origin = "Haar average (closed form, lambda = 1/(n+1))";
    return ip;
  }
  if (model.kind == ModelKind::spin_factor) {
    const int d = model.spin->d;
    InnerProduct ip = zoo::spin_ip(d, 1.0 / d, rep.cone_Vstar, tol);
    ip.origin = "Haar average (closed form, kappa = 1/d)";
    return ip;
  }
  const auto& group = finite_group(model);
  const StateVec& base = model.pure_states.at(group.base_state);
  const double order = static_cast<double>(group.elements.size());

  auto orbit_index = [&](const StateVec& s) -> int {
    for (size_t i = 0; i < model.pure_states.size(); ++i) {
      if ((model.pure_states[i] - s).cwiseAbs().maxCoeff() <= tol.zero) return static_cast<int>(i);
    }
    return -1;
  };

  Mat gram = Mat::Zero(rep.dim, rep.dim);
  std::optional<QMat> exact;
  if (rep.exact()) exact = q_zero(rep.dim, rep.dim);
  for (const auto& g : group.elements) {
    StateVec image = act_on_state(g, base);
    int idx = orbit_index(image);
    Vec s = idx >= 0 ? rep.state_coords[idx] : rep.state_coords_of(image);
    gram += s * s.transpose();
    if (exact) {
      std::optional<QVec> qs;
      if (idx >= 0) {
        qs = (*rep.exact_state_coords)[idx];
      } else if (auto qv = rationalize(image)) {
        qs = q_solve(*rep.exact_effect_coords, *qv);
      }
      if (!qs) {
        exact.reset();
        continue;
      }
      for (int i = 0; i < rep.dim; ++i) {
        for (int j = 0; j < rep.dim; ++j) (*exact)[i][j] += (*qs)[i] * (*qs)[j];
      }
    }
  }
  gram /= order;
  if (exact) {
    Rational inv(1, static_cast<unsigned long>(group.elements.size()));
    for (auto& row : *exact) {
      for (auto& q : row) q *= inv;
    }
    gram = to_double(*exact);
    if (q_rank(*exact) < static_cast<size_t>(rep.dim)) {
      Json kernel = Json::array();
      for (const auto& k : q_kernel(*exact)) kernel.push_back(to_json(to_double(k)));
      throw Error(ErrorCode::Degenerate, "group-averaged form is degenerate", Json{{"kernel", kernel}});
    }
  }
  InnerProduct ip = make_inner_product(gram, rep.cone_Vstar, "group average over the finite group", tol, exact);
  if (!ip.positive_definite) {
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    throw Error(ErrorCode::Degenerate, "group-averaged form is degenerate",
                Json{{"kernel", {to_json(Vec(es.eigenvectors().col(0)))}}});
  }
  double uu = ip(rep.unit, rep.unit);
  if (exact && rep.exact_unit) {
    Rational q = q_dot(*rep.exact_unit, q_multiply(*exact, *rep.exact_unit));
    if (q != 1) {
      throw Error(ErrorCode::UnnormalizedUnit, "<u, u> != 1", Json{{"value", to_string(q)}});
    }
  } else if (std::fabs(uu - 1.0) > tol.sum) {
    throw Error(ErrorCode::UnnormalizedUnit, "<u, u> != 1", Json{{"value", uu}});
  }
  ip.invariant = invariance_defect(model, rep, ip, 0, tol) <= tol.invariance;
  return ip;
}

double invariance_defect(const Model& model, const LinearRep& rep, const InnerProduct& ip, int samples,
                         const Tolerances& tol) {
  double scale = std::max(1e-300, ip.gram.cwiseAbs().maxCoeff());
  if (model.group && model.group->kind == GroupAction::Kind::finite) {
    auto actions = effect_actions(model, rep, tol);
    if (ip.exact_gram) {
      // Exact check: the permutation actions are rational whenever the
      // effect coordinates are.
      bool exact_ok = true;
      for (const auto& a : actions) {
        auto qa = rationalize(a);
        if (!qa || q_multiply(q_multiply(q_transpose(*qa), *ip.exact_gram), *qa) != *ip.exact_gram) {
          exact_ok = false;
          break;
        }
      }
      if (exact_ok) return 0;
    }
    double worst = 0;
    for (const auto& a : actions) {
      worst = std::max(worst, (a.transpose() * ip.gram * a - ip.gram).cwiseAbs().maxCoeff() / scale);
    }
    return worst;
  }
  if (!model.analytic()) throw Error(ErrorCode::InvalidGroup, "model has no symmetry group");
  double worst = 0;
  for (const auto& a : sampled_effect_actions(model, rep, std::max(samples, 1), model.group->seed)) {
    worst = std::max(worst, (a.transpose() * ip.gram * a - ip.gram).cwiseAbs().maxCoeff() / scale);
  }
  return worst;
}

}  // namespace opm
