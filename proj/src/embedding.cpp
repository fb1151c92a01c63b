#include "opm/embedding.hpp"

#include <cmath>

namespace opm {

Json EmbeddingResult::to_json(const TestSpace& space) const {
  Json vs = Json::object();
  for (size_t x = 0; x < v.size(); ++x) vs[space.name(static_cast<Outcome>(x))] = opm::to_json(v[x]);
  return Json{{"n", n},   {"m", m},         {"r", r},         {"s", s},
              {"s_q", s_q}, {"c", c},       {"scale", scale}, {"shifted", shifted},
              {"v", vs}};
}

Vec EmbeddingResult::embed(const Vec& a, const InnerProduct& ip, const Vec& unit) const {
  Vec qa = a - ip(a, unit) * unit;
  return (qa + c * unit) / scale;
}

namespace {

std::vector<std::pair<Outcome, Outcome>> orthogonal_pairs(const TestSpace& space) {
  std::vector<std::pair<Outcome, Outcome>> pairs;
  for (size_t x = 0; x < space.size(); ++x) {
    for (size_t y = 0; y < space.size(); ++y) {
      if (orthogonal(space, static_cast<Outcome>(x), static_cast<Outcome>(y))) {
        pairs.emplace_back(static_cast<Outcome>(x), static_cast<Outcome>(y));
      }
    }
  }
  return pairs;
}

void require_constant(const char* what, double first, double value, const Json& where, const Tolerances& tol) {
  if (std::fabs(value - first) > tol.constant) {
    throw Error(ErrorCode::NotConstant, std::string(what) + " is not constant",
                Json{{"quantity", what}, {"expected", first}, {"found", value}, {"at", where}});
  }
}

}  // namespace

EmbeddingResult embed_outcomes(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                               const Tolerances& tol) {
  const auto& space = model.space;
  if (!space.rank()) throw Error(ErrorCode::NonUniformRank, "tests differ in cardinality");
  EmbeddingResult e;
  e.n = *space.rank();
  if (e.n < 2) throw Error(ErrorCode::Degenerate, "rank-1 test spaces have no embedding");
  const Vec& u = rep.unit;
  double uu = ip(u, u);
  if (std::fabs(uu - 1) > tol.sum) throw Error(ErrorCode::UnnormalizedUnit, "<u, u> != 1", Json{{"value", uu}});

  const size_t nx = space.size();
  e.m = ip(rep.effect_coords[0], u);
  for (size_t x = 0; x < nx; ++x) {
    double mx = ip(rep.effect_coords[x], u);
    require_constant("<x,u>", e.m, mx, Json{{"outcome", space.name(static_cast<Outcome>(x))}}, tol);
    e.q.push_back(rep.effect_coords[x] - mx * u);
  }
  double r2 = ip(e.q[0], e.q[0]);
  for (size_t x = 0; x < nx; ++x) {
    require_constant("|q_x|^2", r2, ip(e.q[x], e.q[x]), Json{{"outcome", space.name(static_cast<Outcome>(x))}}, tol);
  }
  e.r = std::sqrt(r2);
  auto pairs = orthogonal_pairs(space);
  if (pairs.empty()) throw Error(ErrorCode::Degenerate, "no orthogonal pairs");
  e.s_q = ip(e.q[pairs[0].first], e.q[pairs[0].second]);
  e.s = ip(rep.effect_coords[pairs[0].first], rep.effect_coords[pairs[0].second]);
  for (const auto& [x, y] : pairs) {
    Json at{{"pair", {space.name(x), space.name(y)}}};
    require_constant("<q_x,q_y>", e.s_q, ip(e.q[x], e.q[y]), at, tol);
    require_constant("<x,y>", e.s, ip(rep.effect_coords[x], rep.effect_coords[y]), at, tol);
  }
  if (std::fabs(e.s_q) <= tol.zero) {
    e.s_q = 0;
    e.c = 0;
    e.scale = e.r;
  } else if (e.s_q > 0) {
    throw Error(ErrorCode::PositiveOffDiagonal, "orthogonal pairs have positive <q_x, q_y>",
                Json{{"s_q", e.s_q}, {"r2", r2}});
  } else {
    e.shifted = true;
    e.c = e.r / std::sqrt(e.n - 1.0);
    e.scale = e.r * std::sqrt(e.n / (e.n - 1.0));
  }
  if (!(e.scale > 0)) throw Error(ErrorCode::Degenerate, "outcome effects are multiples of the unit");
  for (size_t x = 0; x < nx; ++x) e.v.push_back((e.q[x] + e.c * u) / e.scale);
  return e;
}

Json EmbeddingChecks::to_json() const {
  return Json{{"q_sum", q_sum},
              {"norm_identity", norm_identity},
              {"gram_shift", gram_shift},
              {"unit_norm", unit_norm},
              {"orthogonality", orthogonality},
              {"min_distance", min_distance},
              {"unit_multiple", unit_multiple}};
}

EmbeddingChecks check_embedding(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                              const EmbeddingResult& emb) {
  const auto& space = model.space;
  EmbeddingChecks c;
  const Vec& u = rep.unit;
  for (const auto& t : space.tests()) {
    Vec qs = Vec::Zero(rep.dim);
    Vec vs = Vec::Zero(rep.dim);
    for (Outcome x : t) {
      qs += emb.q[x];
      vs += emb.v[x];
    }
    c.q_sum = std::max(c.q_sum, ip.norm(qs));
    double along = ip(vs, u);
    c.unit_multiple = std::max(c.unit_multiple, ip.norm(vs - along * u) + (along > 0 ? 0.0 : 1.0));
  }
  if (emb.s_q != 0) c.norm_identity = std::fabs(emb.r * emb.r + (emb.n - 1) * emb.s_q);
  c.min_distance = std::numeric_limits<double>::infinity();
  const double s2 = emb.scale * emb.scale;
  for (size_t x = 0; x < space.size(); ++x) {
    c.unit_norm = std::max(c.unit_norm, std::fabs(ip.norm(emb.v[x]) - 1));
    for (size_t y = 0; y < space.size(); ++y) {
      double lhs = s2 * ip(emb.v[x], emb.v[y]);
      double rhs = ip(rep.effect_coords[x], rep.effect_coords[y]) - emb.s;
      c.gram_shift = std::max(c.gram_shift, std::fabs(lhs - rhs));
      if (orthogonal(space, static_cast<Outcome>(x), static_cast<Outcome>(y))) {
        c.orthogonality = std::max(c.orthogonality, std::fabs(ip(emb.v[x], emb.v[y])));
      }
      if (x != y) c.min_distance = std::min(c.min_distance, ip.norm(emb.v[x] - emb.v[y]));
    }
  }
  if (space.size() < 2) c.min_distance = 0;
  return c;
}

Json MinimizingReport::to_json() const {
  Json j{{"minimizing", minimizing}, {"analytic", analytic}, {"min_value", min_value}};
  if (!witness.is_null()) j["witness"] = witness;
  return j;
}

MinimizingReport is_minimizing(const Model& model, const LinearRep& rep, InnerProduct& ip,
                               const EmbeddingResult& emb, const Tolerances& tol) {
  const auto& space = model.space;
  MinimizingReport r;
  r.min_value = std::numeric_limits<double>::infinity();
  bool enumerated = true;
  for (size_t x = 0; x < space.size(); ++x) {
    for (size_t y = 0; y < space.size(); ++y) {
      double v = ip(rep.effect_coords[x], rep.effect_coords[y]);
      if (v < r.min_value) r.min_value = v;
      if (v < emb.s - tol.zero && enumerated) {
        enumerated = false;
        r.witness = Json{{"pair", {space.name(static_cast<Outcome>(x)), space.name(static_cast<Outcome>(y))}},
                         {"value", v},
                         {"s", emb.s}};
      }
    }
  }
  r.minimizing = enumerated;
  if (model.kind == ModelKind::quantum && ip.lambda) {
    // <P_x, P_y> = (1 - lambda)/n^2 + (lambda/n)|<x,y>|^2 is smallest at
    // orthogonal pairs whenever lambda > 0.
    bool analytic = *ip.lambda > 0;
    if (analytic != enumerated) {
      throw Error(ErrorCode::MethodDisagreement, "closed-form and enumerated minimization disagree",
                  Json{{"analytic", analytic}, {"enumerated", enumerated}});
    }
    r.analytic = true;
  } else if (model.kind == ModelKind::spin_factor) {
    // <(1,x)/2, (1,y)/2> = (1 + kappa x.y)/4 is smallest at y = -x for kappa > 0.
    r.analytic = true;
  }
  ip.minimizing = r.minimizing;
  return r;
}

Verdict vectors_in_cone(const Model& model, const LinearRep& rep, const EmbeddingResult& emb,
                        const Tolerances& tol) {
  Verdict v;
  v.holds = true;
  double worst = std::numeric_limits<double>::infinity();
  for (size_t x = 0; x < emb.v.size(); ++x) {
    double mgn = rep.cone_Vstar.margin(emb.v[x]);
    worst = std::min(worst, mgn);
    if (v.holds && !rep.cone_Vstar.contains(emb.v[x], tol.zero)) {
      v.holds = false;
      v.witness = Json{{"outcome", model.space.name(static_cast<Outcome>(x))},
                       {"v", to_json(emb.v[x])},
                       {"margin", mgn}};
    }
  }
  if (v.holds) v.witness = Json{{"min_margin", worst}};
  return v;
}

bool is_two_connected(const TestSpace& space) {
  const size_t n = space.size();
  for (size_t x = 0; x < n; ++x) {
    for (size_t y = 0; y < n; ++y) {
      bool linked = false;
      for (size_t z = 0; z < n && !linked; ++z) {
        linked = orthogonal(space, static_cast<Outcome>(x), static_cast<Outcome>(z)) &&
                 orthogonal(space, static_cast<Outcome>(z), static_cast<Outcome>(y));
      }
      if (!linked) return false;
    }
  }
  return true;
}

Verdict two_connected(const Model& model) {
  Verdict v;
  if (model.kind == ModelKind::quantum) {
    // For n >= 3 a unit vector orthogonal to both x and y always exists.
    v.analytic = true;
    v.holds = model.quantum->n >= 3;
    v.witness = Json{{"reason", v.holds ? "some unit vector is orthogonal to any two given vectors"
                                        : "in dimension 2 only x-perp is orthogonal to x"}};
    return v;
  }
  if (model.kind == ModelKind::spin_factor) {
    v.analytic = true;
    v.witness = Json{{"reason", "the only outcome orthogonal to x is -x"}};
    return v;
  }
  v.holds = is_two_connected(model.space);
  return v;
}

StateVec outcome_state(const Model& model, const InnerProduct& ip, const EmbeddingResult& emb, Outcome x,
                       const Tolerances& tol) {
  if (!ip.minimizing || !*ip.minimizing) {
    throw Error(ErrorCode::NotMinimizing, "outcome states need a minimizing inner product");
  }
  const auto& space = model.space;
  StateVec a(static_cast<Eigen::Index>(space.size()));
  for (size_t y = 0; y < space.size(); ++y) a(static_cast<Eigen::Index>(y)) = ip(emb.v.at(x), emb.v[y]);
  for (size_t y = 0; y < space.size(); ++y) {
    if (a(y) < -tol.sum || a(y) > 1 + tol.sum) {
      throw Error(ErrorCode::StateSumViolation, "outcome state leaves [0,1]",
                  Json{{"outcome", space.name(x)}, {"at", space.name(static_cast<Outcome>(y))}, {"value", a(y)}});
    }
  }
  double defect = normalization_defect(space, a);
  if (defect > tol.sum) {
    throw Error(ErrorCode::StateSumViolation, "outcome state is not normalized",
                Json{{"outcome", space.name(x)}, {"defect", defect}});
  }
  return a;
}

}  // namespace opm
