#include <cmath>
#include <random>

#include "opm/axioms.hpp"
#include "opm/zoo.hpp"

namespace opm {

std::vector<Vec> sample_state_coords(const Model& model, const LinearRep& rep, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec> out;
  if (model.kind == ModelKind::quantum) {
    for (int k = 0; k < count; ++k) out.push_back(rep.hermitian->coords(herm::random_density(model.quantum->n, rng)));
    return out;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (model.kind == ModelKind::spin_factor) {
    const int d = model.spin->d;
    std::normal_distribution<double> normal;
    for (int k = 0; k < count; ++k) {
      Vec b(d);
      for (int i = 0; i < d; ++i) b(i) = normal(rng);
      b *= 0.95 * std::pow(unif(rng), 1.0 / d) / b.norm();
      Vec c(d + 1);
      c << 1, b;
      out.push_back(c);
    }
    return out;
  }
  std::exponential_distribution<double> expo(1.0);
  for (int k = 0; k < count; ++k) {
    Vec s = Vec::Zero(rep.dim);
    double total = 0;
    for (const auto& p : rep.state_coords) {
      double w = expo(rng);
      s += w * p;
      total += w;
    }
    out.push_back(s / total);
  }
  return out;
}

const Stage* AxiomReport::stage(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

bool AxiomReport::all_hold() const {
  for (const auto& s : stages) {
    if (s.status != "holds") return false;
  }
  return true;
}

Json AxiomReport::to_json() const {
  Json list = Json::array();
  for (const auto& s : stages) list.push_back(Json{{"stage", s.name}, {"status", s.status}, {"evidence", s.evidence}});
  Json j{{"stages", list}, {"all_hold", all_hold()}};
  j["certificate"] = certificate ? *certificate : Json(nullptr);
  return j;
}

namespace {

struct Candidate {
  InnerProduct ip;
  std::optional<EmbeddingResult> emb;
  std::optional<EmbeddingChecks> checks;
  std::optional<MinimizingReport> minimizing;
  std::optional<Verdict> in_cone;
  Json error;

  bool embedded(const Tolerances& tol) const {
    if (!checks) return false;
    const auto& c = *checks;
    return c.q_sum < tol.zero && c.norm_identity < tol.zero && c.gram_shift < tol.zero && c.unit_norm < tol.zero &&
           c.orthogonality < tol.zero && c.unit_multiple < tol.zero;
  }
  bool works(const Tolerances& tol) const {
    return embedded(tol) && minimizing && minimizing->minimizing && in_cone && in_cone->holds;
  }
  Json summary(const TestSpace& space, const Tolerances& tol) const {
    Json j{{"origin", ip.origin}, {"embedded", embedded(tol)}};
    if (ip.lambda) j["lambda"] = *ip.lambda;
    if (minimizing) j["minimizing"] = minimizing->minimizing;
    if (in_cone) j["in_cone"] = in_cone->holds;
    if (!error.is_null()) j["error"] = error;
    (void)space;
    return j;
  }
};

Candidate evaluate(const Model& model, const LinearRep& rep, InnerProduct ip, const Tolerances& tol) {
  Candidate c;
  c.ip = std::move(ip);
  try {
    c.emb = embed_outcomes(model, rep, c.ip, tol);
    c.checks = check_embedding(model, rep, c.ip, *c.emb);
    c.minimizing = is_minimizing(model, rep, c.ip, *c.emb, tol);
    if (c.minimizing->minimizing) c.in_cone = vectors_in_cone(model, rep, *c.emb, tol);
  } catch (const Error& e) {
    c.error = e.to_json();
  }
  return c;
}

std::vector<InnerProduct> candidate_inner_products(const Model& model, const LinearRep& rep,
                                                  const InnerProduct& canonical, const Tolerances& tol) {
  std::vector<InnerProduct> ips{canonical};
  if (model.kind == ModelKind::quantum) {
    ips.push_back(zoo::lambda_ip(model.quantum->n, 1.0, rep.cone_Vstar, tol));
  } else if (model.kind == ModelKind::spin_factor) {
    ips.push_back(zoo::spin_ip(model.spin->d, 1.0, rep.cone_Vstar, tol));
  }
  return ips;
}

class Pipeline {
 public:
  Pipeline(const Model& model, const AxiomOptions& options, const Tolerances& tol)
      : model_(model), options_(options), tol_(tol) {}

  AxiomReport run() {
    try {
      rep_ = build_linear_rep(model_, tol_);
      add("linear_representation", "holds", rep_.to_json(model_.space));
    } catch (const Error& e) {
      add("linear_representation", "fails", e.to_json());
      for (const char* s : {"full_symmetry", "canonical_inner_product", "embedding", "minimizing", "embedding_in_cone",
                            "sharpness", "self_duality", "correlating_dilations", "spectral_decomposition", "filters",
                            "homogeneity"}) {
        skip(s, "no linear representation");
      }
      return report_;
    }
    symmetry();
    inner_products();
    sharpness();
    self_duality();
    dilations();
    spectral();
    filters();
    homogeneity();
    if (report_.all_hold()) {
      report_.certificate = Json{{"inner_product", working_->ip.to_json()},
                                 {"self_dual", self_dual_},
                                 {"homogeneous", homogeneous_}};
    }
    return report_;
  }

 private:
  void add(const std::string& name, const std::string& status, Json evidence) {
    report_.stages.push_back(Stage{name, status, std::move(evidence)});
  }
  void skip(const std::string& name, const std::string& reason) { add(name, "not_checked", Json{{"reason", reason}}); }
  bool holds(const std::string& name) const {
    const Stage* s = report_.stage(name);
    return s && s->status == "holds";
  }
  // Names of prerequisite stages that do not hold.
  std::vector<std::string> missing(std::initializer_list<const char*> names) const {
    std::vector<std::string> out;
    for (const char* n : names) {
      if (!holds(n)) out.emplace_back(n);
    }
    return out;
  }
  bool require(const std::string& name, std::initializer_list<const char*> names) {
    auto m = missing(names);
    if (m.empty()) return true;
    add(name, "not_checked", Json{{"reason", "prerequisite stages do not hold"}, {"prerequisites", m}});
    return false;
  }

  void symmetry() {
    if (!model_.group) {
      skip("full_symmetry", "model has no symmetry group");
      return;
    }
    try {
      Verdict full = check_full_symmetry(model_, options_.symmetry_budget);
      Verdict trans = check_transitive_pure(model_, tol_);
      Verdict two = check_two_symmetric(model_);
      add("full_symmetry", full.holds && trans.holds ? "holds" : "fails",
          Json{{"fully_symmetric", full.to_json()}, {"transitive_on_pure_states", trans.to_json()},
               {"two_symmetric", two.to_json()}});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TooLarge) {
        add("full_symmetry", "not_checked", Json{{"reason", "enumeration budget exceeded"}, {"error", e.to_json()}});
      } else {
        add("full_symmetry", "fails", e.to_json());
      }
    }
  }

  void inner_products() {
    if (!model_.group) {
      for (const char* s : {"canonical_inner_product", "embedding", "minimizing", "embedding_in_cone"}) {
        skip(s, "model has no symmetry group");
      }
      return;
    }
    InnerProduct canonical;
    try {
      canonical = canonical_inner_product(model_, rep_, tol_);
      double uu = canonical(rep_.unit, rep_.unit);
      bool ok = canonical.positive_definite && canonical.positive_on_cone && canonical.invariant &&
                std::fabs(uu - 1) <= tol_.sum;
      Json ev = canonical.to_json();
      ev["unit_norm"] = uu;
      ev["invariance_defect"] = invariance_defect(model_, rep_, canonical, 200, tol_);
      add("canonical_inner_product", ok ? "holds" : "fails", ev);
    } catch (const Error& e) {
      add("canonical_inner_product", "fails", e.to_json());
      for (const char* s : {"embedding", "minimizing", "embedding_in_cone"}) skip(s, "no canonical inner product");
      return;
    }
    for (auto& ip : candidate_inner_products(model_, rep_, canonical, tol_)) {
      candidates_.push_back(evaluate(model_, rep_, ip, tol_));
      if (candidates_.back().works(tol_)) break;
    }
    working_ = &candidates_.front();
    for (auto& c : candidates_) {
      if (c.works(tol_)) {
        working_ = &c;
        break;
      }
    }
    Json tried = Json::array();
    for (const auto& c : candidates_) tried.push_back(c.summary(model_.space, tol_));
    const Candidate& w = *working_;
    Json base{{"inner_product", w.ip.origin}, {"candidates", tried}};

    Json emb_ev = base;
    if (w.emb) {
      emb_ev["constants"] = w.emb->to_json(model_.space);
      emb_ev["checks"] = w.checks->to_json();
    }
    if (!w.error.is_null()) emb_ev["error"] = w.error;
    add("embedding", w.embedded(tol_) ? "holds" : "fails", emb_ev);

    if (!w.minimizing) {
      skip("minimizing", "embedding failed");
    } else {
      Json ev = base;
      ev["report"] = w.minimizing->to_json();
      add("minimizing", w.minimizing->minimizing ? "holds" : "fails", ev);
    }
    if (!w.in_cone) {
      skip("embedding_in_cone", "inner product is not minimizing");
    } else {
      Json ev = base;
      ev["verdict"] = w.in_cone->to_json();
      add("embedding_in_cone", w.in_cone->holds ? "holds" : "fails", ev);
    }
  }

  void sharpness() {
    try {
      sharp_ = check_sharpness(model_, rep_, tol_);
      add("sharpness", "holds", sharp_->to_json(model_.space));
    } catch (const Error& e) {
      add("sharpness", "fails", e.to_json());
    }
  }

  void self_duality() {
    if (!require("self_duality", {"sharpness", "minimizing", "embedding_in_cone"})) return;
    try {
      SelfDualityEvidence ev = certify_self_duality(model_, rep_, working_->ip, &*working_->emb, tol_, options_.seed);
      self_dual_ = ev.to_json();
      add("self_duality", ev.self_dual ? "holds" : "fails", self_dual_);
    } catch (const Error& e) {
      add("self_duality", "fails", e.to_json());
    }
  }

  void dilations() {
    states_ = sample_state_coords(model_, rep_, options_.state_samples, options_.seed);
    if (!rep_.state_coords.empty()) states_.insert(states_.begin(), rep_.state_coords.front());
    Json runs = Json::array();
    for (const auto& s : states_) {
      try {
        Dilation d = find_correlating_dilation(model_, rep_, rep_.values_of(s), tol_);
        runs.push_back(d.to_json());
      } catch (const Error& e) {
        Json ev{{"state", to_json(s)}, {"error", e.to_json()}, {"runs", runs}};
        add("correlating_dilations", e.code() == ErrorCode::TooLarge ? "not_checked" : "fails", ev);
        return;
      }
    }
    add("correlating_dilations", "holds", Json{{"states", runs}});
  }

  void spectral() {
    if (!require("spectral_decomposition", {"sharpness", "correlating_dilations"})) return;
    Json runs = Json::array();
    double worst = 0;
    for (const auto& s : states_) {
      try {
        SpectralDecomposition d = spectral_decompose(model_, rep_, *sharp_, s, tol_);
        worst = std::max(worst, d.reconstruction_residual);
        runs.push_back(d.to_json());
      } catch (const Error& e) {
        add("spectral_decomposition", "fails", Json{{"state", to_json(s)}, {"error", e.to_json()}});
        return;
      }
    }
    add("spectral_decomposition", worst <= tol_.sum ? "holds" : "fails",
        Json{{"max_reconstruction_residual", worst}, {"decompositions", runs}});
  }

  void filters() {
    if (model_.filter == FilterCapability::none) {
      skip("filters", "model exposes no filter family");
      return;
    }
    std::mt19937_64 rng(options_.seed + 1);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    Json runs = Json::array();
    const auto& tests = model_.space.tests();
    for (size_t t = 0; t < tests.size() && t < 4; ++t) {
      std::vector<double> f;
      for (size_t k = 0; k < tests[t].size(); ++k) f.push_back(unif(rng));
      try {
        ConeMap m = make_filter(model_, rep_, tests[t], f, tol_);
        runs.push_back(Json{{"test", model_.space.test_names(static_cast<int>(t))}, {"factors", f},
                            {"certificate", m.certificate}});
      } catch (const Error& e) {
        add("filters", e.code() == ErrorCode::NoCapability ? "not_checked" : "fails",
            Json{{"test", model_.space.test_names(static_cast<int>(t))}, {"error", e.to_json()}});
        return;
      }
    }
    add("filters", "holds", Json{{"filters", runs}});
  }

  void homogeneity() {
    if (!require("homogeneity", {"full_symmetry", "minimizing", "embedding_in_cone", "sharpness", "self_duality",
                                 "correlating_dilations", "spectral_decomposition", "filters"})) {
      return;
    }
    std::mt19937_64 rng(options_.seed + 2);
    std::uniform_real_distribution<double> unif(0.2, 1.0);
    auto interior = [&] {
      Vec a = Vec::Zero(rep_.dim);
      for (const auto& e : rep_.effect_coords) a += unif(rng) * e;
      return a;
    };
    homogeneous_ = Json::array();
    for (int k = 0; k < options_.homogeneity_samples; ++k) {
      Vec a = interior();
      Vec b = interior();
      try {
        HomogeneityResult h = homogeneity_map(model_, rep_, working_->ip, *sharp_, a, b, tol_);
        homogeneous_.push_back(Json{{"a", to_json(a)}, {"b", to_json(b)}, {"map", h.to_json(h.model.space)}});
      } catch (const Error& e) {
        // A failed construction means "not certified", never "not homogeneous".
        add("homogeneity", "fails",
            Json{{"a", to_json(a)}, {"b", to_json(b)}, {"error", e.to_json()}, {"meaning", "not certified"}});
        return;
      }
    }
    add("homogeneity", "holds", Json{{"samples", homogeneous_}});
  }

  const Model& model_;
  AxiomOptions options_;
  Tolerances tol_;
  LinearRep rep_;
  AxiomReport report_;
  std::vector<Candidate> candidates_;
  const Candidate* working_ = nullptr;
  std::optional<SharpFamily> sharp_;
  std::vector<Vec> states_;
  Json self_dual_;
  Json homogeneous_;
};

}  // namespace

WorkingInnerProduct working_inner_product(const Model& model, const LinearRep& rep, const Tolerances& tol) {
  WorkingInnerProduct w;
  InnerProduct canonical = canonical_inner_product(model, rep, tol);
  for (auto& ip : candidate_inner_products(model, rep, canonical, tol)) {
    Candidate c = evaluate(model, rep, ip, tol);
    w.candidates.push_back(c.summary(model.space, tol));
    if (c.works(tol)) {
      w.found = true;
      w.ip = c.ip;
      w.emb = *c.emb;
      break;
    }
  }
  return w;
}

AxiomReport verify_axioms(const Model& model, const AxiomOptions& options, const Tolerances& tol) {
  return Pipeline(model, options, tol).run();
}

}  // namespace opm
