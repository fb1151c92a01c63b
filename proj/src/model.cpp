#include "opm/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace opm {

TestSpace::TestSpace(std::vector<std::string> outcomes,
                     const std::vector<std::vector<std::string>>& tests)
    : outcomes_(std::move(outcomes)) {
  for (size_t i = 0; i < outcomes_.size(); ++i) {
    if (!index_.emplace(outcomes_[i], static_cast<Outcome>(i)).second) {
      throw Error(ErrorCode::ParseError, "duplicate outcome '" + outcomes_[i] + "'");
    }
  }
  for (const auto& t : tests) {
    Test test;
    for (const auto& name : t) test.push_back(index(name));
    tests_.push_back(std::move(test));
  }
  finish();
}

TestSpace::TestSpace(std::vector<std::string> outcomes, std::vector<Test> tests)
    : outcomes_(std::move(outcomes)), tests_(std::move(tests)) {
  for (size_t i = 0; i < outcomes_.size(); ++i) {
    if (!index_.emplace(outcomes_[i], static_cast<Outcome>(i)).second) {
      throw Error(ErrorCode::ParseError, "duplicate outcome '" + outcomes_[i] + "'");
    }
  }
  for (const auto& t : tests_) {
    for (Outcome x : t) {
      if (x < 0 || x >= static_cast<Outcome>(outcomes_.size())) {
        throw Error(ErrorCode::UnknownOutcome, "outcome index " + std::to_string(x) + " out of range");
      }
    }
  }
  finish();
}

void TestSpace::finish() {
  if (outcomes_.empty()) throw Error(ErrorCode::EmptyTest, "test space has no outcomes");
  std::set<Test> seen;
  std::vector<Test> unique;
  for (auto t : tests_) {
    if (t.empty()) throw Error(ErrorCode::EmptyTest, "a test has no outcomes");
    std::sort(t.begin(), t.end());
    if (std::adjacent_find(t.begin(), t.end()) != t.end()) {
      throw Error(ErrorCode::ParseError, "a test lists the same outcome twice",
                  Json{{"outcome", outcomes_[*std::adjacent_find(t.begin(), t.end())]}});
    }
    if (seen.insert(t).second) unique.push_back(std::move(t));
  }
  if (unique.empty()) throw Error(ErrorCode::EmptyTest, "test space has no tests");
  tests_ = std::move(unique);
  containing_.assign(outcomes_.size(), {});
  for (size_t i = 0; i < tests_.size(); ++i) {
    for (Outcome x : tests_[i]) containing_[x].push_back(static_cast<int>(i));
  }
  for (size_t x = 0; x < outcomes_.size(); ++x) {
    if (containing_[x].empty()) {
      throw Error(ErrorCode::InvalidArgument, "outcome '" + outcomes_[x] + "' belongs to no test",
                  Json{{"outcome", outcomes_[x]}});
    }
  }
  rank_ = static_cast<int>(tests_.front().size());
  for (const auto& t : tests_) {
    if (static_cast<int>(t.size()) != *rank_) {
      rank_.reset();
      break;
    }
  }
}

const std::string& TestSpace::name(Outcome x) const {
  if (x < 0 || x >= static_cast<Outcome>(outcomes_.size())) {
    throw Error(ErrorCode::UnknownOutcome, "outcome index " + std::to_string(x) + " out of range");
  }
  return outcomes_[x];
}

Outcome TestSpace::index(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw Error(ErrorCode::UnknownOutcome, "unknown outcome '" + name + "'", Json{{"outcome", name}});
  }
  return it->second;
}

const std::vector<int>& TestSpace::tests_containing(Outcome x) const {
  name(x);
  return containing_[x];
}

bool TestSpace::contains(int test, Outcome x) const {
  const auto& t = tests_.at(test);
  return std::binary_search(t.begin(), t.end(), x);
}

std::vector<std::string> TestSpace::test_names(int test) const {
  std::vector<std::string> names;
  for (Outcome x : tests_.at(test)) names.push_back(outcomes_[x]);
  return names;
}

bool orthogonal(const TestSpace& space, Outcome x, Outcome y) {
  space.name(x);
  space.name(y);
  if (x == y) return false;
  for (int t : space.tests_containing(x)) {
    if (space.contains(t, y)) return true;
  }
  return false;
}

bool orthogonal(const TestSpace& space, const std::string& x, const std::string& y) {
  return orthogonal(space, space.index(x), space.index(y));
}

double normalization_defect(const TestSpace& space, const StateVec& alpha) {
  double worst = 0;
  for (const auto& t : space.tests()) {
    double s = 0;
    for (Outcome x : t) s += alpha(x);
    worst = std::max(worst, std::fabs(s - 1.0));
  }
  return worst;
}

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::generic: return "generic";
    case ModelKind::classical: return "classical";
    case ModelKind::quantum: return "quantum";
    case ModelKind::spin_factor: return "spin_factor";
    case ModelKind::square_bit: return "square_bit";
  }
  return "generic";
}

ModelKind parse_kind(const std::string& text) {
  if (text == "generic") return ModelKind::generic;
  if (text == "classical") return ModelKind::classical;
  if (text == "quantum") return ModelKind::quantum;
  if (text == "spin_factor") return ModelKind::spin_factor;
  if (text == "square_bit") return ModelKind::square_bit;
  throw Error(ErrorCode::ParseError, "unknown model kind '" + text + "'");
}

std::vector<std::vector<Outcome>> close_group(const std::vector<std::vector<Outcome>>& generators,
                                              size_t budget) {
  if (generators.empty()) return {};
  const size_t n = generators.front().size();
  std::vector<Outcome> id(n);
  for (size_t i = 0; i < n; ++i) id[i] = static_cast<Outcome>(i);
  for (const auto& g : generators) {
    std::vector<char> hit(n, 0);
    if (g.size() != n) throw Error(ErrorCode::InvalidGroup, "permutation has the wrong length");
    for (Outcome v : g) {
      if (v < 0 || static_cast<size_t>(v) >= n || hit[v]) {
        throw Error(ErrorCode::InvalidGroup, "group element is not a bijection of the outcomes");
      }
      hit[v] = 1;
    }
  }
  std::vector<std::vector<Outcome>> elements{id};
  std::set<std::vector<Outcome>> seen{id};
  // Products of a finite set of permutations close under inverses as well.
  for (size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : generators) {
      std::vector<Outcome> h(n);
      for (size_t i = 0; i < n; ++i) h[i] = g[elements[head][i]];
      if (seen.insert(h).second) {
        elements.push_back(std::move(h));
        if (elements.size() > budget) {
          throw Error(ErrorCode::TooLarge, "group closure exceeded the element budget",
                      Json{{"budget", budget}});
        }
      }
    }
  }
  return elements;
}

StateVec act_on_state(const std::vector<Outcome>& g, const StateVec& alpha) {
  StateVec out(alpha.size());
  for (size_t x = 0; x < g.size(); ++x) out(g[x]) = alpha(static_cast<Eigen::Index>(x));
  return out;
}

namespace {

void check_state(const TestSpace& space, const StateVec& alpha, size_t index, const Tolerances& tol) {
  for (size_t x = 0; x < space.size(); ++x) {
    if (!(alpha(x) >= -tol.sum && alpha(x) <= 1 + tol.sum)) {
      throw Error(ErrorCode::StateSumViolation,
                  "pure state " + std::to_string(index) + " assigns a value outside [0,1]",
                  Json{{"state", index}, {"outcome", space.outcomes()[x]}, {"value", alpha(x)}});
    }
  }
  for (size_t t = 0; t < space.tests().size(); ++t) {
    double s = 0;
    for (Outcome x : space.tests()[t]) s += alpha(x);
    if (std::fabs(s - 1.0) > tol.sum) {
      throw Error(ErrorCode::StateSumViolation,
                  "pure state " + std::to_string(index) + " sums to " + std::to_string(s) +
                      " on a test",
                  Json{{"state", index}, {"test", space.test_names(static_cast<int>(t))}, {"sum", s}});
    }
  }
}

bool same_state(const StateVec& a, const StateVec& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

void check_group(const Model& m, const Tolerances& tol) {
  const auto& g = *m.group;
  if (g.base_state < 0 || g.base_state >= static_cast<int>(m.pure_states.size())) {
    throw Error(ErrorCode::InvalidGroup, "base state index out of range");
  }
  if (g.kind != GroupAction::Kind::finite) return;
  std::set<Test> tests(m.space.tests().begin(), m.space.tests().end());
  for (size_t e = 0; e < g.elements.size(); ++e) {
    const auto& p = g.elements[e];
    if (p.size() != m.space.size()) throw Error(ErrorCode::InvalidGroup, "permutation has the wrong length");
    for (const auto& t : m.space.tests()) {
      Test image;
      for (Outcome x : t) image.push_back(p[x]);
      std::sort(image.begin(), image.end());
      if (!tests.count(image)) {
        std::vector<std::string> names;
        for (Outcome x : image) names.push_back(m.space.name(x));
        throw Error(ErrorCode::InvalidGroup, "group element maps a test outside the test space",
                    Json{{"element", e}, {"image", names}});
      }
    }
    for (size_t i = 0; i < m.pure_states.size(); ++i) {
      StateVec image = act_on_state(p, m.pure_states[i]);
      bool found = std::any_of(m.pure_states.begin(), m.pure_states.end(),
                               [&](const StateVec& s) { return same_state(s, image, tol.zero); });
      if (!found) {
        throw Error(ErrorCode::InvalidGroup, "group element maps a pure state outside the listed set",
                    Json{{"element", e}, {"state", i}});
      }
    }
  }
}

void check_separation(const Model& m, const Tolerances& tol) {
  const size_t n = m.space.size();
  for (size_t x = 0; x < n; ++x) {
    for (size_t y = x + 1; y < n; ++y) {
      bool separated = false;
      for (const auto& s : m.pure_states) {
        if (std::fabs(s(x) - s(y)) > tol.zero) {
          separated = true;
          break;
        }
      }
      if (!separated) {
        throw Error(ErrorCode::NonSeparating,
                    "outcomes '" + m.space.name(x) + "' and '" + m.space.name(y) +
                        "' agree on every pure state",
                    Json{{"pair", {m.space.name(x), m.space.name(y)}}});
      }
    }
  }
}

void check_classical(const Model& m, const Tolerances& tol) {
  bool ok = m.space.tests().size() == 1 && m.pure_states.size() == m.space.size();
  for (size_t i = 0; ok && i < m.pure_states.size(); ++i) {
    const auto& s = m.pure_states[i];
    ok = std::fabs(s.maxCoeff() - 1.0) <= tol.zero && std::fabs(s.sum() - 1.0) <= tol.sum;
  }
  if (!ok) {
    throw Error(ErrorCode::InvalidArgument,
                "kind 'classical' needs a single test with point masses as pure states");
  }
}

}  // namespace

Model validate_model(const Model& model, const Tolerances& tol) {
  Model m = model;
  if (m.pure_states.empty()) throw Error(ErrorCode::InvalidArgument, "model lists no pure states");
  for (size_t i = 0; i < m.pure_states.size(); ++i) {
    if (static_cast<size_t>(m.pure_states[i].size()) != m.space.size()) {
      throw Error(ErrorCode::InvalidArgument, "pure state has the wrong length");
    }
    check_state(m.space, m.pure_states[i], i, tol);
  }
  check_separation(m, tol);
  if (m.kind == ModelKind::classical) check_classical(m, tol);
  if (m.kind == ModelKind::quantum && !m.quantum) {
    throw Error(ErrorCode::InvalidArgument, "quantum models need an operator representation");
  }
  if (m.kind == ModelKind::spin_factor && !m.spin) {
    throw Error(ErrorCode::InvalidArgument, "spin factor models need direction data");
  }
  if (m.group) check_group(m, tol);
  return m;
}

Model validate_model(const RawModel& raw, const Tolerances& tol) {
  Model m;
  m.space = TestSpace(raw.outcomes, raw.tests);
  for (const auto& ps : raw.pure_states) {
    StateVec s = StateVec::Zero(static_cast<Eigen::Index>(m.space.size()));
    for (const auto& [name, value] : ps) s(m.space.index(name)) = value;
    m.pure_states.push_back(s);
  }
  if (raw.kind) m.kind = parse_kind(*raw.kind);
  if (m.kind == ModelKind::quantum || m.kind == ModelKind::spin_factor) {
    throw Error(ErrorCode::InvalidArgument,
                "kind '" + *raw.kind + "' is only available through the built-in constructors");
  }
  if (m.kind == ModelKind::classical) m.filter = FilterCapability::diagonal;
  if (raw.analytic_group) {
    throw Error(ErrorCode::InvalidGroup, "analytic group '" + *raw.analytic_group +
                                             "' requires an operator model; use a built-in model");
  }
  if (raw.permutations) {
    GroupAction g;
    std::vector<std::vector<Outcome>> gens;
    for (const auto& perm : *raw.permutations) {
      std::vector<Outcome> p(m.space.size());
      for (size_t i = 0; i < p.size(); ++i) p[i] = static_cast<Outcome>(i);
      for (const auto& [from, to] : perm) p[m.space.index(from)] = m.space.index(to);
      gens.push_back(std::move(p));
    }
    if (gens.empty()) {
      std::vector<Outcome> id(m.space.size());
      for (size_t i = 0; i < id.size(); ++i) id[i] = static_cast<Outcome>(i);
      gens.push_back(id);
    }
    g.elements = close_group(gens);
    if (raw.seed) g.seed = *raw.seed;
    if (raw.base_state) g.base_state = *raw.base_state;
    m.group = std::move(g);
  }
  return validate_model(m, tol);
}

RawModel to_raw(const Model& model) {
  RawModel raw;
  raw.outcomes = model.space.outcomes();
  for (size_t t = 0; t < model.space.tests().size(); ++t) {
    raw.tests.push_back(model.space.test_names(static_cast<int>(t)));
  }
  for (const auto& s : model.pure_states) {
    std::map<std::string, double> ps;
    for (size_t x = 0; x < model.space.size(); ++x) {
      if (s(x) != 0) ps[model.space.name(static_cast<Outcome>(x))] = s(x);
    }
    raw.pure_states.push_back(std::move(ps));
  }
  if (model.group) {
    const auto& g = *model.group;
    if (g.kind == GroupAction::Kind::finite) {
      std::vector<std::map<std::string, std::string>> perms;
      for (const auto& p : g.elements) {
        std::map<std::string, std::string> mp;
        for (size_t x = 0; x < p.size(); ++x) {
          if (p[x] != static_cast<Outcome>(x)) mp[model.space.name(static_cast<Outcome>(x))] = model.space.name(p[x]);
        }
        perms.push_back(std::move(mp));
      }
      raw.permutations = std::move(perms);
    } else {
      raw.analytic_group = g.kind == GroupAction::Kind::unitary ? "unitary" : "orthogonal";
    }
    raw.seed = g.seed;
    raw.base_state = g.base_state;
  }
  raw.kind = to_string(model.kind);
  return raw;
}

BipartiteState marginals_and_conditionals(const Model& model, const Mat& table, const Tolerances& tol) {
  const auto& space = model.space;
  const Eigen::Index n = static_cast<Eigen::Index>(space.size());
  if (table.rows() != n || table.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "bipartite table must be |X| x |X|");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(table(i, j) >= -tol.zero && table(i, j) <= 1 + tol.sum)) {
        throw Error(ErrorCode::NotNormalized, "table entry outside [0,1]",
                    Json{{"pair", {space.name(i), space.name(j)}}, {"value", table(i, j)}});
      }
    }
  }
  BipartiteState w;
  w.table = table;
  const auto& tests = space.tests();
  auto marginal = [&](bool left) {
    StateVec m(n);
    for (Eigen::Index x = 0; x < n; ++x) {
      double first = 0;
      for (size_t t = 0; t < tests.size(); ++t) {
        double s = 0;
        for (Outcome y : tests[t]) s += left ? table(x, y) : table(y, x);
        if (t == 0) {
          first = s;
        } else if (std::fabs(s - first) > tol.sum) {
          throw Error(ErrorCode::Signaling,
                      std::string(left ? "left" : "right") + " marginal at '" + space.name(x) +
                          "' depends on the distant test",
                      Json{{"outcome", space.name(x)},
                           {"tests", {space.test_names(0), space.test_names(static_cast<int>(t))}},
                           {"deviation", std::fabs(s - first)}});
        }
      }
      m(x) = first;
    }
    return m;
  };
  w.left_marginal = marginal(true);
  w.right_marginal = marginal(false);
  for (const StateVec* m : {&w.left_marginal, &w.right_marginal}) {
    for (size_t t = 0; t < tests.size(); ++t) {
      double s = 0;
      for (Outcome x : tests[t]) s += (*m)(x);
      if (std::fabs(s - 1.0) > tol.sum) {
        throw Error(ErrorCode::NotNormalized, "product test does not sum to 1",
                    Json{{"test", space.test_names(static_cast<int>(t))}, {"sum", s}});
      }
    }
  }
  w.right_given_left.resize(n);
  w.left_given_right.resize(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    if (w.left_marginal(x) > tol.zero) w.right_given_left[x] = StateVec(table.row(x).transpose() / w.left_marginal(x));
    if (w.right_marginal(x) > tol.zero) w.left_given_right[x] = StateVec(table.col(x) / w.right_marginal(x));
  }
  double residual = 0;
  for (const auto& t : tests) {
    StateVec right = StateVec::Zero(n);
    StateVec left = StateVec::Zero(n);
    for (Outcome x : t) {
      if (w.right_given_left[x]) right += *w.right_given_left[x] * w.left_marginal(x);
      if (w.left_given_right[x]) left += *w.left_given_right[x] * w.right_marginal(x);
    }
    residual = std::max(residual, (right - w.right_marginal).cwiseAbs().maxCoeff());
    residual = std::max(residual, (left - w.left_marginal).cwiseAbs().maxCoeff());
  }
  w.total_probability_residual = residual;
  return w;
}

std::optional<Correlation> is_correlating(const Model& model, const BipartiteState& omega,
                                          const Tolerances& tol) {
  const auto& tests = model.space.tests();
  for (size_t e = 0; e < tests.size(); ++e) {
    for (size_t f = 0; f < tests.size(); ++f) {
      const Test& E = tests[e];
      const Test& F = tests[f];
      if (E.size() != F.size()) continue;
      std::vector<int> match(E.size(), -1);
      std::vector<char> used(F.size(), 0);
      bool ok = true;
      for (size_t i = 0; i < E.size() && ok; ++i) {
        for (size_t j = 0; j < F.size(); ++j) {
          if (omega.table(E[i], F[j]) <= tol.zero) continue;
          if (match[i] >= 0 || used[j]) {
            ok = false;
            break;
          }
          match[i] = static_cast<int>(j);
          used[j] = 1;
        }
        if (ok && match[i] < 0 && omega.left_marginal(E[i]) > tol.zero) ok = false;
      }
      if (!ok) continue;
      for (size_t i = 0; i < E.size(); ++i) {
        if (match[i] >= 0) continue;
        for (size_t j = 0; j < F.size(); ++j) {
          if (!used[j]) {
            match[i] = static_cast<int>(j);
            used[j] = 1;
            break;
          }
        }
      }
      Correlation c;
      c.left_test = static_cast<int>(e);
      c.right_test = static_cast<int>(f);
      for (size_t i = 0; i < E.size(); ++i) {
        c.left.push_back(E[i]);
        c.right.push_back(F[match[i]]);
      }
      return c;
    }
  }
  return std::nullopt;
}

}  // namespace opm
