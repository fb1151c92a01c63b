#include "opm/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "opm/lp.hpp"
#include "opm/rational.hpp"
#include "opm/zoo.hpp"

namespace opm {

namespace {

Json names_of(const TestSpace& space, const std::vector<Outcome>& xs) {
  Json j = Json::array();
  for (Outcome x : xs) j.push_back(space.name(x));
  return j;
}

int find_test(const TestSpace& space, std::vector<Outcome> outcomes) {
  std::sort(outcomes.begin(), outcomes.end());
  for (size_t t = 0; t < space.tests().size(); ++t) {
    if (space.tests()[t] == outcomes) return static_cast<int>(t);
  }
  return -1;
}

double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

// ---------------------------------------------------------------- sharpness

Json SharpFamily::to_json(const TestSpace& space) const {
  Json j = Json::object();
  for (size_t x = 0; x < eps.size(); ++x) {
    Json e{{"values", opm::to_json(eps[x])}, {"coords", opm::to_json(eps_coords[x])}};
    if (pure_index[x] >= 0) e["pure_state"] = pure_index[x];
    j[space.name(static_cast<Outcome>(x))] = e;
  }
  return Json{{"analytic", analytic}, {"eps", j}};
}

SharpFamily check_sharpness(const Model& model, const LinearRep& rep, const Tolerances& tol) {
  const auto& space = model.space;
  const size_t nx = space.size();
  SharpFamily s;
  if (model.kind == ModelKind::quantum) {
    s.analytic = true;
    const auto& vecs = model.quantum->outcome_vectors;
    for (size_t x = 0; x < nx; ++x) {
      StateVec e(static_cast<Eigen::Index>(nx));
      for (size_t y = 0; y < nx; ++y) e(static_cast<Eigen::Index>(y)) = std::norm(vecs[x].dot(vecs[y]));
      s.eps.push_back(e);
      s.eps_coords.push_back(rep.hermitian->coords(herm::projector(vecs[x])));
      s.pure_index.push_back(-1);
    }
    return s;
  }
  if (model.kind == ModelKind::spin_factor) {
    s.analytic = true;
    const auto& dirs = model.spin->outcome_directions;
    for (size_t x = 0; x < nx; ++x) {
      StateVec e(static_cast<Eigen::Index>(nx));
      for (size_t y = 0; y < nx; ++y) e(static_cast<Eigen::Index>(y)) = (1 + dirs[x].dot(dirs[y])) / 2;
      Vec c(dirs[x].size() + 1);
      c << 1, dirs[x];
      s.eps.push_back(e);
      s.eps_coords.push_back(c);
      s.pure_index.push_back(-1);
    }
    return s;
  }
  for (size_t x = 0; x < nx; ++x) {
    std::vector<int> face;
    for (size_t i = 0; i < model.pure_states.size(); ++i) {
      const StateVec& p = model.pure_states[i];
      if (std::fabs(p(static_cast<Eigen::Index>(x)) - 1) > tol.zero) continue;
      bool seen = false;
      for (int j : face) seen = seen || max_abs(model.pure_states[j] - p) <= tol.zero;
      if (!seen) face.push_back(static_cast<int>(i));
    }
    if (face.empty()) {
      throw Error(ErrorCode::NotUnital, "no state makes the outcome certain",
                  Json{{"outcome", space.name(static_cast<Outcome>(x))}});
    }
    if (face.size() > 1) {
      throw Error(ErrorCode::NotUnique, "several states make the outcome certain",
                  Json{{"outcome", space.name(static_cast<Outcome>(x))},
                       {"states", {opm::to_json(model.pure_states[face[0]]), opm::to_json(model.pure_states[face[1]])}},
                       {"pure_state_indices", {face[0], face[1]}}});
    }
    s.eps.push_back(model.pure_states[face[0]]);
    s.eps_coords.push_back(rep.state_coords[face[0]]);
    s.pure_index.push_back(face[0]);
  }
  return s;
}

// ---------------------------------------------------------------- dilations

Json Dilation::to_json() const {
  const auto& space = model.space;
  return Json{{"method", method},
              {"exact", exact},
              {"lp_solves", lp_solves},
              {"left_test", names_of(space, correlation.left)},
              {"right_test", names_of(space, correlation.right)},
              {"total_probability_residual", omega.total_probability_residual}};
}

namespace {

template <class T>
struct DilationLp {
  const std::vector<std::vector<T>>& pure;  // pure[p][x]
  const std::vector<T>& alpha;
  size_t nx;

  // Variables: omega(x, y) on allowed cells, then w[x][p], then z[y][p].
  lp::Feasibility<T> solve(const std::vector<std::vector<char>>& allowed, std::vector<long>& cell) const {
    const size_t np = pure.size();
    cell.assign(nx * nx, -1);
    long nvar = 0;
    for (size_t x = 0; x < nx; ++x) {
      for (size_t y = 0; y < nx; ++y) {
        if (allowed[x][y]) cell[x * nx + y] = nvar++;
      }
    }
    const long w0 = nvar;
    const long z0 = w0 + static_cast<long>(nx * np);
    nvar = z0 + static_cast<long>(nx * np);
    std::vector<std::vector<T>> a;
    std::vector<T> b;
    a.reserve(2 * nx * nx + nx);
    for (int side = 0; side < 2; ++side) {
      for (size_t x = 0; x < nx; ++x) {
        for (size_t y = 0; y < nx; ++y) {
          std::vector<T> row(static_cast<size_t>(nvar), T(0));
          if (cell[x * nx + y] >= 0) row[static_cast<size_t>(cell[x * nx + y])] = T(1);
          for (size_t p = 0; p < np; ++p) {
            if (side == 0) row[static_cast<size_t>(w0) + x * np + p] = T(-pure[p][y]);
            else row[static_cast<size_t>(z0) + y * np + p] = T(-pure[p][x]);
          }
          a.push_back(std::move(row));
          b.push_back(T(0));
        }
      }
    }
    for (size_t x = 0; x < nx; ++x) {
      std::vector<T> row(static_cast<size_t>(nvar), T(0));
      for (size_t p = 0; p < np; ++p) row[static_cast<size_t>(w0) + x * np + p] = T(1);
      a.push_back(std::move(row));
      b.push_back(alpha[x]);
    }
    return lp::solve_feasibility<T>(a, b);
  }
};

double as_double(double v) { return v; }
double as_double(const Rational& v) { return v.get_d(); }
Json as_json(double v) { return v; }
Json as_json(const Rational& v) { return to_string(v); }

template <class T>
Dilation search_dilation(const Model& model, const std::vector<std::vector<T>>& pure, const std::vector<T>& alpha,
                         bool exact, const Tolerances& tol, long max_solves) {
  const auto& space = model.space;
  const size_t nx = space.size();
  DilationLp<T> lp{pure, alpha, nx};
  Dilation d;
  d.exact = exact;
  d.method = exact ? "lp-exact" : "lp-float";
  Json last_witness;
  const auto& tests = space.tests();
  for (size_t i = 0; i < tests.size(); ++i) {
    for (size_t j = 0; j < tests.size(); ++j) {
      const Test& e = tests[i];
      Test f = tests[j];
      if (e.size() != f.size()) continue;
      std::sort(f.begin(), f.end());
      do {
        if (d.lp_solves >= max_solves) {
          throw Error(ErrorCode::TooLarge, "dilation search exceeded its budget", Json{{"solves", d.lp_solves}});
        }
        std::vector<std::vector<char>> allowed(nx, std::vector<char>(nx, 1));
        for (size_t k = 0; k < e.size(); ++k) {
          for (Outcome y : f) {
            if (y != f[k]) allowed[e[k]][y] = 0;
          }
        }
        std::vector<long> cell;
        auto res = lp.solve(allowed, cell);
        ++d.lp_solves;
        if (res.feasible) {
          Mat table = Mat::Zero(static_cast<Eigen::Index>(nx), static_cast<Eigen::Index>(nx));
          for (size_t x = 0; x < nx; ++x) {
            for (size_t y = 0; y < nx; ++y) {
              long c = cell[x * nx + y];
              if (c >= 0) table(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = as_double(res.x[c]);
            }
          }
          d.model = model;
          d.omega = marginals_and_conditionals(model, table, tol);
          d.correlation = Correlation{static_cast<int>(i), static_cast<int>(j), e, f};
          return d;
        }
        Json y = Json::array();
        for (const auto& v : res.farkas) y.push_back(as_json(v));
        Json bij = Json::object();
        for (size_t k = 0; k < e.size(); ++k) bij[space.name(e[k])] = space.name(f[k]);
        last_witness = Json{{"left_test", space.test_names(static_cast<int>(i))},
                            {"right_test", space.test_names(static_cast<int>(j))},
                            {"bijection", bij},
                            {"farkas", y}};
      } while (std::next_permutation(f.begin(), f.end()));
    }
  }
  last_witness["lp_solves"] = d.lp_solves;
  throw Error(ErrorCode::Infeasible, "no correlating dilation exists", last_witness);
}

Dilation quantum_dilation(const Model& model, const LinearRep& rep, const StateVec& alpha, const Tolerances& tol) {
  const int n = model.quantum->n;
  CMat rho = rep.hermitian->matrix(rep.state_coords_of(alpha));
  Eigen::SelfAdjointEigenSolver<CMat> es(rho);
  zoo::Frame eig;
  zoo::Frame conj;
  CMat root = CMat::Zero(n, n);
  for (int i = n - 1; i >= 0; --i) {
    CVec v = es.eigenvectors().col(i);
    eig.push_back(v);
    conj.push_back(v.conjugate());
    root += std::sqrt(std::max(0.0, es.eigenvalues()(i))) * v * v.adjoint();
  }
  auto [m1, left] = zoo::with_frame(model, eig, tol);
  auto [m2, right] = zoo::with_frame(m1, conj, tol);
  const auto& vecs = m2.quantum->outcome_vectors;
  const auto nx = static_cast<Eigen::Index>(vecs.size());
  // omega(x, y) = |x^* sqrt(rho) conj(y)|^2
  Mat table(nx, nx);
  for (Eigen::Index x = 0; x < nx; ++x) {
    CVec left_row = (vecs[x].adjoint() * root).transpose();
    for (Eigen::Index y = 0; y < nx; ++y) {
      table(x, y) = std::norm((left_row.array() * vecs[y].conjugate().array()).sum());
    }
  }
  Dilation d;
  d.model = m2;
  d.method = "schmidt-purification";
  d.omega = marginals_and_conditionals(m2, table, tol);
  d.correlation = Correlation{find_test(m2.space, left), find_test(m2.space, right), left, right};
  return d;
}

Dilation spin_dilation(const Model& model, const LinearRep& rep, const StateVec& alpha, const Tolerances& tol) {
  const int d = model.spin->d;
  Vec coords = rep.state_coords_of(alpha);
  Vec b = coords.tail(d) / coords(0);
  double len = b.norm();
  Vec w = Vec::Zero(d);
  if (len > tol.zero) w = b / len;
  else w(0) = 1;
  auto [m1, pair] = zoo::with_direction(model, w, tol);
  const auto& dirs = m1.spin->outcome_directions;
  const auto nx = static_cast<Eigen::Index>(dirs.size());
  const double tp = (1 + std::min(len, 1.0)) / 2;
  const double tm = 1 - tp;
  Mat table(nx, nx);
  for (Eigen::Index x = 0; x < nx; ++x) {
    double ep_x = (1 + w.dot(dirs[x])) / 2;
    for (Eigen::Index y = 0; y < nx; ++y) {
      double ep_y = (1 + w.dot(dirs[y])) / 2;
      table(x, y) = tp * ep_x * ep_y + tm * (1 - ep_x) * (1 - ep_y);
    }
  }
  Dilation out;
  out.model = m1;
  out.method = "spectral-mixture";
  out.omega = marginals_and_conditionals(m1, table, tol);
  std::vector<Outcome> e{pair.first, pair.second};
  int t = find_test(m1.space, e);
  out.correlation = Correlation{t, t, e, e};
  return out;
}

}  // namespace

Dilation find_correlating_dilation(const Model& model, const LinearRep& rep, const StateVec& alpha,
                                   const Tolerances& tol, long max_solves) {
  if (model.kind == ModelKind::quantum) return quantum_dilation(model, rep, alpha, tol);
  if (model.kind == ModelKind::spin_factor) return spin_dilation(model, rep, alpha, tol);
  const size_t nx = model.space.size();
  auto qa = rationalize(alpha);
  std::vector<std::vector<Rational>> qpure;
  bool exact = qa.has_value();
  for (const auto& p : model.pure_states) {
    if (!exact) break;
    auto q = rationalize(p);
    if (!q) exact = false;
    else qpure.push_back(*q);
  }
  if (exact) {
    Rational total(0);
    for (Outcome x : model.space.tests().front()) total += (*qa)[x];
    // The rational rounding of a floating state may break normalization.
    exact = total == 1;
  }
  if (exact) return search_dilation<Rational>(model, qpure, *qa, true, tol, max_solves);
  std::vector<std::vector<double>> pure;
  for (const auto& p : model.pure_states) pure.emplace_back(p.data(), p.data() + p.size());
  std::vector<double> a(alpha.data(), alpha.data() + nx);
  return search_dilation<double>(model, pure, a, false, tol, max_solves);
}

// ---------------------------------------------------------------- spectral decomposition

Json SpectralDecomposition::to_json() const {
  const auto& space = model.space;
  Json w = Json::object();
  for (size_t k = 0; k < outcomes.size(); ++k) w[space.name(outcomes[k])] = weights[k];
  return Json{{"test", names_of(space, outcomes)},
              {"weights", w},
              {"mass", mass},
              {"reconstruction_residual", reconstruction_residual},
              {"conditional_residual", conditional_residual},
              {"dilation", dilation.to_json()}};
}

SpectralDecomposition spectral_decompose(const Model& model, const LinearRep& rep, const SharpFamily& sharp,
                                         const Vec& mu, const Tolerances& tol) {
  SpectralDecomposition out;
  out.mass = rep.unit.dot(mu);
  if (!(out.mass > tol.zero)) {
    throw Error(ErrorCode::NotInOmega, "vector does not pair positively with the unit", Json{{"mass", out.mass}});
  }
  Vec normalized = mu / out.mass;
  StateVec alpha = rep.values_of(normalized);
  for (Eigen::Index x = 0; x < alpha.size(); ++x) {
    if (alpha(x) < -tol.sum || alpha(x) > 1 + tol.sum) {
      throw Error(ErrorCode::NotInOmega, "vector is not a positive multiple of a state",
                  Json{{"outcome", model.space.name(static_cast<Outcome>(x))}, {"value", alpha(x)}});
    }
    alpha(x) = std::clamp(alpha(x), 0.0, 1.0);
  }
  out.dilation = find_correlating_dilation(model, rep, alpha, tol);
  out.model = out.dilation.model;
  if (out.model.space.size() != model.space.size()) {
    out.rep = build_linear_rep(out.model, tol);
    out.sharp = check_sharpness(out.model, out.rep, tol);
  } else {
    out.rep = rep;
    out.sharp = sharp;
  }
  const auto& corr = out.dilation.correlation;
  const auto& omega = out.dilation.omega;
  StateVec values = out.rep.values_of(normalized);
  out.test = corr.left_test;
  out.outcomes = corr.left;
  Vec rebuilt = Vec::Zero(mu.size());
  for (size_t k = 0; k < corr.left.size(); ++k) {
    Outcome x = corr.left[k];
    Outcome y = corr.right[k];
    double w = out.mass * values(x);
    out.weights.push_back(w);
    rebuilt += w * out.sharp.eps_coords[x];
    if (omega.right_marginal(y) <= tol.zero || !omega.left_given_right[y]) continue;
    double gap = max_abs(*omega.left_given_right[y] - out.sharp.eps[x]);
    out.conditional_residual = std::max(out.conditional_residual, gap);
    if (gap > tol.sum) {
      throw Error(ErrorCode::ConditionalMismatch, "a conditional of the dilation is not the sharp state",
                  Json{{"outcome", out.model.space.name(x)},
                       {"partner", out.model.space.name(y)},
                       {"conditional", opm::to_json(*omega.left_given_right[y])},
                       {"sharp", opm::to_json(out.sharp.eps[x])},
                       {"gap", gap}});
    }
  }
  out.reconstruction_residual = (rebuilt - mu).norm();
  return out;
}

// ---------------------------------------------------------------- filters

ConeMap make_filter(const Model& model, const LinearRep& rep, const std::vector<Outcome>& test,
                    const std::vector<double>& f, const Tolerances& tol) {
  if (model.filter == FilterCapability::none) {
    throw Error(ErrorCode::NoCapability, "model has no filter family", Json{{"kind", to_string(model.kind)}});
  }
  if (test.size() != f.size() || find_test(model.space, test) < 0) {
    throw Error(ErrorCode::InvalidArgument, "filters need one factor per outcome of a test");
  }
  for (size_t k = 0; k < f.size(); ++k) {
    if (!(f[k] > 0)) {
      throw Error(ErrorCode::ZeroAttenuation, "attenuation factors must be positive",
                  Json{{"outcome", model.space.name(test[k])}, {"factor", f[k]}});
    }
    if (f[k] > 1 + tol.sum) {
      throw Error(ErrorCode::InvalidArgument, "attenuation factors must not exceed 1",
                  Json{{"outcome", model.space.name(test[k])}, {"factor", f[k]}});
    }
  }
  const int dim = rep.dim;
  Mat t;
  if (model.filter == FilterCapability::diagonal) {
    if (static_cast<int>(test.size()) != dim) {
      throw Error(ErrorCode::NoCapability, "diagonal filters need a test spanning the effect space");
    }
    Mat b(dim, dim);
    Vec diag(dim);
    for (int k = 0; k < dim; ++k) {
      b.col(k) = rep.effect_coords[test[k]];
      diag(k) = f[k];
    }
    t = b * diag.asDiagonal() * b.inverse();
  } else if (model.filter == FilterCapability::congruence) {
    const int n = model.quantum->n;
    CMat root = CMat::Zero(n, n);
    for (size_t k = 0; k < test.size(); ++k) {
      root += std::sqrt(f[k]) * herm::projector(model.quantum->outcome_vectors[test[k]]);
    }
    const auto& basis = *rep.hermitian;
    t.resize(dim, dim);
    for (int k = 0; k < dim; ++k) t.col(k) = basis.coords(root * basis.elements()[k] * root);
  } else {
    const Vec& w = model.spin->outcome_directions[test[0]];
    const double kappa = std::sqrt(f[0] * f[1]);
    const double eta = 0.5 * std::log(f[0] / f[1]);
    const int d = model.spin->d;
    Mat boost = Mat::Identity(d + 1, d + 1);
    boost(0, 0) = std::cosh(eta);
    boost.block(0, 1, 1, d) = std::sinh(eta) * w.transpose();
    boost.block(1, 0, d, 1) = std::sinh(eta) * w;
    boost.bottomRightCorner(d, d) += (std::cosh(eta) - 1) * w * w.transpose();
    t = kappa * boost;
  }
  double miss = 0;
  for (size_t k = 0; k < test.size(); ++k) {
    const Vec& x = rep.effect_coords[test[k]];
    miss = std::max(miss, (t * x - f[k] * x).norm() / std::max(1.0, x.norm()));
  }
  if (miss > tol.map) {
    throw Error(ErrorCode::MethodDisagreement, "filter does not attenuate its test as prescribed",
                Json{{"residual", miss}});
  }
  ConeMap map = is_order_automorphism(t, rep.cone_Vstar, tol);
  map.certificate["attenuation_residual"] = miss;
  return map;
}

// ---------------------------------------------------------------- self-duality

InnerProduct standard_inner_product(const Model& model, const LinearRep& rep, const Tolerances& tol) {
  Mat gram = Mat::Identity(rep.dim, rep.dim);
  if (model.kind == ModelKind::square_bit) {
    // Effects in the (t, x, y) frame where states are (1, s1, s2) with |s_i| <= 1.
    const auto& space = model.space;
    Mat target(3, 4);
    Mat effects(rep.dim, 4);
    const char* names[] = {"x0", "x1", "y0", "y1"};
    const double frame[4][3] = {{0.5, 0.5, 0}, {0.5, -0.5, 0}, {0.5, 0, 0.5}, {0.5, 0, -0.5}};
    for (int k = 0; k < 4; ++k) {
      effects.col(k) = rep.effect_coords[space.index(names[k])];
      for (int i = 0; i < 3; ++i) target(i, k) = frame[k][i];
    }
    Mat m = target * effects.completeOrthogonalDecomposition().pseudoInverse();
    gram = m.transpose() * m;
  }
  InnerProduct ip = make_inner_product(gram, rep.cone_Vstar, "standard", tol, rationalize(gram));
  return ip;
}

Json JordanDecomposition::to_json() const {
  return Json{{"plus", opm::to_json(plus)},
              {"minus", opm::to_json(minus)},
              {"pairing", pairing},
              {"difference", difference},
              {"unique", unique}};
}

JordanDecomposition orthogonal_jordan_decompose(const Vec& a, const Cone& cone, const InnerProduct& ip,
                                                const Tolerances& tol) {
  JordanDecomposition j;
  Projection p = cone_project(a, cone, ip, tol);
  j.plus = p.point;
  j.minus = p.point - a;
  const double scale = std::max(1.0, ip.norm(a));
  j.pairing = ip(j.plus, j.minus);
  if (!cone.contains(j.minus, tol.interior)) {
    throw Error(ErrorCode::NotJordan, "the projection residual leaves the cone",
                Json{{"vector", opm::to_json(a)},
                     {"plus", opm::to_json(j.plus)},
                     {"minus", opm::to_json(j.minus)},
                     {"margin", cone.margin(j.minus)}});
  }
  if (std::fabs(j.pairing) > std::max(tol.kkt, p.kkt_residual) * scale * scale * 10) {
    throw Error(ErrorCode::NoConvergence, "projection is not orthogonal", Json{{"pairing", j.pairing}});
  }
  Projection alt = cone_project_alternate(a, cone, ip, tol);
  j.difference = ip.norm(alt.point - p.point);
  j.unique = j.difference < tol.unique * scale;
  return j;
}

Json SelfDualityEvidence::to_json() const {
  auto one = [](const MethodVerdict& m) { return Json{{"status", m.status}, {"evidence", m.evidence}}; };
  return Json{{"dual_cone", one(dual_cone)},
              {"pure_states", one(pure_states)},
              {"jordan", one(jordan)},
              {"self_dual", self_dual}};
}

namespace {

// Compares the state cone with its dual under the form induced on V by the
// inverse Gram matrix. V*_+ equals its ip-dual exactly when V_+ does.
MethodVerdict dual_cone_method(const LinearRep& rep, const InnerProduct& ip, const Tolerances& tol) {
  MethodVerdict m;
  std::optional<QMat> exact_inverse;
  if (ip.exact_gram) exact_inverse = q_inverse(*ip.exact_gram);
  Mat inverse = exact_inverse ? to_double(*exact_inverse) : Mat(ip.gram.inverse());
  InnerProduct induced = make_inner_product(inverse, rep.cone_V, "induced on states", tol, exact_inverse);
  Cone dual = dual_cone(rep.cone_V, induced);
  ConeEquality eq = compare_cones(dual, rep.cone_V, tol);
  m.status = eq.equal ? "holds" : "fails";
  m.evidence = Json{{"space", "states"}, {"exact", eq.exact}, {"cone", rep.cone_V.describe()}, {"dual", dual.describe()}};
  if (!eq.equal) {
    m.evidence["witness"] = eq.witness;
    m.evidence["witness"]["of"] = eq.witness.value("of", "") == "first" ? "dual" : "cone";
  }
  return m;
}

MethodVerdict pure_state_method(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                                const EmbeddingResult* emb, const Tolerances& tol) {
  MethodVerdict m;
  if (!emb || !ip.minimizing || !*ip.minimizing) {
    m.evidence = Json{{"reason", "needs a minimizing inner product and its embedding"}};
    return m;
  }
  if (!ip.positive_on_cone) {
    m.status = "fails";
    m.evidence = Json{{"reason", "inner product is negative on the cone"}};
    return m;
  }
  std::vector<StateVec> outcome_states;
  try {
    for (size_t x = 0; x < model.space.size(); ++x) {
      outcome_states.push_back(outcome_state(model, ip, *emb, static_cast<Outcome>(x), tol));
    }
  } catch (const Error& e) {
    m.status = "fails";
    m.evidence = Json{{"reason", "an outcome state is invalid"}, {"error", e.to_json()}};
    return m;
  }
  for (size_t i = 0; i < model.pure_states.size(); ++i) {
    bool found = false;
    for (const auto& s : outcome_states) found = found || max_abs(s - model.pure_states[i]) <= tol.sum;
    if (!found) {
      m.status = "fails";
      m.evidence = Json{{"reason", "a pure state is not an outcome state"}, {"pure_state", i}};
      return m;
    }
  }
  std::vector<Vec> rays = rep.state_coords;
  if (rep.cone_V.kind() != Cone::Kind::polyhedral) {
    for (const auto& g : rep.cone_V.probe_generators()) rays.push_back(g);
  }
  Eigen::LLT<Mat> llt(ip.gram);
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& s : rays) {
    Vec a = llt.solve(s);
    double mgn = rep.cone_Vstar.margin(a) / std::max(1.0, a.norm());
    worst = std::min(worst, mgn);
    if (mgn < -tol.sum) {
      m.status = "fails";
      m.evidence = Json{{"reason", "a state is not the ip image of a positive effect"},
                        {"state", opm::to_json(s)},
                        {"preimage", opm::to_json(a)},
                        {"margin", mgn}};
      return m;
    }
  }
  m.status = "holds";
  m.evidence = Json{{"pure_states_matched", model.pure_states.size()}, {"rays_checked", rays.size()},
                    {"min_margin", worst}};
  return m;
}

MethodVerdict jordan_method(const LinearRep& rep, const InnerProduct& ip, const Cone& dual, const Tolerances& tol,
                            std::uint64_t seed) {
  MethodVerdict m;
  const int dim = rep.dim;
  const Cone& cone = rep.cone_Vstar;
  std::vector<Vec> probes;
  for (int k = 0; k < dim; ++k) {
    probes.push_back(Vec::Unit(dim, k));
    probes.push_back(-Vec::Unit(dim, k));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < 8; ++k) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    probes.push_back(v);
  }
  // A negated extreme ray g of the dual has g itself as the residual of its
  // projection, so these probes detect any dual ray outside the cone.
  auto dual_rays = dual.probe_generators();
  for (size_t k = 0; k < dual_rays.size() && k < 32; ++k) probes.push_back(-dual_rays[k]);
  auto rays = cone.probe_generators();
  for (size_t k = 0; k + 1 < rays.size() && k < 16; ++k) probes.push_back(rays[k] - rays[k + 1]);

  double worst_pairing = 0;
  double worst_difference = 0;
  for (const auto& a : probes) {
    try {
      JordanDecomposition j = orthogonal_jordan_decompose(a, cone, ip, tol);
      worst_pairing = std::max(worst_pairing, std::fabs(j.pairing));
      worst_difference = std::max(worst_difference, j.difference);
      if (!j.unique) {
        m.status = "fails";
        m.evidence = Json{{"reason", "two solvers found different decompositions"}, {"decomposition", j.to_json()}};
        return m;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotJordan) throw;
      m.status = "fails";
      m.evidence = Json{{"reason", "a vector has no orthogonal Jordan decomposition"}, {"witness", e.witness()}};
      return m;
    }
  }
  m.status = "holds";
  m.evidence = Json{{"probes", probes.size()}, {"max_pairing", worst_pairing}, {"max_difference", worst_difference}};
  return m;
}

}  // namespace

SelfDualityEvidence certify_self_duality(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                                         const EmbeddingResult* emb, const Tolerances& tol, std::uint64_t seed) {
  SelfDualityEvidence ev;
  Cone dual = dual_cone(rep.cone_Vstar, ip);
  ev.dual_cone = dual_cone_method(rep, ip, tol);
  ev.pure_states = pure_state_method(model, rep, ip, emb, tol);
  ev.jordan = jordan_method(rep, ip, dual, tol, seed);
  std::string seen;
  for (const MethodVerdict* m : {&ev.dual_cone, &ev.pure_states, &ev.jordan}) {
    if (!m->ran()) continue;
    if (seen.empty()) seen = m->status;
    else if (seen != m->status) {
      throw Error(ErrorCode::MethodDisagreement, "self-duality methods disagree", ev.to_json());
    }
  }
  ev.self_dual = seen == "holds";
  return ev;
}

// ---------------------------------------------------------------- homogeneity

Json HomogeneityResult::to_json(const TestSpace& space) const {
  return Json{{"from_test", names_of(space, from_test)},
              {"to_test", names_of(space, to_test)},
              {"t", t},
              {"t_max", t_max},
              {"residual", residual},
              {"matrix", opm::to_json(map.matrix)},
              {"certificate", map.certificate}};
}

namespace {

void require_interior(const Model& model, const LinearRep& rep, const Vec& a, const char* label,
                      const Tolerances& tol) {
  if (rep.cone_Vstar.kind() != Cone::Kind::polyhedral) {
    double mgn = rep.cone_Vstar.margin(a);
    if (!(mgn > tol.interior)) {
      throw Error(ErrorCode::NotInterior, "effect is not interior", Json{{"effect", label}, {"margin", mgn}});
    }
    return;
  }
  for (size_t i = 0; i < rep.state_coords.size(); ++i) {
    double v = a.dot(rep.state_coords[i]);
    if (!(v > tol.interior)) {
      throw Error(ErrorCode::NotInterior, "effect vanishes on a pure state",
                  Json{{"effect", label}, {"pure_state", i}, {"value", v}});
    }
  }
  (void)model;
}

// Coefficients of a in the effects of a test.
Vec test_coefficients(const LinearRep& rep, const std::vector<Outcome>& test, const Vec& a, const char* label,
                      const Tolerances& tol) {
  Mat b(rep.dim, static_cast<Eigen::Index>(test.size()));
  for (size_t k = 0; k < test.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = rep.effect_coords[test[k]];
  Vec c = b.colPivHouseholderQr().solve(a);
  double res = (b * c - a).norm();
  if (res > tol.map * std::max(1.0, a.norm())) {
    throw Error(ErrorCode::Degenerate, "effect is not a combination of its spectral test",
                Json{{"effect", label}, {"residual", res}});
  }
  return c;
}

}  // namespace

HomogeneityResult homogeneity_map(const Model& model, const LinearRep& rep, const InnerProduct& ip,
                                  const SharpFamily& sharp, const Vec& a, const Vec& b, const Tolerances& tol) {
  require_interior(model, rep, a, "a", tol);
  require_interior(model, rep, b, "b", tol);
  SpectralDecomposition da = spectral_decompose(model, rep, sharp, ip.gram * a, tol);
  SpectralDecomposition db = spectral_decompose(da.model, da.rep, da.sharp, ip.gram * b, tol);
  const Model& m = db.model;
  const LinearRep& r = db.rep;
  HomogeneityResult out;
  out.model = m;
  out.from_test = da.outcomes;
  out.to_test = db.outcomes;
  Vec mu = test_coefficients(r, out.from_test, a, "a", tol);
  Vec nu = test_coefficients(r, out.to_test, b, "b", tol);

  // g with g(E) = F, and the image of each outcome of E.
  Mat action;
  std::vector<Outcome> image;
  if (m.kind == ModelKind::quantum) {
    const auto& vecs = m.quantum->outcome_vectors;
    const int n = m.quantum->n;
    CMat u = CMat::Zero(n, n);
    for (size_t k = 0; k < out.from_test.size(); ++k) u += vecs[out.to_test[k]] * vecs[out.from_test[k]].adjoint();
    action = r.hermitian->conjugation_action(u);
    image = out.to_test;
  } else if (m.kind == ModelKind::spin_factor) {
    const Vec& from = m.spin->outcome_directions[out.from_test[0]];
    const Vec& to = m.spin->outcome_directions[out.to_test[0]];
    const int d = m.spin->d;
    Mat q = Mat::Identity(d, d);
    Vec v = from - to;
    if (v.norm() > tol.zero) q -= 2 * v * v.transpose() / v.squaredNorm();
    action = Mat::Identity(d + 1, d + 1);
    action.bottomRightCorner(d, d) = q;
    image = out.to_test;
  } else {
    if (!m.group) throw Error(ErrorCode::NoGroupMatch, "model has no symmetry group");
    auto actions = effect_actions(m, r, tol);
    std::vector<Outcome> target = out.to_test;
    std::sort(target.begin(), target.end());
    for (size_t e = 0; e < m.group->elements.size() && image.empty(); ++e) {
      const auto& g = m.group->elements[e];
      std::vector<Outcome> img;
      for (Outcome x : out.from_test) img.push_back(g[x]);
      std::vector<Outcome> sorted = img;
      std::sort(sorted.begin(), sorted.end());
      if (sorted == target) {
        image = img;
        action = actions[e];
      }
    }
    if (image.empty()) {
      throw Error(ErrorCode::NoGroupMatch, "no group element maps one spectral test onto the other",
                  Json{{"from", names_of(m.space, out.from_test)}, {"to", names_of(m.space, out.to_test)}});
    }
  }
  for (size_t k = 0; k < out.from_test.size(); ++k) {
    auto pos = std::find(out.to_test.begin(), out.to_test.end(), image[k]) - out.to_test.begin();
    double num = nu(pos);
    double den = mu(static_cast<Eigen::Index>(k));
    if (!(den > 0) || !(num > 0)) {
      throw Error(ErrorCode::NotInterior, "spectral weights must be positive", Json{{"a", den}, {"b", num}});
    }
    out.t.push_back(num / den);
  }
  out.t_max = *std::max_element(out.t.begin(), out.t.end());
  std::vector<double> scaled;
  for (double v : out.t) scaled.push_back(v / out.t_max);
  ConeMap phi = make_filter(m, r, out.from_test, scaled, tol);
  Mat total = out.t_max * action * phi.matrix;
  out.residual = (total * a - b).norm();
  if (out.residual > tol.map * std::max(1.0, b.norm())) {
    throw Error(ErrorCode::MethodDisagreement, "constructed map misses its target", Json{{"residual", out.residual}});
  }
  out.map = is_order_automorphism(total, r.cone_Vstar, tol);
  out.map.certificate["residual"] = out.residual;
  out.map.certificate["filter"] = phi.certificate;
  return out;
}

// ---------------------------------------------------------------- isomorphism states

Json IsomorphismCheck::to_json() const {
  return Json{{"holds", holds},
              {"condition", condition},
              {"fit_residual", fit_residual},
              {"matrix", opm::to_json(w)},
              {"diagnostics", diagnostics}};
}

IsomorphismCheck is_isomorphism_state(const Model& model, const LinearRep& rep, const Mat& table,
                                      const Tolerances& tol) {
  IsomorphismCheck c;
  Mat e = rep.effect_matrix();
  Mat normal = e * e.transpose();
  Eigen::FullPivLU<Mat> lu(normal);
  if (lu.rank() < rep.dim) {
    c.diagnostics = Json{{"reason", "outcome effects do not span V*"}};
    return c;
  }
  Mat p = lu.solve(e);
  c.w = p * table * p.transpose();
  c.fit_residual = (e.transpose() * c.w * e - table).cwiseAbs().maxCoeff();
  if (c.fit_residual > tol.sum) {
    c.diagnostics = Json{{"reason", "table is not bilinear in the effects"}};
    return c;
  }
  Eigen::JacobiSVD<Mat> svd(c.w);
  const auto& sv = svd.singularValues();
  c.condition = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(c.condition <= tol.condition_cap)) {
    c.diagnostics = Json{{"reason", "induced map is singular or ill-conditioned"},
                         {"rank", Eigen::FullPivLU<Mat>(c.w).rank()}};
    return c;
  }
  try {
    ConeMap map = certify_order_isomorphism(c.w, rep.cone_Vstar, rep.cone_V, tol);
    c.holds = true;
    c.diagnostics = Json{{"certificate", map.certificate}};
  } catch (const Error& err) {
    c.diagnostics = Json{{"reason", "induced map is not an order isomorphism"}, {"error", err.to_json()}};
  }
  (void)model;
  return c;
}

ConeMap homogeneity_via_steering(const Model& model, const LinearRep& rep, const Mat& omega_a,
                                 const Mat& omega_b, const Tolerances& tol) {
  IsomorphismCheck ca = is_isomorphism_state(model, rep, omega_a, tol);
  if (!ca.holds) throw Error(ErrorCode::NotIsomorphismState, "first state is not an isomorphism state", ca.diagnostics);
  IsomorphismCheck cb = is_isomorphism_state(model, rep, omega_b, tol);
  if (!cb.holds) throw Error(ErrorCode::NotIsomorphismState, "second state is not an isomorphism state", cb.diagnostics);
  Mat t = cb.w * ca.w.inverse();
  Vec a = ca.w * rep.unit;
  Vec b = cb.w * rep.unit;
  double residual = (t * a - b).norm();
  ConeMap map = is_order_automorphism(t, rep.cone_V, tol);
  map.certificate["residual"] = residual;
  map.certificate["from"] = opm::to_json(a);
  map.certificate["to"] = opm::to_json(b);
  return map;
}

}  // namespace opm
