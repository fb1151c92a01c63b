#include "opm/cone.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "opm/polyhedral.hpp"

namespace opm {

namespace {

using DRows = std::vector<std::vector<double>>;

DRows to_rows(const std::vector<Vec>& vs) {
  DRows rows;
  for (const auto& v : vs) rows.emplace_back(v.data(), v.data() + v.size());
  return rows;
}

std::vector<Vec> to_vecs(const DRows& rows) {
  std::vector<Vec> out;
  for (const auto& r : rows) out.push_back(Eigen::Map<const Vec>(r.data(), static_cast<Eigen::Index>(r.size())));
  return out;
}

std::vector<Vec> to_vecs(const QMat& rows) {
  std::vector<Vec> out;
  for (const auto& r : rows) out.push_back(to_double(r));
  return out;
}

std::vector<Vec> unit_rows(const std::vector<Vec>& vs) {
  std::vector<Vec> out;
  for (const auto& v : vs) out.push_back(v / v.norm());
  return out;
}

Mat identity_or(const Mat& m, int dim) { return m.size() == 0 ? Mat(Mat::Identity(dim, dim)) : m; }

constexpr std::uint64_t kProbeSeed = 0x9e3779b97f4a7c15ULL;
constexpr int kProbeSamples = 64;

}  // namespace

Cone Cone::from_generators(const std::vector<Vec>& generators, std::optional<QMat> exact) {
  if (generators.empty() && (!exact || exact->empty())) {
    throw Error(ErrorCode::NotFullDimensional, "cone has no generators");
  }
  Cone c;
  c.kind_ = Kind::polyhedral;
  if (exact) {
    for (const auto& g : *exact) {
      if (q_is_zero(g)) throw Error(ErrorCode::InvalidArgument, "zero generator");
    }
    c.dim_ = static_cast<int>(exact->front().size());
    auto facets = polyhedral::extreme_rays(*exact, static_cast<size_t>(c.dim_));
    if (!facets) throw Error(ErrorCode::NotFullDimensional, "generators do not span the ambient space");
    auto rays = polyhedral::extreme_rays(*facets, static_cast<size_t>(c.dim_));
    if (!rays) throw Error(ErrorCode::NotFullDimensional, "cone has a lineality space");
    c.exact_facets_ = *facets;
    c.exact_generators_ = *rays;
    c.generators_ = to_vecs(*rays);
    c.facets_ = unit_rows(to_vecs(*facets));
    return c;
  }
  for (const auto& g : generators) {
    if (g.norm() == 0) throw Error(ErrorCode::InvalidArgument, "zero generator");
  }
  c.dim_ = static_cast<int>(generators.front().size());
  auto facets = polyhedral::extreme_rays(to_rows(generators), static_cast<size_t>(c.dim_));
  if (!facets) throw Error(ErrorCode::NotFullDimensional, "generators do not span the ambient space");
  auto rays = polyhedral::extreme_rays(*facets, static_cast<size_t>(c.dim_));
  if (!rays) throw Error(ErrorCode::NotFullDimensional, "cone has a lineality space");
  c.generators_ = to_vecs(*rays);
  c.facets_ = unit_rows(to_vecs(*facets));
  return c;
}

Cone Cone::from_facets(const std::vector<Vec>& facets, std::optional<QMat> exact, int dim) {
  if (exact) {
    if (dim < 0) dim = static_cast<int>(exact->front().size());
    auto rays = polyhedral::extreme_rays(*exact, static_cast<size_t>(dim));
    if (!rays) throw Error(ErrorCode::NotFullDimensional, "cone has a lineality space");
    return from_generators({}, *rays);
  }
  if (dim < 0) dim = static_cast<int>(facets.front().size());
  auto rays = polyhedral::extreme_rays(to_rows(facets), static_cast<size_t>(dim));
  if (!rays) throw Error(ErrorCode::NotFullDimensional, "cone has a lineality space");
  return from_generators(to_vecs(*rays));
}

Cone Cone::psd(int n, Mat transform) {
  Cone c;
  c.kind_ = Kind::psd;
  c.n_ = n;
  c.dim_ = n * n;
  c.basis_ = std::make_shared<herm::HermitianBasis>(n);
  c.transform_ = identity_or(transform, c.dim_);
  return c;
}

Cone Cone::second_order(int d, Mat transform) {
  Cone c;
  c.kind_ = Kind::second_order;
  c.n_ = d;
  c.dim_ = d + 1;
  c.transform_ = identity_or(transform, c.dim_);
  return c;
}

std::string Cone::describe() const {
  switch (kind_) {
    case Kind::polyhedral:
      return "polyhedral(" + std::to_string(generators_.size()) + " rays, " +
             std::to_string(facets_.size()) + " facets)";
    case Kind::psd: return "psd(" + std::to_string(n_) + ")";
    case Kind::second_order: return "second_order(" + std::to_string(n_) + ")";
  }
  return "";
}

double Cone::standard_margin(const Vec& k) const {
  if (kind_ == Kind::psd) {
    Eigen::SelfAdjointEigenSolver<CMat> es(basis_->matrix(k), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }
  return k(0) - k.tail(k.size() - 1).norm();
}

Vec Cone::standard_project(const Vec& k) const {
  if (kind_ == Kind::psd) {
    Eigen::SelfAdjointEigenSolver<CMat> es(basis_->matrix(k));
    Vec ev = es.eigenvalues().cwiseMax(0.0);
    CMat p = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    return basis_->coords(p);
  }
  double t = k(0);
  Vec x = k.tail(k.size() - 1);
  double r = x.norm();
  if (r <= t) return k;
  if (r <= -t) return Vec::Zero(k.size());
  Vec out(k.size());
  double s = (t + r) / 2;
  out(0) = s;
  out.tail(k.size() - 1) = x * (s / r);
  return out;
}

double Cone::margin(const Vec& a) const {
  if (kind_ == Kind::polyhedral) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& h : facets_) m = std::min(m, h.dot(a));
    return m;
  }
  return standard_margin(transform_ * a);
}

bool Cone::contains(const Vec& a, double tol) const {
  return margin(a) >= -tol * std::max(1.0, a.norm());
}

bool Cone::contains_exact(const QVec& a) const {
  if (!exact_facets_) throw Error(ErrorCode::InvalidArgument, "cone has no exact description");
  for (const auto& h : *exact_facets_) {
    if (sgn(q_dot(h, a)) < 0) return false;
  }
  return true;
}

std::vector<Vec> Cone::probe_generators() const {
  if (kind_ == Kind::polyhedral) return generators_;
  std::vector<Vec> std_rays;
  std::mt19937_64 rng(kProbeSeed);
  if (kind_ == Kind::psd) {
    const Complex i(0, 1);
    for (int a = 0; a < n_; ++a) {
      CVec e = CVec::Zero(n_);
      e(a) = 1;
      std_rays.push_back(basis_->coords(herm::projector(e)));
      for (int b = a + 1; b < n_; ++b) {
        CVec s = CVec::Zero(n_);
        s(a) = 1;
        s(b) = 1;
        std_rays.push_back(basis_->coords(herm::projector(s)));
        s(b) = i;
        std_rays.push_back(basis_->coords(herm::projector(s)));
      }
    }
    for (int k = 0; k < kProbeSamples; ++k) {
      std_rays.push_back(basis_->coords(herm::projector(herm::haar_state(n_, rng))));
    }
  } else {
    const int d = n_;
    for (int a = 0; a < d; ++a) {
      for (double sign : {1.0, -1.0}) {
        Vec r = Vec::Zero(d + 1);
        r(0) = 1;
        r(a + 1) = sign;
        std_rays.push_back(r);
      }
    }
    std::normal_distribution<double> normal;
    for (int k = 0; k < kProbeSamples; ++k) {
      Vec w(d);
      for (int a = 0; a < d; ++a) w(a) = normal(rng);
      Vec r(d + 1);
      r(0) = 1;
      r.tail(d) = w / w.norm();
      std_rays.push_back(r);
    }
  }
  Eigen::PartialPivLU<Mat> lu(transform_);
  std::vector<Vec> out;
  for (const auto& k : std_rays) out.push_back(lu.solve(k));
  return out;
}

double InnerProduct::norm(const Vec& a) const { return std::sqrt(std::max(0.0, (*this)(a, a))); }

Json InnerProduct::to_json() const {
  Json j{{"origin", origin},
         {"gram", opm::to_json(gram)},
         {"positive_definite", positive_definite},
         {"positive_on_cone", positive_on_cone},
         {"invariant", invariant}};
  j["minimizing"] = minimizing ? Json(*minimizing) : Json(nullptr);
  if (lambda) j["lambda"] = *lambda;
  if (exact_gram) {
    Json rows = Json::array();
    for (const auto& r : *exact_gram) {
      Json row = Json::array();
      for (const auto& q : r) row.push_back(to_string(q));
      rows.push_back(row);
    }
    j["exact_gram"] = rows;
  }
  return j;
}

InnerProduct make_inner_product(const Mat& gram, const Cone& cone, std::string origin,
                                const Tolerances& tol, std::optional<QMat> exact) {
  InnerProduct ip;
  ip.gram = gram;
  ip.exact_gram = std::move(exact);
  ip.origin = std::move(origin);
  double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());
  if ((gram - gram.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "Gram matrix is not symmetric");
  }
  Eigen::LLT<Mat> llt(gram);
  ip.positive_definite =
      llt.info() == Eigen::Success &&
      Eigen::SelfAdjointEigenSolver<Mat>(gram, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() >
          1e-13 * scale;
  bool positive = true;
  if (ip.exact_gram && cone.exact()) {
    const auto& g = *cone.exact_generators();
    for (size_t i = 0; i < g.size() && positive; ++i) {
      QVec gi = q_multiply(*ip.exact_gram, g[i]);
      for (size_t j = i; j < g.size(); ++j) {
        if (sgn(q_dot(gi, g[j])) < 0) {
          positive = false;
          break;
        }
      }
    }
  } else {
    auto g = cone.probe_generators();
    for (size_t i = 0; i < g.size() && positive; ++i) {
      for (size_t j = i; j < g.size(); ++j) {
        if (ip(g[i], g[j]) < -tol.zero * g[i].norm() * g[j].norm()) {
          positive = false;
          break;
        }
      }
    }
  }
  ip.positive_on_cone = positive;
  return ip;
}

Mat LinearRep::effect_matrix() const {
  Mat e(dim, static_cast<Eigen::Index>(effect_coords.size()));
  for (size_t x = 0; x < effect_coords.size(); ++x) e.col(static_cast<Eigen::Index>(x)) = effect_coords[x];
  return e;
}

Vec LinearRep::state_coords_of(const StateVec& values) const {
  Mat e = effect_matrix();
  Mat normal = e * e.transpose();
  Eigen::FullPivLU<Mat> lu(normal);
  if (lu.rank() < dim) {
    throw Error(ErrorCode::NotFullDimensional, "outcome effects do not span V*; state is underdetermined",
                Json{{"rank", lu.rank()}, {"dim", dim}});
  }
  return lu.solve(e * values);
}

StateVec LinearRep::values_of(const Vec& state) const { return effect_matrix().transpose() * state; }

Json LinearRep::to_json(const TestSpace& space) const {
  Json j{{"dim", dim}, {"unit", opm::to_json(unit)}, {"exact", exact()}};
  j["basis"] = basis;
  Json eff = Json::object();
  for (size_t x = 0; x < effect_coords.size(); ++x) eff[space.name(static_cast<Outcome>(x))] = opm::to_json(effect_coords[x]);
  j["effects"] = eff;
  j["cone_V"] = cone_V.describe();
  j["cone_Vstar"] = cone_Vstar.describe();
  return j;
}

namespace {

LinearRep rep_quantum(const Model& model) {
  const auto& q = *model.quantum;
  LinearRep rep;
  rep.kind = ModelKind::quantum;
  rep.hermitian = std::make_shared<herm::HermitianBasis>(q.n);
  rep.dim = q.n * q.n;
  for (const auto& v : q.pure_vectors) rep.state_coords.push_back(rep.hermitian->coords(herm::projector(v)));
  for (const auto& v : q.outcome_vectors) rep.effect_coords.push_back(rep.hermitian->coords(herm::projector(v)));
  rep.unit = rep.hermitian->coords(CMat::Identity(q.n, q.n));
  rep.cone_V = Cone::psd(q.n);
  rep.cone_Vstar = Cone::psd(q.n);
  return rep;
}

LinearRep rep_spin(const Model& model) {
  const auto& s = *model.spin;
  LinearRep rep;
  rep.kind = ModelKind::spin_factor;
  rep.dim = s.d + 1;
  for (const auto& b : s.pure_directions) {
    Vec c(s.d + 1);
    c(0) = 1;
    c.tail(s.d) = b;
    rep.state_coords.push_back(c);
  }
  for (const auto& x : s.outcome_directions) {
    Vec c(s.d + 1);
    c(0) = 0.5;
    c.tail(s.d) = x / 2;
    rep.effect_coords.push_back(c);
  }
  rep.unit = Vec::Zero(s.d + 1);
  rep.unit(0) = 1;
  rep.cone_V = Cone::second_order(s.d);
  rep.cone_Vstar = Cone::second_order(s.d);
  return rep;
}

LinearRep rep_polytope(const Model& model) {
  LinearRep rep;
  rep.kind = model.kind;
  const size_t nx = model.space.size();
  std::optional<QMat> exact_states = QMat{};
  for (const auto& s : model.pure_states) {
    auto q = rationalize(s);
    if (!q) {
      exact_states.reset();
      break;
    }
    exact_states->push_back(*q);
  }
  if (exact_states) {
    auto basis = q_independent_rows(*exact_states);
    rep.basis.assign(basis.begin(), basis.end());
    rep.dim = static_cast<int>(basis.size());
    QMat b;
    for (size_t i : basis) b.push_back((*exact_states)[i]);
    QMat bt = q_transpose(b);  // |X| x dim
    std::vector<QVec> states;
    for (const auto& s : *exact_states) {
      auto c = q_solve(bt, s);
      if (!c) throw Error(ErrorCode::NotFullDimensional, "pure state outside the span of the basis");
      states.push_back(*c);
    }
    std::vector<QVec> effects(bt.begin(), bt.end());
    rep.exact_state_coords = states;
    rep.exact_effect_coords = effects;
    for (const auto& s : states) rep.state_coords.push_back(to_double(s));
    for (const auto& e : effects) rep.effect_coords.push_back(to_double(e));
  } else {
    polyhedral::Rows<double> rows;
    for (const auto& s : model.pure_states) rows.emplace_back(s.data(), s.data() + s.size());
    auto basis = polyhedral::independent_rows(rows);
    rep.basis.assign(basis.begin(), basis.end());
    rep.dim = static_cast<int>(basis.size());
    Mat b(rep.dim, static_cast<Eigen::Index>(nx));
    for (int k = 0; k < rep.dim; ++k) b.row(k) = model.pure_states[basis[k]].transpose();
    Eigen::LDLT<Mat> normal(b * b.transpose());
    for (const auto& s : model.pure_states) rep.state_coords.push_back(normal.solve(b * s));
    for (size_t x = 0; x < nx; ++x) rep.effect_coords.push_back(b.col(static_cast<Eigen::Index>(x)));
  }
  rep.cone_V = Cone::from_generators(rep.state_coords, rep.exact_state_coords
                                                           ? std::optional<QMat>(*rep.exact_state_coords)
                                                           : std::nullopt);
  if (rep.exact_state_coords) {
    rep.cone_Vstar = Cone::from_facets({}, QMat(*rep.exact_state_coords), rep.dim);
  } else {
    rep.cone_Vstar = Cone::from_facets(rep.state_coords, std::nullopt, rep.dim);
  }
  return rep;
}

}  // namespace

LinearRep build_linear_rep(const Model& model, const Tolerances& tol) {
  LinearRep rep;
  if (model.kind == ModelKind::quantum) rep = rep_quantum(model);
  else if (model.kind == ModelKind::spin_factor) rep = rep_spin(model);
  else rep = rep_polytope(model);

  const auto& tests = model.space.tests();
  auto sum_over = [&](const Test& t) {
    Vec s = Vec::Zero(rep.dim);
    for (Outcome x : t) s += rep.effect_coords[x];
    return s;
  };
  if (rep.exact_effect_coords) {
    auto qsum = [&](const Test& t) {
      QVec s(rep.dim, Rational(0));
      for (Outcome x : t) {
        for (int k = 0; k < rep.dim; ++k) s[k] += (*rep.exact_effect_coords)[x][k];
      }
      return s;
    };
    QVec u = qsum(tests.front());
    for (size_t t = 1; t < tests.size(); ++t) {
      if (qsum(tests[t]) != u) {
        throw Error(ErrorCode::UnitMismatch, "sum of effects differs between tests",
                    Json{{"tests", {model.space.test_names(0), model.space.test_names(static_cast<int>(t))}}});
      }
    }
    rep.exact_unit = u;
    rep.unit = to_double(u);
  } else {
    Vec u = sum_over(tests.front());
    if (model.kind == ModelKind::generic || model.kind == ModelKind::classical ||
        model.kind == ModelKind::square_bit) {
      rep.unit = u;
    }
    for (size_t t = 0; t < tests.size(); ++t) {
      double dev = (sum_over(tests[t]) - rep.unit).cwiseAbs().maxCoeff();
      if (dev > tol.sum) {
        throw Error(ErrorCode::UnitMismatch, "sum of effects differs between tests",
                    Json{{"tests", {model.space.test_names(0), model.space.test_names(static_cast<int>(t))}},
                         {"deviation", dev}});
      }
    }
  }
  for (size_t i = 0; i < rep.state_coords.size(); ++i) {
    double v = rep.unit.dot(rep.state_coords[i]);
    if (std::fabs(v - 1.0) > tol.sum) {
      throw Error(ErrorCode::UnitMismatch, "a pure state does not pair to 1 with the unit",
                  Json{{"state", i}, {"value", v}});
    }
  }
  return rep;
}

ConeEquality compare_cones(const Cone& a, const Cone& b, const Tolerances& tol) {
  ConeEquality r;
  r.equal = true;
  r.exact = a.exact() && b.exact();
  auto check = [&](const Cone& from, const Cone& into, const char* label) {
    if (r.exact) {
      for (const auto& g : *from.exact_generators()) {
        if (!into.contains_exact(g)) {
          r.equal = false;
          Json gj = Json::array();
          for (const auto& q : g) gj.push_back(to_string(q));
          r.witness = Json{{"generator", gj}, {"of", label}, {"margin", into.margin(to_double(g))}};
          return;
        }
      }
      return;
    }
    for (const auto& g : from.probe_generators()) {
      if (!into.contains(g, tol.zero)) {
        r.equal = false;
        r.witness = Json{{"generator", to_json(g)}, {"of", label}, {"margin", into.margin(g)}};
        return;
      }
    }
  };
  check(a, b, "first");
  if (r.equal) check(b, a, "second");
  return r;
}

Cone dual_cone(const Cone& cone, const InnerProduct& ip) {
  if (cone.kind() == Cone::Kind::polyhedral) {
    if (cone.exact() && ip.exact_gram) {
      QMat normals;
      for (const auto& g : *cone.exact_generators()) normals.push_back(q_multiply(*ip.exact_gram, g));
      return Cone::from_facets({}, normals, cone.dim());
    }
    std::vector<Vec> normals;
    for (const auto& g : cone.generators()) normals.push_back(ip.gram * g);
    return Cone::from_facets(normals, std::nullopt, cone.dim());
  }
  Mat t = cone.transform().transpose().partialPivLu().solve(ip.gram);
  if (cone.kind() == Cone::Kind::psd) return Cone::psd(cone.matrix_size(), t);
  return Cone::second_order(cone.matrix_size(), t);
}

namespace {

/// Largest violation of the projection optimality conditions: p in C,
/// p - a in the ip-dual of C, and <p - a, p> = 0.
double kkt_residual(const Vec& a, const Vec& p, const Cone& cone, const InnerProduct& ip) {
  Vec r = p - a;
  double scale = std::max(1.0, ip.norm(a));
  double res = std::fabs(ip(r, p)) / scale;
  res = std::max(res, std::max(0.0, -cone.margin(p)) / scale);
  double dual = std::numeric_limits<double>::infinity();
  if (cone.kind() == Cone::Kind::polyhedral) {
    for (const auto& g : cone.generators()) dual = std::min(dual, ip(r, g) / g.norm());
  } else {
    Mat t = cone.transform().transpose().partialPivLu().solve(ip.gram);
    dual = cone.standard_margin(t * r);
  }
  return std::max(res, std::max(0.0, -dual) / scale);
}

Mat cholesky_upper(const InnerProduct& ip) {
  Eigen::LLT<Mat> llt(ip.gram);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "projection needs a positive-definite inner product");
  }
  return llt.matrixU();  // gram = U^T U
}

Projection project_nnls(const Vec& a, const Cone& cone, const InnerProduct& ip, const Tolerances& tol) {
  Mat u = cholesky_upper(ip);
  const auto& gens = cone.generators();
  const Eigen::Index m = static_cast<Eigen::Index>(gens.size());
  Mat g(cone.dim(), m);
  for (Eigen::Index j = 0; j < m; ++j) g.col(j) = gens[j] / gens[j].norm();
  Mat A = u * g;
  Vec b = u * a;
  Vec w = Vec::Zero(m);
  std::vector<char> active(m, 0);
  const int cap = 1000 + 30 * static_cast<int>(m);
  int iter = 0;
  const double gtol = 1e-13 * std::max(1.0, b.norm()) * std::max(1.0, A.norm());
  auto solve_on = [&](const std::vector<Eigen::Index>& idx) {
    Mat ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    return Vec(ap.colPivHouseholderQr().solve(b));
  };
  while (iter < cap) {
    Vec grad = A.transpose() * (b - A * w);
    Eigen::Index enter = -1;
    double best = gtol;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!active[j] && grad(j) > best) {
        best = grad(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    active[enter] = 1;
    while (iter++ < cap) {
      std::vector<Eigen::Index> idx;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (active[j]) idx.push_back(j);
      }
      Vec z = solve_on(idx);
      bool feasible = true;
      for (Eigen::Index k = 0; k < z.size(); ++k) {
        if (z(k) <= 0) feasible = false;
      }
      if (feasible) {
        w.setZero();
        for (size_t k = 0; k < idx.size(); ++k) w(idx[k]) = z(static_cast<Eigen::Index>(k));
        break;
      }
      double alpha = 1;
      for (size_t k = 0; k < idx.size(); ++k) {
        double zk = z(static_cast<Eigen::Index>(k));
        if (zk <= 0) alpha = std::min(alpha, w(idx[k]) / (w(idx[k]) - zk));
      }
      for (size_t k = 0; k < idx.size(); ++k) {
        double zk = z(static_cast<Eigen::Index>(k));
        w(idx[k]) += alpha * (zk - w(idx[k]));
        if (w(idx[k]) <= 1e-15) {
          w(idx[k]) = 0;
          active[idx[k]] = 0;
        }
      }
    }
  }
  Projection p;
  p.point = g * w;
  p.iterations = iter;
  p.method = "active-set NNLS over generators";
  p.kkt_residual = kkt_residual(a, p.point, cone, ip);
  if (iter >= cap && p.kkt_residual > tol.kkt) {
    throw Error(ErrorCode::NoConvergence, "active-set projection hit its iteration cap",
                Json{{"cap", cap}, {"residual", p.kkt_residual}});
  }
  return p;
}

Projection project_dykstra(const Vec& a, const Cone& cone, const InnerProduct& ip, const Tolerances& tol) {
  Eigen::LDLT<Mat> ginv(ip.gram);
  const auto& facets = cone.facets();
  std::vector<Vec> dirs;  // G^{-1} h, the ip-normal of each half-space
  std::vector<double> denom;
  for (const auto& h : facets) {
    dirs.push_back(ginv.solve(h));
    denom.push_back(h.dot(dirs.back()));
  }
  Vec x = a;
  std::vector<Vec> incr(facets.size(), Vec::Zero(a.size()));
  const int cap = 200000;
  int cycle = 0;
  const double stop = 1e-16 * std::max(1.0, a.norm());
  for (; cycle < cap; ++cycle) {
    double change = 0;
    for (size_t i = 0; i < facets.size(); ++i) {
      Vec y = x + incr[i];
      double v = facets[i].dot(y);
      Vec nx = v >= 0 ? y : Vec(y - (v / denom[i]) * dirs[i]);
      incr[i] = y - nx;
      change = std::max(change, (nx - x).cwiseAbs().maxCoeff());
      x = nx;
    }
    if (change <= stop) break;
  }
  Projection p;
  p.point = x;
  p.iterations = cycle;
  p.method = "Dykstra alternating projections over facets";
  p.kkt_residual = kkt_residual(a, x, cone, ip);
  if (cycle >= cap && p.kkt_residual > tol.kkt) {
    throw Error(ErrorCode::NoConvergence, "Dykstra projection hit its cycle cap",
                Json{{"cap", cap}, {"residual", p.kkt_residual}});
  }
  return p;
}

Projection project_fista(const Vec& a, const Cone& cone, const InnerProduct& ip, const Vec& start,
                         const Tolerances& tol) {
  const Mat& m = cone.transform();
  Eigen::PartialPivLU<Mat> lu(m);
  Mat minv = lu.inverse();
  Mat h = minv.transpose() * ip.gram * minv;
  h = (h + h.transpose()) / 2;
  double lmax = Eigen::SelfAdjointEigenSolver<Mat>(h, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  Vec target = m * a;
  Vec k = cone.standard_project(start);
  Vec y = k;
  double t = 1;
  const int cap = 200000;
  int iter = 0;
  auto objective = [&](const Vec& v) { return 0.5 * (v - target).dot(h * (v - target)); };
  double fk = objective(k);
  for (; iter < cap; ++iter) {
    Vec next = cone.standard_project(y - h * (y - target) / lmax);
    double fn = objective(next);
    if (fn > fk) {
      // restart momentum
      t = 1;
      y = k;
      next = cone.standard_project(y - h * (y - target) / lmax);
      fn = objective(next);
    }
    double tn = (1 + std::sqrt(1 + 4 * t * t)) / 2;
    Vec step = next - k;
    y = next + ((t - 1) / tn) * step;
    t = tn;
    k = next;
    fk = fn;
    if (step.norm() <= 1e-15 * std::max(1.0, k.norm())) break;
  }
  Projection p;
  p.point = lu.solve(k);
  p.iterations = iter;
  p.method = "accelerated projected gradient";
  p.kkt_residual = kkt_residual(a, p.point, cone, ip);
  if (iter >= cap && p.kkt_residual > tol.kkt) {
    throw Error(ErrorCode::NoConvergence, "projected gradient hit its iteration cap",
                Json{{"cap", cap}, {"residual", p.kkt_residual}});
  }
  return p;
}

}  // namespace

Projection cone_project(const Vec& a, const Cone& cone, const InnerProduct& ip, const Tolerances& tol) {
  if (cone.kind() == Cone::Kind::polyhedral) return project_nnls(a, cone, ip, tol);
  const Mat& m = cone.transform();
  Eigen::PartialPivLU<Mat> lu(m);
  Mat minv = lu.inverse();
  Mat h = minv.transpose() * ip.gram * minv;
  double c = h.trace() / static_cast<double>(h.rows());
  if ((h - c * Mat::Identity(h.rows(), h.cols())).cwiseAbs().maxCoeff() <= 1e-12 * std::fabs(c) && c > 0) {
    Projection p;
    p.point = lu.solve(cone.standard_project(m * a));
    p.method = cone.kind() == Cone::Kind::psd ? "eigenvalue clipping" : "closed-form Lorentz projection";
    p.kkt_residual = kkt_residual(a, p.point, cone, ip);
    return p;
  }
  return project_fista(a, cone, ip, Vec::Zero(a.size()), tol);
}

Projection cone_project_alternate(const Vec& a, const Cone& cone, const InnerProduct& ip,
                                  const Tolerances& tol) {
  if (cone.kind() == Cone::Kind::polyhedral) return project_dykstra(a, cone, ip, tol);
  std::mt19937_64 rng(0x51ed270b);
  std::normal_distribution<double> normal;
  Vec start = cone.transform() * a;
  for (Eigen::Index i = 0; i < start.size(); ++i) start(i) += 0.1 * (1 + std::fabs(start(i))) * normal(rng);
  return project_fista(a, cone, ip, start, tol);
}

ConeMap certify_order_isomorphism(const Mat& t, const Cone& domain, const Cone& codomain,
                                  const Tolerances& tol) {
  if (t.rows() != codomain.dim() || t.cols() != domain.dim() || t.rows() != t.cols()) {
    throw Error(ErrorCode::BadDimension, "map dimensions do not match the cones");
  }
  Eigen::JacobiSVD<Mat> svd(t);
  const Vec& sv = svd.singularValues();
  double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
  if (!(cond <= tol.condition_cap)) {
    throw Error(ErrorCode::NotInvertible, "map is singular or too ill-conditioned",
                Json{{"condition", std::isfinite(cond) ? Json(cond) : Json("inf")}});
  }
  ConeMap out;
  out.matrix = t;
  out.condition = cond;
  Mat inv = t.inverse();

  auto qt = rationalize(t);
  bool exact = qt && domain.exact() && codomain.exact();
  std::optional<QMat> qinv;
  if (exact) {
    qinv = q_inverse(*qt);
    exact = qinv.has_value();
  }
  double worst = std::numeric_limits<double>::infinity();
  size_t checked = 0;
  auto violation = [&](const Vec& g, const Vec& image, const char* dir) {
    throw Error(ErrorCode::ConeViolation, std::string("image of a generator leaves the cone (") + dir + ")",
                Json{{"generator", to_json(g)}, {"image", to_json(image)}, {"direction", dir}});
  };
  if (exact) {
    for (const auto& g : *domain.exact_generators()) {
      ++checked;
      if (!codomain.contains_exact(q_multiply(*qt, g))) violation(to_double(g), t * to_double(g), "forward");
    }
    for (const auto& g : *codomain.exact_generators()) {
      ++checked;
      if (!domain.contains_exact(q_multiply(*qinv, g))) violation(to_double(g), inv * to_double(g), "inverse");
    }
    worst = 0;
  } else {
    for (const auto& g : domain.probe_generators()) {
      ++checked;
      Vec image = t * g;
      if (!codomain.contains(image, tol.map)) violation(g, image, "forward");
      worst = std::min(worst, codomain.margin(image) / std::max(1.0, image.norm()));
    }
    for (const auto& g : codomain.probe_generators()) {
      ++checked;
      Vec image = inv * g;
      if (!domain.contains(image, tol.map)) violation(g, image, "inverse");
      worst = std::min(worst, domain.margin(image) / std::max(1.0, image.norm()));
    }
  }
  bool sampled = domain.kind() != Cone::Kind::polyhedral || codomain.kind() != Cone::Kind::polyhedral;
  out.certificate = Json{{"method", sampled ? "boundary-ray images (fixed seeded family)" : "generator images"},
                         {"exact", exact},
                         {"rays_checked", checked},
                         {"condition", cond},
                         {"min_margin", worst}};
  return out;
}

ConeMap is_order_automorphism(const Mat& t, const Cone& cone, const Tolerances& tol) {
  return certify_order_isomorphism(t, cone, cone, tol);
}

}  // namespace opm
