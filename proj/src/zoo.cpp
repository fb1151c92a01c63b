#include "opm/zoo.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace opm::zoo {

namespace {

std::string classical_name(int i, int n) {
  if (n <= 26) return std::string(1, static_cast<char>('a' + i));
  return "x" + std::to_string(i);
}

std::vector<Outcome> transposition(int n, int a, int b) {
  std::vector<Outcome> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  std::swap(p[a], p[b]);
  return p;
}

bool is_prime(int n) {
  if (n < 2) return false;
  for (int k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

StateVec gleason(const std::vector<CVec>& outcomes, const CVec& psi) {
  StateVec s(static_cast<Eigen::Index>(outcomes.size()));
  for (size_t x = 0; x < outcomes.size(); ++x) s(static_cast<Eigen::Index>(x)) = std::norm(outcomes[x].dot(psi));
  return s;
}

Model assemble_quantum(std::shared_ptr<QuantumRep> rep, std::vector<std::string> names,
                       std::uint64_t seed) {
  Model m;
  std::vector<Test> tests(rep->frames.begin(), rep->frames.end());
  m.space = TestSpace(std::move(names), tests);
  for (const auto& v : rep->pure_vectors) m.pure_states.push_back(gleason(rep->outcome_vectors, v));
  GroupAction g;
  g.kind = GroupAction::Kind::unitary;
  g.seed = seed;
  m.group = g;
  m.kind = ModelKind::quantum;
  m.filter = FilterCapability::congruence;
  m.quantum = std::move(rep);
  return validate_model(m);
}

Model assemble_spin(std::shared_ptr<SpinRep> rep, std::vector<std::string> names, std::uint64_t seed) {
  Model m;
  std::vector<Test> tests;
  for (size_t i = 0; i + 1 < rep->outcome_directions.size(); i += 2) {
    tests.push_back({static_cast<Outcome>(i), static_cast<Outcome>(i + 1)});
  }
  m.space = TestSpace(std::move(names), tests);
  for (const auto& b : rep->pure_directions) {
    StateVec s(static_cast<Eigen::Index>(rep->outcome_directions.size()));
    for (size_t x = 0; x < rep->outcome_directions.size(); ++x) {
      s(static_cast<Eigen::Index>(x)) = (1 + b.dot(rep->outcome_directions[x])) / 2;
    }
    m.pure_states.push_back(s);
  }
  GroupAction g;
  g.kind = GroupAction::Kind::orthogonal;
  g.seed = seed;
  m.group = g;
  m.kind = ModelKind::spin_factor;
  m.filter = FilterCapability::lorentz_boost;
  m.spin = std::move(rep);
  return validate_model(m);
}

}  // namespace

Model make_classical(int n) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "classical models need n >= 2");
  RawModel raw;
  std::vector<std::string> test;
  for (int i = 0; i < n; ++i) {
    raw.outcomes.push_back(classical_name(i, n));
    test.push_back(raw.outcomes.back());
  }
  raw.tests.push_back(test);
  for (int i = 0; i < n; ++i) raw.pure_states.push_back({{raw.outcomes[i], 1.0}});
  raw.kind = "classical";
  Model m = validate_model(raw);
  std::vector<std::vector<Outcome>> gens{transposition(n, 0, 1)};
  std::vector<Outcome> cycle(n);
  for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
  gens.push_back(cycle);
  GroupAction g;
  g.elements = close_group(gens);
  m.group = std::move(g);
  return validate_model(m);
}

Model make_square_bit() {
  RawModel raw;
  raw.outcomes = {"x0", "x1", "y0", "y1"};
  raw.tests = {{"x0", "x1"}, {"y0", "y1"}};
  for (int a : {1, 0}) {
    for (int b : {1, 0}) {
      raw.pure_states.push_back({{"x0", a}, {"x1", 1 - a}, {"y0", b}, {"y1", 1 - b}});
    }
  }
  raw.permutations = std::vector<std::map<std::string, std::string>>{
      {{"x0", "x1"}, {"x1", "x0"}},
      {{"x0", "y0"}, {"y0", "x0"}, {"x1", "y1"}, {"y1", "x1"}}};
  raw.kind = "square_bit";
  return validate_model(raw);
}

Model make_spin_factor(int d, int samples, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorCode::BadDimension, "spin factors need d >= 2");
  auto rep = std::make_shared<SpinRep>();
  rep->d = d;
  std::vector<std::string> names;
  auto add = [&](const Vec& w, const std::string& label) {
    rep->outcome_directions.push_back(w);
    rep->outcome_directions.push_back(-w);
    names.push_back("+" + label);
    names.push_back("-" + label);
  };
  for (int i = 0; i < d; ++i) add(Vec::Unit(d, i), "e" + std::to_string(i + 1));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for (int k = 0; k < samples; ++k) {
    Vec w(d);
    for (int i = 0; i < d; ++i) w(i) = normal(rng);
    add(w / w.norm(), "s" + std::to_string(k + 1));
  }
  rep->pure_directions = rep->outcome_directions;
  return assemble_spin(rep, names, seed);
}

std::vector<Frame> default_frames(int n, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "quantum models need n >= 2");
  std::vector<Frame> frames;
  Frame comp;
  for (int i = 0; i < n; ++i) comp.push_back(CVec::Unit(n, i));
  frames.push_back(comp);
  const Complex i1(0, 1);
  if (n == 2) {
    const double r = 1 / std::sqrt(2.0);
    CVec a(2), b(2), c(2), d(2);
    a << r, r;
    b << r, -r;
    c << r, i1 * r;
    d << r, -i1 * r;
    frames.push_back({a, b});
    frames.push_back({c, d});
    return frames;
  }
  if (is_prime(n)) {
    const double r = 1 / std::sqrt(static_cast<double>(n));
    for (int a = 0; a < n; ++a) {
      Frame f;
      for (int b = 0; b < n; ++b) {
        CVec v(n);
        for (int j = 0; j < n; ++j) {
          double phase = 2 * std::numbers::pi * static_cast<double>((a * j * j + b * j) % n) / n;
          v(j) = std::polar(r, phase);
        }
        f.push_back(v);
      }
      frames.push_back(f);
    }
    return frames;
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < n; ++k) {
    CMat u = herm::haar_unitary(n, rng);
    Frame f;
    for (int j = 0; j < n; ++j) f.push_back(u.col(j));
    frames.push_back(f);
  }
  return frames;
}

Model make_quantum(int n, const std::vector<Frame>& frames, std::vector<std::string> names,
                   std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "quantum models need n >= 2");
  if (frames.empty()) throw Error(ErrorCode::NotAFrame, "at least one frame is required");
  Tolerances tol;
  auto rep = std::make_shared<QuantumRep>();
  rep->n = n;
  std::vector<CMat> projectors;
  std::vector<std::string> outcome_names;
  size_t flat = 0;
  for (size_t f = 0; f < frames.size(); ++f) {
    const auto& frame = frames[f];
    if (static_cast<int>(frame.size()) != n) {
      throw Error(ErrorCode::NotAFrame, "frame " + std::to_string(f) + " does not have n vectors");
    }
    CMat g(n, n);
    for (int a = 0; a < n; ++a) {
      if (frame[a].size() != n) throw Error(ErrorCode::NotAFrame, "frame vector has the wrong dimension");
      for (int b = 0; b < n; ++b) g(a, b) = frame[a].dot(frame[b]);
    }
    double dev = (g - CMat::Identity(n, n)).cwiseAbs().maxCoeff();
    if (dev > tol.zero * 100) {
      throw Error(ErrorCode::NotAFrame, "frame " + std::to_string(f) + " is not orthonormal",
                  Json{{"frame", f}, {"deviation", dev}});
    }
    std::vector<Outcome> test;
    for (int a = 0; a < n; ++a, ++flat) {
      CMat p = herm::projector(frame[a]);
      Outcome found = -1;
      for (size_t k = 0; k < projectors.size(); ++k) {
        if ((projectors[k] - p).cwiseAbs().maxCoeff() <= tol.zero * 100) {
          found = static_cast<Outcome>(k);
          break;
        }
      }
      if (found < 0) {
        found = static_cast<Outcome>(projectors.size());
        projectors.push_back(p);
        rep->outcome_vectors.push_back(frame[a] / frame[a].norm());
        outcome_names.push_back(flat < names.size() ? names[flat]
                                                    : "b" + std::to_string(f) + "_" + std::to_string(a));
      }
      test.push_back(found);
    }
    rep->frames.push_back(test);
  }
  rep->pure_vectors = rep->outcome_vectors;
  return assemble_quantum(rep, outcome_names, seed);
}

Model make_quantum(int n) {
  std::vector<std::string> names;
  if (n == 2) names = {"z0", "z1", "x0", "x1", "y0", "y1"};
  return make_quantum(n, default_frames(n), names);
}

Model by_name(const std::string& name) {
  if (name == "square-bit") return make_square_bit();
  auto colon = name.find(':');
  if (colon == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "unknown built-in model '" + name + "'");
  }
  std::string family = name.substr(0, colon);
  int k = 0;
  try {
    size_t used = 0;
    k = std::stoi(name.substr(colon + 1), &used);
    if (used != name.size() - colon - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::InvalidArgument, "bad size in built-in model name '" + name + "'");
  }
  if (family == "classical") return make_classical(k);
  if (family == "quantum") return make_quantum(k);
  if (family == "spin") return make_spin_factor(k);
  throw Error(ErrorCode::InvalidArgument, "unknown built-in model family '" + family + "'");
}

std::pair<Model, std::vector<Outcome>> with_frame(const Model& model, const Frame& frame,
                                                  const Tolerances& tol) {
  if (model.kind != ModelKind::quantum) throw Error(ErrorCode::InvalidArgument, "frames need a quantum model");
  auto rep = std::make_shared<QuantumRep>(*model.quantum);
  const int n = rep->n;
  std::vector<std::string> names = model.space.outcomes();
  std::vector<Outcome> test;
  const size_t label = rep->frames.size();
  for (int a = 0; a < n; ++a) {
    CMat p = herm::projector(frame.at(a));
    Outcome found = -1;
    for (size_t k = 0; k < rep->outcome_vectors.size(); ++k) {
      if ((herm::projector(rep->outcome_vectors[k]) - p).cwiseAbs().maxCoeff() <= tol.zero * 100) {
        found = static_cast<Outcome>(k);
        break;
      }
    }
    if (found < 0) {
      found = static_cast<Outcome>(rep->outcome_vectors.size());
      rep->outcome_vectors.push_back(frame[a] / frame[a].norm());
      rep->pure_vectors.push_back(frame[a] / frame[a].norm());
      std::string base = "f" + std::to_string(label) + "_" + std::to_string(a);
      std::string nm = base;
      for (int k = 1; std::find(names.begin(), names.end(), nm) != names.end(); ++k) {
        nm = base + "'" + std::to_string(k);
      }
      names.push_back(nm);
    }
    test.push_back(found);
  }
  std::vector<Outcome> sorted = test;
  std::sort(sorted.begin(), sorted.end());
  bool present = false;
  for (const auto& f : rep->frames) {
    std::vector<Outcome> s = f;
    std::sort(s.begin(), s.end());
    if (s == sorted) present = true;
  }
  if (!present) rep->frames.push_back(test);
  return {assemble_quantum(rep, names, model.group ? model.group->seed : 0), test};
}

std::pair<Model, std::pair<Outcome, Outcome>> with_direction(const Model& model, const Vec& w,
                                                             const Tolerances& tol) {
  if (model.kind != ModelKind::spin_factor) throw Error(ErrorCode::InvalidArgument, "directions need a spin factor");
  auto rep = std::make_shared<SpinRep>(*model.spin);
  Vec unit = w / w.norm();
  for (size_t k = 0; k < rep->outcome_directions.size(); ++k) {
    if ((rep->outcome_directions[k] - unit).norm() <= tol.zero * 100) {
      Outcome x = static_cast<Outcome>(k);
      Outcome y = x % 2 == 0 ? x + 1 : x - 1;
      return {model, {x, y}};
    }
  }
  std::vector<std::string> names = model.space.outcomes();
  int label = static_cast<int>(rep->outcome_directions.size() / 2) + 1;
  rep->outcome_directions.push_back(unit);
  rep->outcome_directions.push_back(-unit);
  rep->pure_directions.push_back(unit);
  rep->pure_directions.push_back(-unit);
  names.push_back("+w" + std::to_string(label));
  names.push_back("-w" + std::to_string(label));
  Outcome x = static_cast<Outcome>(rep->outcome_directions.size() - 2);
  return {assemble_spin(rep, names, model.group ? model.group->seed : 0), {x, x + 1}};
}

double LambdaIP::projector_pair(const CVec& x, const CVec& y) const {
  double overlap = std::norm(x.dot(y)) / (x.squaredNorm() * y.squaredNorm());
  return (1 - lambda) / (n * n) + (lambda / n) * overlap;
}

Json LambdaIP::to_json() const {
  return Json{{"n", n},
              {"lambda", lambda},
              {"positive", positive},
              {"minimizing", minimizing},
              {"unit_norm", unit_norm},
              {"orthogonal_pair_value", orthogonal_value},
              {"parallel_pair_value", parallel_value},
              {"corroboration_gap", corroboration_gap}};
}

LambdaIP lambda_inner_product(int n, double lambda) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "lambda family needs n >= 2");
  LambdaIP ip;
  ip.n = n;
  ip.lambda = lambda;
  const int dim = n * n;
  ip.gram = Mat::Identity(dim, dim) * (lambda / n);
  ip.gram(0, 0) = 1.0 / n;
  herm::HermitianBasis basis(n);
  Vec u = basis.coords(CMat::Identity(n, n));
  ip.unit_norm = u.dot(ip.gram * u);
  CVec e0 = CVec::Unit(n, 0);
  CVec e1 = CVec::Unit(n, 1);
  ip.orthogonal_value = ip.projector_pair(e0, e1);
  ip.parallel_value = ip.projector_pair(e0, e0);
  Vec p0 = basis.coords(herm::projector(e0));
  Vec p1 = basis.coords(herm::projector(e1));
  ip.corroboration_gap = std::max(std::fabs(p0.dot(ip.gram * p1) - ip.orthogonal_value),
                                  std::fabs(p0.dot(ip.gram * p0) - ip.parallel_value));
  // Positive exactly on 0 < lambda <= 1; the orthogonal-pair value is the
  // minimum of <P_x, P_y>, so its sign corroborates the verdict.
  ip.positive = lambda > 0 && lambda <= 1;
  if (ip.positive != (ip.orthogonal_value >= 0 && lambda > 0)) {
    throw Error(ErrorCode::MethodDisagreement, "closed-form positivity and orthogonal-pair value disagree",
                ip.to_json());
  }
  ip.minimizing = ip.positive;
  return ip;
}

InnerProduct lambda_ip(int n, double lambda, const Cone& cone, const Tolerances& tol) {
  LambdaIP l = lambda_inner_product(n, lambda);
  InnerProduct ip = make_inner_product(l.gram, cone, "lambda family", tol);
  ip.positive_on_cone = l.positive;
  ip.invariant = true;
  ip.minimizing = l.minimizing;
  ip.lambda = lambda;
  return ip;
}

LambdaFit fit_lambda(int n, const Mat& gram) {
  const int dim = n * n;
  if (gram.rows() != dim || gram.cols() != dim) throw Error(ErrorCode::BadDimension, "Gram has the wrong size");
  double trace = 0;
  for (int k = 1; k < dim; ++k) trace += gram(k, k);
  LambdaFit fit;
  fit.lambda = n * trace / (dim - 1);
  Mat model = Mat::Identity(dim, dim) * (fit.lambda / n);
  model(0, 0) = gram(0, 0);
  fit.residual = (gram - model).cwiseAbs().maxCoeff();
  return fit;
}

Json HaarEstimate::to_json() const {
  return Json{{"n", n},
              {"samples", samples},
              {"seed", seed},
              {"lambda_hat", lambda_hat},
              {"standard_error", standard_error},
              {"unit_norm", unit_norm},
              {"fit_lambda", fit.lambda},
              {"fit_residual", fit.residual}};
}

HaarEstimate haar_canonical_ip(int n, long samples, std::uint64_t seed) {
  if (n < 2) throw Error(ErrorCode::BadDimension, "Haar estimate needs n >= 2");
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "Haar estimate needs at least 2 samples");
  HaarEstimate est;
  est.n = n;
  est.samples = samples;
  est.seed = seed;
  herm::HermitianBasis basis(n);
  const int dim = n * n;
  std::mt19937_64 rng(seed);
  Mat sum = Mat::Zero(dim, dim);
  double ys = 0;
  double ys2 = 0;
  const double pairs = n * (n - 1) / 2.0;
  for (long s = 0; s < samples; ++s) {
    CVec psi = herm::haar_state(n, rng);
    Vec c = basis.coords(herm::projector(psi));
    sum += c * c.transpose();
    // Mean over orthogonal pairs of computational-basis effects.
    double y = 0;
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) y += std::norm(psi(j)) * std::norm(psi(k));
    }
    y /= pairs;
    ys += y;
    ys2 += y * y;
  }
  const double N = static_cast<double>(samples);
  est.gram = sum / N;
  double mean = ys / N;
  double var = std::max(0.0, (ys2 - N * mean * mean) / (N - 1));
  // <P_x, P_y> = (1 - lambda)/n^2 at orthogonal pairs.
  est.lambda_hat = 1 - static_cast<double>(n * n) * mean;
  est.standard_error = static_cast<double>(n * n) * std::sqrt(var / N);
  Vec u = basis.coords(CMat::Identity(n, n));
  est.unit_norm = u.dot(est.gram * u);
  est.fit = fit_lambda(n, est.gram);
  return est;
}

InnerProduct spin_ip(int d, double kappa, const Cone& cone, const Tolerances& tol) {
  Mat g = Mat::Identity(d + 1, d + 1) * kappa;
  g(0, 0) = 1;
  InnerProduct ip = make_inner_product(g, cone, kappa == 1.0 ? "Lorentz form" : "rotation-invariant form", tol);
  // <(1/2, x/2), (1/2, y/2)> = (1 + kappa x.y)/4 is smallest at y = -x.
  ip.positive_on_cone = kappa > 0 && kappa <= 1;
  ip.invariant = true;
  return ip;
}

}  // namespace opm::zoo
