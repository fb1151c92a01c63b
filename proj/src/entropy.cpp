#include "opm/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "opm/lp.hpp"

namespace opm {

double shannon_bits(std::vector<double> p) {
  std::sort(p.begin(), p.end());
  double h = 0;
  for (double v : p) {
    if (v > 0) h -= v * std::log2(v);
  }
  return h == 0 ? 0.0 : h;
}

namespace {

std::vector<double> spectrum(const Model& model, const LinearRep& rep, const StateVec& alpha) {
  Vec coords = rep.state_coords_of(alpha);
  if (model.kind == ModelKind::quantum) {
    Eigen::SelfAdjointEigenSolver<CMat> es(rep.hermitian->matrix(coords));
    std::vector<double> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(std::max(0.0, es.eigenvalues()(i)));
    return out;
  }
  double len = std::min(1.0, coords.tail(coords.size() - 1).norm() / coords(0));
  return {(1 + len) / 2, (1 - len) / 2};
}

}  // namespace

Json MeasurementEntropy::to_json(const TestSpace& space) const {
  Json j{{"H", value}, {"listed_minimum", listed_minimum}, {"analytic", analytic}};
  j["argmin_test"] = test >= 0 ? Json(space.test_names(test)) : Json(nullptr);
  if (analytic) j["argmin"] = "eigenframe";
  return j;
}

MeasurementEntropy measurement_entropy(const Model& model, const LinearRep& rep, const StateVec& alpha,
                                       const Tolerances& tol) {
  MeasurementEntropy m;
  m.listed_minimum = std::numeric_limits<double>::infinity();
  const auto& tests = model.space.tests();
  for (size_t t = 0; t < tests.size(); ++t) {
    std::vector<double> p;
    for (Outcome x : tests[t]) p.push_back(alpha(x));
    double h = shannon_bits(p);
    if (h < m.listed_minimum) {
      m.listed_minimum = h;
      m.test = static_cast<int>(t);
    }
  }
  m.value = m.listed_minimum;
  if (model.analytic()) {
    m.analytic = true;
    m.value = shannon_bits(spectrum(model, rep, alpha));
    if (m.listed_minimum < m.value - tol.entropy) {
      throw Error(ErrorCode::MethodDisagreement, "a listed test beats the spectral entropy",
                  Json{{"spectral", m.value}, {"listed", m.listed_minimum}});
    }
  }
  return m;
}

Json MixingEntropy::to_json() const {
  return Json{{"S", value},
              {"bound", bound},
              {"support", support},
              {"weights", weights},
              {"supports_checked", supports_checked}};
}

MixingEntropy mixing_entropy(const Model& model, const LinearRep& rep, const StateVec& alpha,
                             const Tolerances& tol, long budget) {
  MixingEntropy out;
  if (model.analytic()) {
    out.bound = "analytic";
    out.weights = spectrum(model, rep, alpha);
    out.value = shannon_bits(out.weights);
    return out;
  }
  const size_t np = model.pure_states.size();
  const size_t nx = model.space.size();
  {
    std::vector<std::vector<double>> a(nx, std::vector<double>(np));
    std::vector<double> b(nx);
    for (size_t x = 0; x < nx; ++x) {
      for (size_t p = 0; p < np; ++p) a[x][p] = model.pure_states[p](static_cast<Eigen::Index>(x));
      b[x] = alpha(static_cast<Eigen::Index>(x));
    }
    auto res = lp::solve_feasibility<double>(a, b);
    if (!res.feasible) {
      throw Error(ErrorCode::NotInOmega, "state is not a mixture of pure states", Json{{"farkas", res.farkas}});
    }
    // The basic solution is one candidate; the enumeration below refines it.
    for (size_t p = 0; p < np; ++p) {
      if (res.x[p] > tol.zero) {
        out.support.push_back(static_cast<int>(p));
        out.weights.push_back(res.x[p]);
      }
    }
    out.value = shannon_bits(out.weights);
  }
  const int dim = rep.dim;
  Vec target = rep.state_coords_of(alpha);
  std::vector<int> pick;
  bool complete = true;
  // Depth-first over increasing index sets of linearly independent states.
  std::function<void(int)> visit = [&](int start) {
    if (!pick.empty()) {
      if (++out.supports_checked > budget) {
        complete = false;
        return;
      }
      Mat cols(dim, static_cast<Eigen::Index>(pick.size()));
      for (size_t k = 0; k < pick.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = rep.state_coords[pick[k]];
      Eigen::ColPivHouseholderQR<Mat> qr(cols);
      if (qr.rank() < static_cast<Eigen::Index>(pick.size())) return;
      Vec w = qr.solve(target);
      if ((cols * w - target).norm() <= tol.sum && w.minCoeff() >= -tol.zero) {
        std::vector<double> ws;
        for (Eigen::Index k = 0; k < w.size(); ++k) ws.push_back(std::max(0.0, w(k)));
        double h = shannon_bits(ws);
        if (h < out.value - tol.entropy) {
          out.value = h;
          out.support = pick;
          out.weights = ws;
        }
      }
    }
    if (static_cast<int>(pick.size()) >= dim) return;
    for (size_t p = static_cast<size_t>(start); p < np && complete; ++p) {
      pick.push_back(static_cast<int>(p));
      visit(static_cast<int>(p) + 1);
      pick.pop_back();
    }
  };
  visit(0);
  out.bound = complete ? "exact" : "upper bound";
  return out;
}

Json EntropyReport::to_json(const TestSpace& space) const {
  return Json{{"H", h.value},
              {"S", s.value},
              {"gap", gap},
              {"monoentropic", monoentropic},
              {"measurement", h.to_json(space)},
              {"mixing", s.to_json()}};
}

EntropyReport entropy_report(const Model& model, const LinearRep& rep, const StateVec& alpha, const Tolerances& tol) {
  EntropyReport r;
  r.h = measurement_entropy(model, rep, alpha, tol);
  r.s = mixing_entropy(model, rep, alpha, tol);
  r.gap = std::fabs(r.h.value - r.s.value);
  r.monoentropic = r.gap < tol.entropy;
  return r;
}

Json MonoentropyReport::to_json(const TestSpace& space) const {
  Json list = Json::array();
  for (const auto& s : states) list.push_back(s.to_json(space));
  Json j{{"states", list},
         {"worst_gap", worst_gap},
         {"monoentropic", monoentropic},
         {"zero_entropy_chain", zero_entropy_chain}};
  if (!chain_witness.is_null()) j["chain_witness"] = chain_witness;
  return j;
}

MonoentropyReport monoentropy_check(const Model& model, const LinearRep& rep, const std::vector<StateVec>& states,
                                    const Tolerances& tol) {
  MonoentropyReport m;
  m.monoentropic = true;
  for (size_t i = 0; i < states.size(); ++i) {
    const StateVec& a = states[i];
    EntropyReport r = entropy_report(model, rep, a, tol);
    m.worst_gap = std::max(m.worst_gap, r.gap);
    m.monoentropic = m.monoentropic && r.monoentropic;
    // For quantum and spin models "some outcome" ranges over the whole frame
    // manual, so certainty is read off the spectrum.
    bool certain = model.analytic() ? *std::max_element(r.s.weights.begin(), r.s.weights.end()) >= 1 - tol.zero
                                    : a.size() > 0 && a.maxCoeff() >= 1 - tol.zero;
    bool h_zero = r.h.value <= tol.entropy;
    bool s_zero = r.s.value <= tol.entropy;
    if (m.zero_entropy_chain && (h_zero != certain || (h_zero && !s_zero))) {
      m.zero_entropy_chain = false;
      m.chain_witness = Json{{"state", i}, {"H", r.h.value}, {"S", r.s.value}, {"some_outcome_certain", certain}};
    }
    m.states.push_back(std::move(r));
  }
  return m;
}

}  // namespace opm
