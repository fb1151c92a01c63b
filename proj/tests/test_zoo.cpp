#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "opm/hermitian.hpp"
#include "opm/zoo.hpp"

using namespace opm;
using zoo::HaarEstimate;
using zoo::LambdaFit;
using zoo::LambdaIP;

namespace {

// <a, b> = st + (lambda/n) Tr(a0 b0) with a = s 1 + a0, evaluated on matrices.
double lambda_form(const CMat& a, const CMat& b, double lambda) {
  const auto n = static_cast<double>(a.rows());
  std::complex<double> s = a.trace() / n;
  std::complex<double> t = b.trace() / n;
  CMat id = CMat::Identity(a.rows(), a.cols());
  CMat a0 = a - s * id;
  CMat b0 = b - t * id;
  return (s * t).real() + lambda / n * (a0 * b0).trace().real();
}

}  // namespace

TEST(LambdaFamily, GramMatchesTraceFormula) {
  std::mt19937_64 rng(17);
  for (int n : {2, 3, 4}) {
    herm::HermitianBasis basis(n);
    for (double lambda : {0.25, 0.5, 1.0, 1.2}) {
      LambdaIP f = zoo::lambda_inner_product(n, lambda);
      for (int trial = 0; trial < 5; ++trial) {
        CVec x = herm::haar_state(n, rng);
        CVec y = herm::haar_state(n, rng);
        CMat px = herm::projector(x);
        CMat py = herm::projector(y);
        double direct = lambda_form(px, py, lambda);
        double gram = basis.coords(px).dot(f.gram * basis.coords(py));
        EXPECT_NEAR(gram, direct, 1e-12);
        EXPECT_NEAR(f.projector_pair(x, y), direct, 1e-12);
      }
      EXPECT_NEAR(f.unit_norm, 1.0, 1e-12);
      EXPECT_NEAR(f.orthogonal_value, (1 - lambda) / (n * n), 1e-12);
    }
  }
}

TEST(LambdaFamily, PositivityBoundary) {
  for (int n : {2, 3, 4}) {
    for (double lambda : {0.25, 0.5, 1.0}) {
      LambdaIP f = zoo::lambda_inner_product(n, lambda);
      EXPECT_TRUE(f.positive) << n << " " << lambda;
      EXPECT_TRUE(f.minimizing) << n << " " << lambda;
    }
    for (double lambda : {1.001, 1.2}) EXPECT_FALSE(zoo::lambda_inner_product(n, lambda).positive);
  }
}

TEST(LambdaFamily, FitRecoversLambda) {
  LambdaIP f = zoo::lambda_inner_product(3, 0.4);
  LambdaFit fit = zoo::fit_lambda(3, f.gram);
  EXPECT_NEAR(fit.lambda, 0.4, 1e-12);
  EXPECT_LT(fit.residual, 1e-12);
}

// Second moment of a Haar-random pure state: E[|<x,psi>|^2 |<y,psi>|^2] equals
// (1 + |<x,y>|^2) / (n (n + 1)). For n = 2 check it by quadrature over the
// Bloch sphere, where |<0,psi>|^2 = (1 + z)/2 with z uniform on [-1, 1].
TEST(HaarMoments, QubitQuadratureMatchesClosedForm) {
  const int steps = 200000;
  double same = 0;
  double orth = 0;
  for (int i = 0; i < steps; ++i) {
    double z = -1 + (i + 0.5) * 2.0 / steps;
    double p = (1 + z) / 2;
    same += p * p;
    orth += p * (1 - p);
  }
  same /= steps;
  orth /= steps;
  EXPECT_NEAR(same, 2.0 / 6.0, 1e-9);
  EXPECT_NEAR(orth, 1.0 / 6.0, 1e-9);
  // The lambda family reproduces both moments at lambda = 1/3.
  LambdaIP f = zoo::lambda_inner_product(2, 1.0 / 3.0);
  EXPECT_NEAR(f.parallel_value, same, 1e-9);
  EXPECT_NEAR(f.orthogonal_value, orth, 1e-9);
}

TEST(HaarMoments, MonteCarloEstimateWithinErrorBars) {
  for (int n : {2, 3}) {
    HaarEstimate h = zoo::haar_canonical_ip(n, 20000, 99);
    double target = 1.0 / (n + 1);
    EXPECT_LT(std::fabs(h.lambda_hat - target), 4 * h.standard_error) << n;
    EXPECT_GT(h.standard_error, 0);
    HaarEstimate again = zoo::haar_canonical_ip(n, 20000, 99);
    EXPECT_EQ(h.lambda_hat, again.lambda_hat);
  }
}

TEST(Zoo, ClassicalShape) {
  Model m = zoo::make_classical(4);
  EXPECT_EQ(m.space.size(), 4u);
  EXPECT_EQ(m.space.tests().size(), 1u);
  EXPECT_EQ(m.pure_states.size(), 4u);
  EXPECT_EQ(m.group->order(), 24u);
  EXPECT_EQ(m.kind, ModelKind::classical);
}

TEST(Zoo, QuantumOutcomesAreBornProbabilities) {
  Model m = zoo::make_quantum(2);
  ASSERT_TRUE(m.quantum);
  const auto& q = *m.quantum;
  EXPECT_EQ(m.space.tests().size(), 3u);
  for (size_t i = 0; i < m.pure_states.size(); ++i) {
    for (size_t x = 0; x < m.space.size(); ++x) {
      double born = std::norm(q.outcome_vectors[x].dot(q.pure_vectors[i]));
      EXPECT_NEAR(m.pure_states[i](static_cast<Eigen::Index>(x)), born, 1e-12);
    }
  }
}

TEST(Zoo, AddedFrameReusesExistingProjectors) {
  Model m = zoo::make_quantum(2);
  const auto& q = *m.quantum;
  // The computational basis with phases is already present.
  zoo::Frame f = {q.outcome_vectors[0] * std::complex<double>(0, 1), q.outcome_vectors[1] * -1.0};
  auto [m2, idx] = zoo::with_frame(m, f);
  EXPECT_EQ(m2.space.size(), m.space.size());
  EXPECT_EQ(idx[0], 0);
  EXPECT_EQ(idx[1], 1);

  std::mt19937_64 rng(4);
  CMat u = herm::haar_unitary(2, rng);
  auto [m3, idx3] = zoo::with_frame(m, {u.col(0), u.col(1)});
  EXPECT_EQ(m3.space.size(), m.space.size() + 2);
  EXPECT_EQ(m3.space.tests().size(), m.space.tests().size() + 1);
}

TEST(Zoo, MaximallyMixedStateIsUniform) {
  Model m = zoo::make_quantum(3);
  LinearRep rep = build_linear_rep(m);
  CMat rho = CMat::Identity(3, 3) / 3.0;
  StateVec v = rep.values_of(rep.hermitian->coords(rho));
  for (Eigen::Index x = 0; x < v.size(); ++x) EXPECT_NEAR(v(x), 1.0 / 3.0, 1e-12);
}

TEST(Zoo, SpinAntipodalOutcomesSumToOne) {
  Model m = zoo::make_spin_factor(3);
  ASSERT_TRUE(m.spin);
  for (const auto& t : m.space.tests()) {
    ASSERT_EQ(t.size(), 2u);
    for (const auto& s : m.pure_states) EXPECT_NEAR(s(t[0]) + s(t[1]), 1.0, 1e-12);
  }
  for (size_t i = 0; i < m.pure_states.size(); ++i) {
    for (size_t x = 0; x < m.space.size(); ++x) {
      double expect = (1 + m.spin->pure_directions[i].dot(m.spin->outcome_directions[x])) / 2;
      EXPECT_NEAR(m.pure_states[i](static_cast<Eigen::Index>(x)), expect, 1e-12);
    }
  }
}

TEST(Zoo, ByNameResolvesAndRejects) {
  EXPECT_EQ(zoo::by_name("classical:3").space.size(), 3u);
  EXPECT_EQ(zoo::by_name("square-bit").space.size(), 4u);
  EXPECT_EQ(zoo::by_name("spin:3").kind, ModelKind::spin_factor);
  EXPECT_THROW(zoo::by_name("banana:3"), Error);
  EXPECT_THROW(zoo::by_name("classical:0"), Error);
}
