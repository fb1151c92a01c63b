#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "opm/entropy.hpp"
#include "opm/hermitian.hpp"
#include "opm/zoo.hpp"

using namespace opm;

namespace {

double plain_shannon(const std::vector<double>& p) {
  double h = 0;
  for (double v : p) {
    if (v > 0) h -= v * std::log(v) / std::log(2.0);
  }
  return h;
}

}  // namespace

TEST(Shannon, KnownValuesAndPermutationInvariance) {
  EXPECT_EQ(shannon_bits({0.5, 0.5}), 1.0);
  EXPECT_EQ(shannon_bits({1.0, 0.0}), 0.0);
  EXPECT_NEAR(shannon_bits({0.25, 0.25, 0.25, 0.25}), 2.0, 1e-15);
  std::vector<double> p = {0.1, 0.2, 0.3, 0.4};
  std::vector<double> q = {0.4, 0.1, 0.3, 0.2};
  EXPECT_EQ(shannon_bits(p), shannon_bits(q));
  EXPECT_NEAR(shannon_bits(p), plain_shannon(p), 1e-14);
}

TEST(Entropy, ClassicalIsShannonOfTheState) {
  Model m = zoo::make_classical(4);
  LinearRep rep = build_linear_rep(m);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 1);
  for (int trial = 0; trial < 10; ++trial) {
    StateVec a(4);
    for (int i = 0; i < 4; ++i) a(i) = u(rng);
    a /= a.sum();
    EntropyReport r = entropy_report(m, rep, a);
    double expect = plain_shannon({a(0), a(1), a(2), a(3)});
    EXPECT_NEAR(r.h.value, expect, 1e-12);
    EXPECT_NEAR(r.s.value, expect, 1e-12);
    EXPECT_EQ(r.s.bound, "exact");
    EXPECT_TRUE(r.monoentropic);
  }
}

TEST(Entropy, QuantumIsVonNeumann) {
  Model m = zoo::make_quantum(2);
  LinearRep rep = build_linear_rep(m);
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    CMat rho = herm::random_density(2, rng);
    StateVec a = rep.values_of(rep.hermitian->coords(rho));
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    double expect = plain_shannon({es.eigenvalues()(0), es.eigenvalues()(1)});
    EntropyReport r = entropy_report(m, rep, a);
    EXPECT_NEAR(r.h.value, expect, 1e-9);
    EXPECT_NEAR(r.s.value, expect, 1e-9);
    EXPECT_GE(r.h.listed_minimum, r.h.value - 1e-12);
  }
}

TEST(Entropy, SquareBitEdgeMidpoint) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  StateVec a(4);
  a << 1, 0, 0.5, 0.5;
  EntropyReport r = entropy_report(m, rep, a);
  EXPECT_EQ(r.h.value, 0.0);
  EXPECT_EQ(r.s.value, 1.0);
  EXPECT_EQ(r.s.bound, "exact");
  EXPECT_FALSE(r.monoentropic);
}

TEST(Entropy, SquareBitCentre) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  StateVec a = StateVec::Constant(4, 0.5);
  EntropyReport r = entropy_report(m, rep, a);
  EXPECT_EQ(r.h.value, 1.0);
  EXPECT_EQ(r.s.value, 1.0);
}

TEST(Entropy, GroupInvarianceIsExact) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  StateVec a(4);
  a << 0.3, 0.7, 0.9, 0.1;
  EntropyReport base = entropy_report(m, rep, a);
  for (const auto& g : m.group->elements) {
    EntropyReport r = entropy_report(m, rep, act_on_state(g, a));
    EXPECT_EQ(r.h.value, base.h.value);
  }
}

TEST(Entropy, StateOutsideOmegaRejected) {
  RawModel raw;
  raw.outcomes = {"a", "b"};
  raw.tests = {{"a", "b"}};
  raw.pure_states = {{{"a", 0.75}, {"b", 0.25}}, {{"a", 0.25}, {"b", 0.75}}};
  Model m = validate_model(raw);
  LinearRep rep = build_linear_rep(m);
  StateVec a(2);
  a << 1, 0;
  try {
    mixing_entropy(m, rep, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInOmega);
    EXPECT_TRUE(e.witness().contains("farkas"));
  }
}

TEST(Entropy, BudgetExhaustionIsLabelled) {
  Model m = zoo::make_classical(5);
  LinearRep rep = build_linear_rep(m);
  StateVec a = StateVec::Constant(5, 0.2);
  MixingEntropy s = mixing_entropy(m, rep, a, {}, 3);
  EXPECT_EQ(s.bound, "upper bound");
  EXPECT_GE(s.value, plain_shannon({0.2, 0.2, 0.2, 0.2, 0.2}) - 1e-12);
}

TEST(Monoentropy, ClassicalHoldsAndSquareBitFails) {
  Model c = zoo::make_classical(3);
  LinearRep rc = build_linear_rep(c);
  StateVec a(3);
  a << 0.2, 0.3, 0.5;
  StateVec e(3);
  e << 1, 0, 0;
  MonoentropyReport mc = monoentropy_check(c, rc, {a, e});
  EXPECT_TRUE(mc.monoentropic);
  EXPECT_TRUE(mc.zero_entropy_chain);

  Model s = zoo::make_square_bit();
  LinearRep rs = build_linear_rep(s);
  StateVec mid(4);
  mid << 1, 0, 0.5, 0.5;
  MonoentropyReport ms = monoentropy_check(s, rs, {mid});
  EXPECT_FALSE(ms.monoentropic);
  EXPECT_FALSE(ms.zero_entropy_chain);
  EXPECT_NEAR(ms.worst_gap, 1.0, 1e-12);
}
