#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "opm/axioms.hpp"
#include "opm/hermitian.hpp"
#include "opm/zoo.hpp"

using namespace opm;

namespace {

StateVec random_distribution(int n, std::mt19937_64& rng, double floor = 0.05) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  StateVec a(n);
  for (int i = 0; i < n; ++i) a(i) = u(rng);
  return a / a.sum();
}

Mat diagonal_table(const StateVec& a) { return a.asDiagonal(); }

}  // namespace

TEST(Sharpness, ClassicalStatesArePointMasses) {
  Model m = zoo::make_classical(3);
  LinearRep rep = build_linear_rep(m);
  SharpFamily s = check_sharpness(m, rep);
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) EXPECT_DOUBLE_EQ(s.eps[x](y), x == y ? 1.0 : 0.0);
  }
}

TEST(Sharpness, SquareBitFaceIsAnEdge) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  try {
    check_sharpness(m, rep);
    FAIL() << "square bit accepted as sharp";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnique);
  }
}

TEST(Sharpness, QuantumStatesAreProjectors) {
  Model m = zoo::make_quantum(2);
  LinearRep rep = build_linear_rep(m);
  SharpFamily s = check_sharpness(m, rep);
  EXPECT_TRUE(s.analytic);
  const auto& q = *m.quantum;
  for (size_t x = 0; x < m.space.size(); ++x) {
    for (size_t y = 0; y < m.space.size(); ++y) {
      double born = std::norm(q.outcome_vectors[x].dot(q.outcome_vectors[y]));
      EXPECT_NEAR(s.eps[x](static_cast<Eigen::Index>(y)), born, 1e-12);
    }
  }
}

TEST(Dilation, ClassicalDilationIsDiagonal) {
  Model m = zoo::make_classical(3);
  LinearRep rep = build_linear_rep(m);
  StateVec a(3);
  a << 0.2, 0.3, 0.5;
  Dilation d = find_correlating_dilation(m, rep, a);
  EXPECT_EQ(d.method, "lp-exact");
  for (int x = 0; x < 3; ++x) {
    EXPECT_NEAR(d.omega.left_marginal(x), a(x), 1e-12);
    for (int y = 0; y < 3; ++y) EXPECT_NEAR(d.omega.table(x, y), x == y ? a(x) : 0.0, 1e-12);
  }
}

TEST(Dilation, SquareBitEdgeMidpointHasDilation) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  StateVec a(4);
  a << 1, 0, 0.5, 0.5;
  Dilation d = find_correlating_dilation(m, rep, a);
  EXPECT_TRUE(d.exact);
  BipartiteState w = marginals_and_conditionals(m, d.omega.table);
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(w.left_marginal(x), a(x), 1e-12);
  EXPECT_TRUE(is_correlating(m, w));
}

TEST(Spectral, ClassicalWeightsAreTheState) {
  Model m = zoo::make_classical(4);
  LinearRep rep = build_linear_rep(m);
  SharpFamily s = check_sharpness(m, rep);
  std::mt19937_64 rng(8);
  StateVec a = random_distribution(4, rng);
  SpectralDecomposition sd = spectral_decompose(m, rep, s, rep.state_coords_of(a) * 2.0);
  EXPECT_NEAR(sd.mass, 2.0, 1e-12);
  for (size_t k = 0; k < sd.outcomes.size(); ++k) EXPECT_NEAR(sd.weights[k], 2 * a(sd.outcomes[k]), 1e-12);
  EXPECT_LT(sd.reconstruction_residual, 1e-12);
}

TEST(Spectral, QuantumWeightsAreEigenvalues) {
  Model m = zoo::make_quantum(3);
  LinearRep rep = build_linear_rep(m);
  SharpFamily s = check_sharpness(m, rep);
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    CMat rho = herm::random_density(3, rng);
    SpectralDecomposition sd = spectral_decompose(m, rep, s, rep.hermitian->coords(rho));
    std::vector<double> w = sd.weights;
    std::sort(w.begin(), w.end());
    Eigen::SelfAdjointEigenSolver<CMat> es(rho);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(w[k], es.eigenvalues()(k), 1e-9);
    EXPECT_LT(sd.reconstruction_residual, 1e-9);
    EXPECT_LT(sd.conditional_residual, 1e-9);
  }
}

TEST(Spectral, SpinWeightsFromBlochLength) {
  Model m = zoo::make_spin_factor(3);
  LinearRep rep = build_linear_rep(m);
  SharpFamily s = check_sharpness(m, rep);
  Vec mu(4);
  mu << 1, 0.3, -0.4, 0.0;  // |b| = 0.5
  SpectralDecomposition sd = spectral_decompose(m, rep, s, mu);
  std::vector<double> w = sd.weights;
  std::sort(w.begin(), w.end());
  EXPECT_NEAR(w[0], 0.25, 1e-12);
  EXPECT_NEAR(w[1], 0.75, 1e-12);
}

TEST(Filter, ClassicalFilterScalesItsTest) {
  Model m = zoo::make_classical(3);
  LinearRep rep = build_linear_rep(m);
  const opm::Test& t = m.space.tests()[0];
  std::vector<double> f = {0.5, 1.0, 0.25};
  ConeMap map = make_filter(m, rep, t, f);
  for (size_t k = 0; k < t.size(); ++k) {
    Vec x = rep.effect_coords[t[k]];
    EXPECT_LT((map.matrix * x - f[k] * x).norm(), 1e-12);
  }
  EXPECT_THROW(make_filter(m, rep, t, {0.5, 0.0, 1.0}), Error);
  EXPECT_THROW(make_filter(zoo::make_square_bit(), build_linear_rep(zoo::make_square_bit()), {0, 1}, {0.5, 0.5}),
               Error);
}

TEST(Filter, QuantumFilterActsByCongruence) {
  Model m = zoo::make_quantum(2);
  LinearRep rep = build_linear_rep(m);
  const opm::Test& t = m.space.tests()[0];
  ConeMap map = make_filter(m, rep, t, {0.3, 0.8});
  const auto& q = *m.quantum;
  CMat a = std::sqrt(0.3) * herm::projector(q.outcome_vectors[t[0]]) +
           std::sqrt(0.8) * herm::projector(q.outcome_vectors[t[1]]);
  std::mt19937_64 rng(2);
  CMat rho = herm::random_density(2, rng);
  CMat expect = a * rho * a;
  CMat got = rep.hermitian->matrix(map.matrix * rep.hermitian->coords(rho));
  EXPECT_LT((got - expect).norm(), 1e-12);
}

TEST(Filter, SpinFilterAttenuatesBothPoles) {
  Model m = zoo::make_spin_factor(3);
  LinearRep rep = build_linear_rep(m);
  const opm::Test& t = m.space.tests()[0];
  ConeMap map = make_filter(m, rep, t, {0.2, 0.9});
  EXPECT_LT((map.matrix * rep.effect_coords[t[0]] - 0.2 * rep.effect_coords[t[0]]).norm(), 1e-12);
  EXPECT_LT((map.matrix * rep.effect_coords[t[1]] - 0.9 * rep.effect_coords[t[1]]).norm(), 1e-12);
}

TEST(StandardInnerProduct, SquareBitFrameGram) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  InnerProduct ip = standard_inner_product(m, rep);
  // Outcome effects in the (t, x, y) frame.
  std::vector<Vec> frame(4, Vec(3));
  frame[0] << 0.5, 0.5, 0;
  frame[1] << 0.5, -0.5, 0;
  frame[2] << 0.5, 0, 0.5;
  frame[3] << 0.5, 0, -0.5;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) EXPECT_NEAR(ip(rep.effect_coords[x], rep.effect_coords[y]), frame[x].dot(frame[y]), 1e-12);
  }
}

TEST(SelfDuality, SquareBitFailsUnderStandardForm) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  InnerProduct ip = standard_inner_product(m, rep);
  SelfDualityEvidence ev = certify_self_duality(m, rep, ip, nullptr);
  EXPECT_EQ(ev.dual_cone.status, "fails");
  EXPECT_TRUE(ev.dual_cone.evidence.contains("witness"));
  EXPECT_EQ(ev.jordan.status, "fails");
  EXPECT_TRUE(ev.jordan.evidence.contains("witness"));
  EXPECT_FALSE(ev.self_dual);
}

TEST(SelfDuality, ClassicalAndQuantumPassAllMethods) {
  for (const char* name : {"classical:3", "quantum:2"}) {
    Model m = zoo::by_name(name);
    LinearRep rep = build_linear_rep(m);
    WorkingInnerProduct w = working_inner_product(m, rep);
    ASSERT_TRUE(w.found) << name;
    SelfDualityEvidence ev = certify_self_duality(m, rep, w.ip, &w.emb);
    EXPECT_EQ(ev.dual_cone.status, "holds") << name;
    EXPECT_EQ(ev.pure_states.status, "holds") << name;
    EXPECT_EQ(ev.jordan.status, "holds") << name;
    EXPECT_TRUE(ev.self_dual);
  }
}

TEST(Jordan, ClassicalSplitsIntoPositiveAndNegativeParts) {
  Model m = zoo::make_classical(3);
  LinearRep rep = build_linear_rep(m);
  InnerProduct ip = standard_inner_product(m, rep);
  Vec a = rep.effect_coords[0] * 2 - rep.effect_coords[1];
  JordanDecomposition j = orthogonal_jordan_decompose(a, rep.cone_Vstar, ip);
  EXPECT_LT((j.plus - 2 * rep.effect_coords[0]).norm(), 1e-9);
  EXPECT_LT((j.minus - rep.effect_coords[1]).norm(), 1e-9);
  EXPECT_NEAR(j.pairing, 0, 1e-9);
}

TEST(Homogeneity, ClassicalMapIsDiagonalRatio) {
  Model m = zoo::make_classical(3);
  LinearRep rep = build_linear_rep(m);
  WorkingInnerProduct w = working_inner_product(m, rep);
  SharpFamily s = check_sharpness(m, rep);
  Vec a(3), b(3);
  a << 0.5, 1.0, 0.25;
  b << 0.2, 0.4, 0.9;
  HomogeneityResult h = homogeneity_map(m, rep, w.ip, s, a, b);
  EXPECT_LT((h.map.matrix * a - b).norm(), 1e-12);
  // Effects of a single-test model: any automorphism fixing the test
  // pointwise up to scale is diagonal, and this one must scale by b/a.
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(h.map.matrix(i, i), b(i) / a(i), 1e-12);
}

TEST(Homogeneity, QuantumMapIsCertified) {
  Model m = zoo::make_quantum(2);
  LinearRep rep = build_linear_rep(m);
  WorkingInnerProduct w = working_inner_product(m, rep);
  SharpFamily s = check_sharpness(m, rep);
  std::mt19937_64 rng(13);
  Vec a = rep.hermitian->coords(herm::random_density(2, rng) * 1.5);
  Vec b = rep.hermitian->coords(herm::random_density(2, rng) * 0.7);
  HomogeneityResult h = homogeneity_map(m, rep, w.ip, s, a, b);
  EXPECT_LT((h.map.matrix * a - b).norm(), 1e-9);
  // Independently check positivity: images of rank-one projectors are PSD.
  for (int k = 0; k < 20; ++k) {
    CMat p = herm::projector(herm::haar_state(2, rng));
    CMat img = rep.hermitian->matrix(h.map.matrix * rep.hermitian->coords(p));
    Eigen::SelfAdjointEigenSolver<CMat> es(img);
    EXPECT_GT(es.eigenvalues()(0), -1e-9);
  }
}

TEST(Steering, PrBoxIsAnIsomorphismState) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  IsomorphismCheck c = is_isomorphism_state(m, rep, fixtures::pr_box_table());
  EXPECT_TRUE(c.holds) << c.diagnostics.dump();
  Mat product = Mat::Constant(4, 4, 0.25);
  EXPECT_FALSE(is_isomorphism_state(m, rep, product).holds);
}

TEST(Steering, ClassicalSteeringMatchesDiagonalRatio) {
  Model m = zoo::make_classical(3);
  LinearRep rep = build_linear_rep(m);
  std::mt19937_64 rng(31);
  StateVec a = random_distribution(3, rng);
  StateVec b = random_distribution(3, rng);
  ConeMap t = homogeneity_via_steering(m, rep, diagonal_table(a), diagonal_table(b));
  Vec sa = rep.state_coords_of(a);
  Vec sb = rep.state_coords_of(b);
  EXPECT_LT((t.matrix * sa - sb).norm(), 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(t.matrix(i, i), b(i) / a(i), 1e-12);
}

TEST(Steering, RejectsNonIsomorphismStates) {
  Model m = zoo::make_classical(2);
  LinearRep rep = build_linear_rep(m);
  Mat product = Mat::Constant(2, 2, 0.25);
  try {
    homogeneity_via_steering(m, rep, product, product);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotIsomorphismState);
  }
}

TEST(Pipeline, ZooModelsHoldEverywhere) {
  for (const char* name : {"classical:2", "classical:3", "quantum:2", "spin:3"}) {
    AxiomReport r = verify_axioms(zoo::by_name(name));
    EXPECT_TRUE(r.all_hold()) << name << r.to_json().dump(1);
    EXPECT_TRUE(r.certificate.has_value());
  }
}

TEST(Pipeline, SquareBitStopsAtSharpness) {
  AxiomReport r = verify_axioms(zoo::make_square_bit());
  EXPECT_FALSE(r.all_hold());
  ASSERT_NE(r.stage("sharpness"), nullptr);
  EXPECT_EQ(r.stage("sharpness")->status, "fails");
  EXPECT_EQ(r.stage("homogeneity")->status, "not_checked");
  EXPECT_FALSE(r.certificate.has_value());
}

TEST(Pipeline, TwoTritsAreNotFullySymmetric) {
  AxiomReport r = verify_axioms(fixtures::two_trits());
  ASSERT_NE(r.stage("full_symmetry"), nullptr);
  EXPECT_EQ(r.stage("full_symmetry")->status, "fails");
}

TEST(Pipeline, DeterministicReports) {
  AxiomOptions o;
  o.seed = 5;
  EXPECT_EQ(verify_axioms(zoo::make_quantum(2), o).to_json().dump(), verify_axioms(zoo::make_quantum(2), o).to_json().dump());
}
