#include <gtest/gtest.h>

#include <cmath>

#include "opm/cone.hpp"
#include "opm/hermitian.hpp"

using namespace opm;

namespace {

// Square cone {t >= |x|, t >= |y|} in (t, x, y), generated by (1, +-1, +-1).
Cone square_cone() {
  QMat g;
  for (int sx : {1, -1}) {
    for (int sy : {1, -1}) g.push_back({Rational(1), Rational(sx), Rational(sy)});
  }
  return Cone::from_generators({}, g);
}

Cone diamond_cone() {
  QMat g = {{1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1}};
  return Cone::from_generators({}, g);
}

InnerProduct euclid(const Cone& c) {
  return make_inner_product(Mat::Identity(c.dim(), c.dim()), c, "euclidean", {}, q_identity(static_cast<size_t>(c.dim())));
}

}  // namespace

TEST(Cone, SquareConeFacetsAndMembership) {
  Cone c = square_cone();
  EXPECT_TRUE(c.exact());
  EXPECT_EQ(c.facets().size(), 4u);
  EXPECT_TRUE(c.contains(Vec::Unit(3, 0), 0));
  EXPECT_FALSE(c.contains(Vec::Unit(3, 2), 1e-12));
  EXPECT_TRUE(c.contains_exact({Rational(2), Rational(-2), Rational(1)}));
  EXPECT_FALSE(c.contains_exact({Rational(2), Rational(-3), Rational(1)}));
}

TEST(Cone, DualOfSquareIsDiamond) {
  Cone sq = square_cone();
  Cone dual = dual_cone(sq, euclid(sq));
  ConeEquality eq = compare_cones(dual, diamond_cone());
  EXPECT_TRUE(eq.equal) << eq.witness.dump();
  EXPECT_TRUE(eq.exact);
  EXPECT_FALSE(compare_cones(sq, diamond_cone()).equal);
}

TEST(Cone, ProjectionMatchesGridSearch) {
  Cone sq = square_cone();
  InnerProduct ip = euclid(sq);
  Vec a(3);
  a << 0, 0, 1;
  // Brute-force nearest point over a grid of cone points.
  const int steps = 50;
  Vec best = Vec::Zero(3);
  double best_d = a.norm();
  for (int i = 0; i <= steps; ++i) {
    double t = static_cast<double>(i) / steps;
    for (int j = -i; j <= i; ++j) {
      for (int k = -i; k <= i; ++k) {
        Vec p(3);
        p << t, static_cast<double>(j) / steps, static_cast<double>(k) / steps;
        double d = (p - a).norm();
        if (d < best_d) {
          best_d = d;
          best = p;
        }
      }
    }
  }
  Projection pr = cone_project(a, sq, ip);
  EXPECT_LT((pr.point - best).norm(), 2.0 / steps);
  EXPECT_LE((pr.point - a).norm(), best_d + 1e-12);
  Vec expect(3);
  expect << 0.5, 0, 0.5;
  EXPECT_LT((pr.point - expect).norm(), 1e-9);
  Projection alt = cone_project_alternate(a, sq, ip);
  EXPECT_LT((alt.point - pr.point).norm(), 1e-6);
}

TEST(Cone, ProjectionSatisfiesMoreauDecomposition) {
  Cone sq = square_cone();
  InnerProduct ip = euclid(sq);
  Cone dual = dual_cone(sq, ip);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 20; ++trial) {
    Vec a(3);
    for (int i = 0; i < 3; ++i) a(i) = n01(rng);
    Vec p = cone_project(a, sq, ip).point;
    Vec r = p - a;  // lies in the dual cone
    EXPECT_TRUE(sq.contains(p, 1e-9));
    EXPECT_TRUE(dual.contains(r, 1e-9));
    EXPECT_NEAR(p.dot(r), 0.0, 1e-9);
  }
}

TEST(Cone, PsdProjectionClipsNegativeEigenvalue) {
  Cone c = Cone::psd(2);
  herm::HermitianBasis basis(2);
  CMat a = CMat::Zero(2, 2);
  a(0, 0) = 1;
  a(1, 1) = -2;
  Projection pr = cone_project(basis.coords(a), c, euclid(c));
  CMat p = basis.matrix(pr.point);
  CMat expect = CMat::Zero(2, 2);
  expect(0, 0) = 1;
  EXPECT_LT((p - expect).norm(), 1e-9);
}

TEST(Cone, LorentzProjectionOfSpatialVector) {
  Cone c = Cone::second_order(2);
  Vec a(3);
  a << 0, 2, 0;
  Projection pr = cone_project(a, c, euclid(c));
  Vec expect(3);
  expect << 1, 1, 0;
  EXPECT_LT((pr.point - expect).norm(), 1e-9);
}

TEST(ConeMap, SwapOfSquareIsAutomorphism) {
  Mat t = Mat::Zero(3, 3);
  t(0, 0) = 1;
  t(1, 2) = 1;
  t(2, 1) = 1;
  ConeMap m = is_order_automorphism(t, square_cone());
  EXPECT_NEAR(m.condition, 1.0, 1e-12);
}

TEST(ConeMap, QuarterTurnRotationIsNotAutomorphism) {
  Mat t = Mat::Identity(3, 3);
  double c = std::sqrt(0.5);
  t(1, 1) = c;
  t(1, 2) = -c;
  t(2, 1) = c;
  t(2, 2) = c;
  try {
    is_order_automorphism(t, square_cone());
    FAIL() << "rotation accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConeViolation);
  }
}

TEST(ConeMap, SingularMapRejected) {
  Mat t = Mat::Identity(3, 3);
  t(2, 2) = 0;
  try {
    is_order_automorphism(t, square_cone());
    FAIL() << "singular map accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInvertible);
  }
}

TEST(InnerProduct, IndefiniteGramIsFlagged) {
  Mat g = Mat::Identity(3, 3);
  g(2, 2) = -1;
  InnerProduct ip = make_inner_product(g, square_cone(), "test");
  EXPECT_FALSE(ip.positive_definite);
}

TEST(LinearRep, ClassicalCoordinatesPairToOutcomeValues) {
  RawModel raw;
  raw.outcomes = {"a", "b", "c"};
  raw.tests = {{"a", "b", "c"}};
  raw.pure_states = {{{"a", 1}}, {{"b", 1}}, {{"c", 1}}};
  Model m = validate_model(raw);
  LinearRep rep = build_linear_rep(m);
  EXPECT_EQ(rep.dim, 3);
  StateVec alpha(3);
  alpha << 0.2, 0.3, 0.5;
  Vec s = rep.state_coords_of(alpha);
  for (int x = 0; x < 3; ++x) EXPECT_NEAR(rep.effect_coords[x].dot(s), alpha(x), 1e-12);
  EXPECT_NEAR(rep.unit.dot(s), 1.0, 1e-12);
}
