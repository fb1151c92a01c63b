#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "opm/embedding.hpp"
#include "opm/symmetry.hpp"
#include "opm/zoo.hpp"

using namespace opm;

namespace {

InnerProduct two_trit_ip(const Model& m, const LinearRep& rep) {
  Mat k(6, 6);
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 6; ++y) k(x, y) = fixtures::two_trit_kernel(x, y).get_d();
  }
  Mat e = rep.effect_matrix();
  Mat pinv = e.completeOrthogonalDecomposition().pseudoInverse();
  Mat gram = pinv.transpose() * k * pinv;
  gram = (gram + gram.transpose()) / 2;
  (void)m;
  return make_inner_product(gram, rep.cone_Vstar, "two-trit kernel");
}

}  // namespace

TEST(Symmetry, ClassicalCanonicalGramIsExactDeltaOverN) {
  for (int n = 2; n <= 5; ++n) {
    Model m = zoo::make_classical(n);
    LinearRep rep = build_linear_rep(m);
    InnerProduct ip = canonical_inner_product(m, rep);
    ASSERT_TRUE(ip.exact_gram);
    // Oracle: average of delta_{g(0), x} delta_{g(0), y} over all permutations g.
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<long>> hits(n, std::vector<long>(n, 0));
    long count = 0;
    do {
      hits[perm[0]][perm[0]] += 1;
      ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        QVec ex = (*rep.exact_effect_coords)[x];
        QVec ey = (*rep.exact_effect_coords)[y];
        Rational v = q_dot(ex, q_multiply(*ip.exact_gram, ey));
        Rational expect(hits[x][y], count);
        expect.canonicalize();
        EXPECT_EQ(v, expect) << n << " " << x << " " << y;
      }
    }
    Rational uu = q_dot(*rep.exact_unit, q_multiply(*ip.exact_gram, *rep.exact_unit));
    EXPECT_EQ(uu, Rational(1));
  }
}

TEST(Symmetry, CyclicGroupIsNotFullySymmetric) {
  Model m = fixtures::classical_cyclic3();
  Verdict v = check_full_symmetry(m);
  EXPECT_FALSE(v.holds);
  EXPECT_TRUE(check_full_symmetry(zoo::make_classical(3)).holds);
  EXPECT_TRUE(check_transitive_pure(m).holds);
}

TEST(Symmetry, FullSymmetryBudget) {
  Model m = zoo::make_classical(5);
  EXPECT_THROW(check_full_symmetry(m, 10), Error);
}

TEST(Symmetry, CanonicalFormIsInvariant) {
  for (const char* name : {"classical:4", "square-bit", "quantum:2", "spin:3"}) {
    Model m = zoo::by_name(name);
    LinearRep rep = build_linear_rep(m);
    InnerProduct ip = canonical_inner_product(m, rep);
    EXPECT_LT(invariance_defect(m, rep, ip), 1e-9) << name;
    EXPECT_TRUE(ip.positive_definite) << name;
  }
}

TEST(Symmetry, EffectActionsPermuteOutcomeEffects) {
  Model m = zoo::make_square_bit();
  LinearRep rep = build_linear_rep(m);
  auto acts = effect_actions(m, rep);
  ASSERT_EQ(acts.size(), m.group->order());
  for (size_t g = 0; g < acts.size(); ++g) {
    for (int x = 0; x < 4; ++x) {
      Vec img = acts[g] * rep.effect_coords[x];
      EXPECT_LT((img - rep.effect_coords[m.group->elements[g][x]]).norm(), 1e-12);
    }
  }
}

TEST(Embedding, TwoConnectivity) {
  EXPECT_TRUE(is_two_connected(zoo::make_classical(3).space));
  EXPECT_FALSE(is_two_connected(zoo::make_classical(2).space));
  EXPECT_FALSE(is_two_connected(fixtures::two_trits().space));
  EXPECT_FALSE(is_two_connected(zoo::make_square_bit().space));
}

TEST(Embedding, ClassicalVectorsAreOrthonormalEffects) {
  Model m = zoo::make_classical(3);
  LinearRep rep = build_linear_rep(m);
  InnerProduct ip = canonical_inner_product(m, rep);
  EmbeddingResult emb = embed_outcomes(m, rep, ip);
  EXPECT_NEAR(emb.m, 1.0 / 3, 1e-15);
  EXPECT_NEAR(emb.s, 0.0, 1e-15);
  EmbeddingChecks c = check_embedding(m, rep, ip, emb);
  EXPECT_LT(c.q_sum, 1e-12);
  EXPECT_LT(c.norm_identity, 1e-12);
  EXPECT_LT(c.gram_shift, 1e-12);
  EXPECT_LT(c.unit_norm, 1e-12);
  EXPECT_LT(c.orthogonality, 1e-12);
  // v_x = sqrt(3) x; <v_x, v_y> = 3 * delta / 3.
  for (int x = 0; x < 3; ++x) {
    for (int y = 0; y < 3; ++y) EXPECT_NEAR(ip(emb.v[x], emb.v[y]), x == y ? 1.0 : 0.0, 1e-12);
  }
}

TEST(Embedding, SquaredNormIdentityOnZoo) {
  for (const char* name : {"classical:2", "classical:5", "quantum:2", "quantum:3", "spin:3", "square-bit"}) {
    Model m = zoo::by_name(name);
    LinearRep rep = build_linear_rep(m);
    InnerProduct ip = canonical_inner_product(m, rep);
    EmbeddingResult emb = embed_outcomes(m, rep, ip);
    // sum_{y in E} q_y = 0 gives r^2 + (n - 1) s_q = 0 directly.
    EXPECT_NEAR(emb.r * emb.r + (emb.n - 1) * emb.s_q, 0.0, 1e-10) << name;
    EmbeddingChecks c = check_embedding(m, rep, ip, emb);
    EXPECT_LT(c.q_sum, 1e-10) << name;
    EXPECT_LT(c.gram_shift, 1e-10) << name;
  }
}

TEST(Embedding, TwoTritKernelIsInvariantButNotMinimizing) {
  Model m = fixtures::two_trits();
  LinearRep rep = build_linear_rep(m);
  InnerProduct ip = two_trit_ip(m, rep);
  // The Gram matrix reproduces the kernel on the outcome effects.
  for (int x = 0; x < 6; ++x) {
    for (int y = 0; y < 6; ++y) {
      EXPECT_NEAR(ip(rep.effect_coords[x], rep.effect_coords[y]), fixtures::two_trit_kernel(x, y).get_d(), 1e-12);
    }
  }
  EXPECT_LT(invariance_defect(m, rep, ip), 1e-9);
  EmbeddingResult emb = embed_outcomes(m, rep, ip);
  EXPECT_NEAR(emb.s, 1.0 / 20, 1e-12);
  MinimizingReport r = is_minimizing(m, rep, ip, emb);
  EXPECT_FALSE(r.minimizing);
  EXPECT_NEAR(r.min_value, 1.0 / 50, 1e-12);
  ASSERT_TRUE(ip.minimizing.has_value());
  EXPECT_FALSE(*ip.minimizing);
  try {
    outcome_state(m, ip, emb, 0);
    FAIL() << "outcome state built from a non-minimizing form";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotMinimizing);
  }
}

TEST(Embedding, OutcomeStatesOfClassicalModelArePointMasses) {
  Model m = zoo::make_classical(4);
  LinearRep rep = build_linear_rep(m);
  InnerProduct ip = canonical_inner_product(m, rep);
  EmbeddingResult emb = embed_outcomes(m, rep, ip);
  ASSERT_TRUE(is_minimizing(m, rep, ip, emb).minimizing);
  for (int x = 0; x < 4; ++x) {
    StateVec a = outcome_state(m, ip, emb, x);
    for (int y = 0; y < 4; ++y) EXPECT_NEAR(a(y), x == y ? 1.0 : 0.0, 1e-12);
  }
  EXPECT_TRUE(vectors_in_cone(m, rep, emb).holds);
}
