#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "opm/model_io.hpp"
#include "opm/zoo.hpp"

using namespace opm;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InvalidArgument;
}

RawModel bit() {
  RawModel raw;
  raw.outcomes = {"a", "b"};
  raw.tests = {{"a", "b"}};
  raw.pure_states = {{{"a", 1}}, {{"b", 1}}};
  return raw;
}

}  // namespace

TEST(TestSpace, OrthogonalityNeedsDistinctOutcomesInOneTest) {
  Model m = zoo::make_square_bit();
  EXPECT_TRUE(orthogonal(m.space, "x0", "x1"));
  EXPECT_FALSE(orthogonal(m.space, "x0", "y0"));
  EXPECT_FALSE(orthogonal(m.space, "x0", "x0"));
  EXPECT_EQ(m.space.rank(), 2);
}

TEST(TestSpace, DuplicateTestsMerge) {
  TestSpace s({"a", "b"}, std::vector<std::vector<std::string>>{{"a", "b"}, {"b", "a"}});
  EXPECT_EQ(s.tests().size(), 1u);
}

TEST(TestSpace, EmptyTestRejected) {
  EXPECT_EQ(code_of([] { TestSpace s({"a"}, std::vector<std::vector<std::string>>{{"a"}, {}}); }),
            ErrorCode::EmptyTest);
}

TEST(ValidateModel, ClassicalBitIsValid) {
  Model m = validate_model(bit());
  EXPECT_EQ(m.pure_states.size(), 2u);
  EXPECT_DOUBLE_EQ(m.pure_states[0](0), 1.0);
  EXPECT_DOUBLE_EQ(m.pure_states[0](1), 0.0);
}

TEST(ValidateModel, UnnormalizedStateRejected) {
  RawModel raw = bit();
  raw.pure_states.push_back({{"a", 0.7}, {"b", 0.7}});
  EXPECT_EQ(code_of([&] { validate_model(raw); }), ErrorCode::StateSumViolation);
}

TEST(ValidateModel, IndistinguishableOutcomesRejected) {
  RawModel raw;
  raw.outcomes = {"a", "b", "c", "d"};
  raw.tests = {{"a", "b"}, {"c", "d"}};
  raw.pure_states = {{{"a", 1}, {"c", 1}}, {{"b", 1}, {"d", 1}}};
  EXPECT_EQ(code_of([&] { validate_model(raw); }), ErrorCode::NonSeparating);
}

TEST(ValidateModel, UnknownOutcomeInStateRejected) {
  RawModel raw = bit();
  raw.pure_states.push_back({{"z", 1}});
  EXPECT_EQ(code_of([&] { validate_model(raw); }), ErrorCode::UnknownOutcome);
}

TEST(ValidateModel, PermutationBreakingTestsRejected) {
  RawModel raw = to_raw(zoo::make_square_bit());
  raw.permutations = std::vector<std::map<std::string, std::string>>{{{"x0", "y0"}, {"y0", "x0"}}};
  EXPECT_EQ(code_of([&] { validate_model(raw); }), ErrorCode::InvalidGroup);
}

TEST(ValidateModel, SquareBitGroupIsDihedral) {
  Model m = zoo::make_square_bit();
  ASSERT_TRUE(m.group);
  EXPECT_EQ(m.group->order(), 8u);
  // identity first
  for (size_t x = 0; x < 4; ++x) EXPECT_EQ(m.group->elements[0][x], static_cast<Outcome>(x));
}

TEST(ValidateModel, ActOnStateMovesValues) {
  Model m = fixtures::classical_cyclic3();
  ASSERT_EQ(m.group->order(), 3u);
  StateVec a(3);
  a << 0.5, 0.3, 0.2;
  const auto& g = m.group->elements[1];
  StateVec b = act_on_state(g, a);
  for (int x = 0; x < 3; ++x) EXPECT_DOUBLE_EQ(b(g[x]), a(x));
}

TEST(ModelIo, ParsesExactValuesAndRejectsUnknownFields) {
  const char* text = R"({"outcomes": ["a", "b", "c"], "tests": [["a", "b", "c"]],
    "pure_states": [{"a": "1/3", "b": "1/3", "c": "1/3"}, {"a": 1}, {"b": 1}, {"c": 1}]})";
  Model m = validate_model(parse_model_text(text));
  EXPECT_DOUBLE_EQ(m.pure_states[0](0), 1.0 / 3.0);
  EXPECT_EQ(code_of([] { parse_model_text(R"({"outcomes": ["a"], "tests": [["a"]], "pure_states": [{"a": 1}], "colour": 1})"); }),
            ErrorCode::UnknownField);
  EXPECT_EQ(code_of([] { parse_model_text("{not json"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([] { read_model_file("/nonexistent/model.json"); }), ErrorCode::IoError);
}

TEST(ModelIo, RoundTripPreservesModel) {
  Model m = zoo::make_square_bit();
  Json j = model_to_json(m);
  Model back = validate_model(parse_model_json(j));
  EXPECT_EQ(back.space.outcomes(), m.space.outcomes());
  EXPECT_EQ(back.space.tests(), m.space.tests());
  ASSERT_EQ(back.pure_states.size(), m.pure_states.size());
  for (size_t i = 0; i < m.pure_states.size(); ++i) EXPECT_EQ(back.pure_states[i], m.pure_states[i]);
  EXPECT_EQ(back.group->order(), 8u);
}

TEST(ModelIo, AnalyticGroupsOnlyThroughZooNames) {
  EXPECT_EQ(code_of([] {
              validate_model(parse_model_text(
                  R"({"outcomes": ["a", "b"], "tests": [["a", "b"]], "pure_states": [{"a": 1}, {"b": 1}], "group": "unitary"})"));
            }),
            ErrorCode::InvalidGroup);
}

TEST(Bipartite, PrBoxIsNonSignalingWithUniformMarginals) {
  Model m = zoo::make_square_bit();
  BipartiteState w = marginals_and_conditionals(m, fixtures::pr_box_table());
  for (int x = 0; x < 4; ++x) {
    EXPECT_NEAR(w.left_marginal(x), 0.5, 1e-15);
    EXPECT_NEAR(w.right_marginal(x), 0.5, 1e-15);
  }
  EXPECT_LT(w.total_probability_residual, 1e-12);
  // On the y x y block the box anti-correlates.
  ASSERT_TRUE(w.left_given_right[2]);
  EXPECT_NEAR((*w.left_given_right[2])(3), 1.0, 1e-15);
  EXPECT_NEAR((*w.left_given_right[2])(2), 0.0, 1e-15);
}

TEST(Bipartite, SignalingTableRejected) {
  Model m = zoo::make_square_bit();
  Mat t = Mat::Zero(4, 4);
  // Perfect x/x correlation but outcome x0 never occurs against the y test.
  t(0, 0) = 0.5;
  t(1, 1) = 0.5;
  t(1, 2) = 0.5;
  t(1, 3) = 0.5;
  t(2, 0) = 0.25;
  t(2, 1) = 0.25;
  t(3, 0) = 0.25;
  t(3, 1) = 0.25;
  t(2, 2) = 0.25;
  t(2, 3) = 0.25;
  t(3, 2) = 0.25;
  t(3, 3) = 0.25;
  EXPECT_EQ(code_of([&] { marginals_and_conditionals(m, t); }), ErrorCode::Signaling);
}

TEST(Bipartite, CorrelatingStatesFollowABijection) {
  Model m = zoo::make_classical(2);
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 0.5;
  diag(1, 1) = 0.5;
  auto c = is_correlating(m, marginals_and_conditionals(m, diag));
  ASSERT_TRUE(c);
  EXPECT_EQ(c->left, (std::vector<Outcome>{0, 1}));
  EXPECT_EQ(c->right, (std::vector<Outcome>{0, 1}));

  Mat product = Mat::Constant(2, 2, 0.25);
  EXPECT_FALSE(is_correlating(m, marginals_and_conditionals(m, product)));
}
