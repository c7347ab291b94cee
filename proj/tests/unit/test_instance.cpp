#include <gtest/gtest.h>

#include <random>

#include "khier/generators.hpp"
#include "khier/instance.hpp"
#include "support/oracles.hpp"

namespace khier {
namespace {

SdpSystem permuted(const SdpSystem& sys, int a, int b) {
  Matrix<Rational> P = Matrix<Rational>::identity(sys.n);
  P(a, a) = P(b, b) = 0;
  P(a, b) = P(b, a) = 1;
  SdpSystem out = sys;
  for (auto& A : out.A) A = congruence(A, P);
  out.B = congruence(out.B, P);
  return out;
}

TEST(ValidateRegular, Khachiyan) {
  BlockPartition p = validate_regular(gen_khachiyan(4));
  EXPECT_EQ(p.k, 4);
  EXPECT_EQ(p.r, (std::vector<int>{1, 1, 1, 1}));
  EXPECT_EQ(p.block(5).members(), std::vector<int>{5});
  EXPECT_FALSE(p.degenerate());
}

TEST(ValidateRegular, Mild) {
  BlockPartition p = validate_regular(gen_mild(4));
  EXPECT_EQ(p.k, 4);
  EXPECT_EQ(p.r, (std::vector<int>{1, 1, 1, 1}));
}

TEST(ValidateRegular, NoLeadingIdentity) {
  SdpSystem s;
  s.n = 2;
  s.m = 1;
  SymMatrix<Rational> A(2);
  A.set(0, 1, 1);
  s.A = {A};
  s.B = SymMatrix<Rational>(2);
  EXPECT_EQ(validate_regular(s).k, 0);
}

TEST(ValidateRegular, IdempotentAndPermutationSensitive) {
  for (int m = 2; m <= 6; ++m) {
    SdpSystem s = gen_khachiyan(m);
    BlockPartition a = validate_regular(s), b = validate_regular(s);
    EXPECT_EQ(a.k, b.k);
    EXPECT_EQ(a.r, b.r);
    EXPECT_EQ(validate_regular(permuted(s, 0, m)).k, 0);
  }
}

TEST(ValidateRegular, DegeneratePartition) {
  SdpSystem s;
  s.n = 3;
  s.m = 1;
  s.A = {SymMatrix<Rational>::identity(3)};
  s.B = SymMatrix<Rational>(3);
  BlockPartition p = validate_regular(s);
  EXPECT_EQ(p.k, 1);
  EXPECT_EQ(p.r, std::vector<int>{3});
  EXPECT_TRUE(p.degenerate());
  EXPECT_TRUE(p.block(2).empty());
}

TEST(BlockPartitionTest, IndexSetsAreConsecutive) {
  BlockPartition p{7, 3, {2, 1, 3}};
  EXPECT_EQ(p.block(1).members(), (std::vector<int>{1, 2}));
  EXPECT_EQ(p.block(2).members(), std::vector<int>{3});
  EXPECT_EQ(p.block(3).members(), (std::vector<int>{4, 5, 6}));
  EXPECT_EQ(p.block(4).members(), std::vector<int>{7});
  EXPECT_EQ(p.trailing(3).members(), (std::vector<int>{4, 5, 6, 7}));
}

TEST(TailIndices, KnownExamples) {
  auto tails = [](const SdpSystem& s) { return tail_indices(s, validate_regular(s)).t; };
  EXPECT_EQ(tails(gen_khachiyan(4)), (std::vector<int>{5, 5, 5}));
  EXPECT_EQ(tails(gen_mild(4)), (std::vector<int>{3, 4, 5}));
  // x_2 shifted one block to the right
  EXPECT_EQ(tails(gen_tail_pattern({4, 4, 5}, 4)), (std::vector<int>{4, 4, 5}));
}

TEST(TailIndices, PivotsAreLexicographicAndDeterministic) {
  SdpSystem s = gen_mild(5);
  BlockPartition p = validate_regular(s);
  TailIndexVector a = tail_indices(s, p), b = tail_indices(s, p);
  ASSERT_EQ(a.pivots.size(), b.pivots.size());
  for (std::size_t i = 0; i < a.pivots.size(); ++i) {
    EXPECT_EQ(a.pivots[i].l1, b.pivots[i].l1);
    EXPECT_EQ(a.pivots[i].l2, b.pivots[i].l2);
    EXPECT_EQ(a.pivots[i].beta, b.pivots[i].beta);
    EXPECT_EQ(a.pivots[i].l1, int(i) + 1);
    EXPECT_EQ(a.pivots[i].l2, int(i) + 3);
  }
}

TEST(TailIndices, GeneratorFamiliesHaveValidTails) {
  std::vector<SdpSystem> all = {gen_khachiyan(5), gen_mild(5), gen_exact_khachiyan(4), gen_perturbed_khachiyan(),
                                gen_polyopt({1, 0, 0, 0, 0, 0, 1}).system, gen_odonnell(4)};
  for (const auto& s : all) {
    BlockPartition p = validate_regular(s);
    TailIndexVector t = tail_indices(s, p);
    for (int j = 1; j <= p.k - 1; ++j) EXPECT_GT(t.tail(j + 1), j + 1) << s.label;
  }
}

TEST(TailIndices, MissingCouplingIsMalformed) {
  SdpSystem s = gen_khachiyan(3);
  s.A[1] = SymMatrix<Rational>(4);
  s.A[1].set(1, 1, 1);
  EXPECT_THROW(tail_indices(s, validate_regular(s)), Error);
}

TEST(TailIndices, InvalidTailsAreDetected) {
  EXPECT_TRUE(tails_valid({3, 4, 5}, 4));
  EXPECT_FALSE(tails_valid({2, 4, 5}, 4));
  EXPECT_FALSE(tails_valid({3, 6, 5}, 4));
}

TEST(FixedPart, MissingTailIsNotPartiallyStrict) {
  SdpSystem s = gen_polyopt({1, 0, 0, 0, 0, 0, 1}).system;
  s.fixed_tail.reset();
  try {
    fixed_part(s, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPartiallyStrict);
  }
}

TEST(Json, RoundTripIsByteIdentical) {
  std::vector<SdpSystem> all = {gen_khachiyan(4), gen_mild(4), gen_perturbed_khachiyan(),
                                gen_polyopt({1, 0, -3, 0, 0, 0, 1}).system, gen_odonnell(3)};
  for (const auto& s : all) {
    std::string text = to_json(s);
    EXPECT_EQ(to_json(parse_instance(text)), text);
  }
}

TEST(Json, ScrambledRationalsSurvive) {
  SdpSystem s = testing::scramble(gen_mild(3), 5);
  s.A[0].set(0, 1, Rational(-7, 3));
  std::string text = to_json(s);
  SdpSystem back = parse_instance(text);
  for (int i = 0; i < s.m; ++i) EXPECT_EQ(back.A[i], s.A[i]);
  EXPECT_EQ(back.B, s.B);
}

TEST(Json, CanonicalKeysAndScalars) {
  std::string text = to_json(gen_khachiyan(2));
  EXPECT_EQ(text.find("\"A\""), 1u);
  EXPECT_NE(text.find("[1,3,\"1\"]"), std::string::npos);
}

TEST(Json, ParseErrorsCarryContext) {
  auto code = [](const std::string& text) {
    try {
      parse_instance(text);
    } catch (const Error& e) {
      return std::make_pair(e.code(), std::string(e.what()));
    }
    return std::make_pair(ErrorCode::VerificationFail, std::string());
  };
  auto [c1, w1] = code(R"({"n":2,"m":1,"A":[[[2,1,"1"]]],"B":[]})");
  EXPECT_EQ(c1, ErrorCode::ParseError);
  EXPECT_NE(w1.find("A[0]"), std::string::npos) << w1;
  auto [c2, w2] = code(R"({"n":2,"m":1,"A":[[[1,1,"1/0"]]],"B":[]})");
  EXPECT_EQ(c2, ErrorCode::ParseError);
  auto [c3, w3] = code(R"({"n":2,"m":1,"A":[[[1,1,"1"],[1,1,"2"]]],"B":[]})");
  EXPECT_EQ(c3, ErrorCode::ParseError);
  auto [c4, w4] = code(R"({"n":2,"m":2,"A":[[[1,1,"1"]]],"B":[]})");
  EXPECT_EQ(c4, ErrorCode::ParseError);
  auto [c5, w5] = code("{not json");
  EXPECT_EQ(c5, ErrorCode::ParseError);
  auto [c6, w6] = code(R"({"n":2,"m":1,"A":[[[1,3,"1"]]],"B":[]})");
  EXPECT_EQ(c6, ErrorCode::ParseError);
}

TEST(Evaluate, MatchesHandComputation) {
  SdpSystem s = gen_khachiyan(2);
  auto S = evaluate(s, {Rational(5), Rational(2)});
  EXPECT_EQ(S(0, 0), Rational(5));
  EXPECT_EQ(S(1, 1), Rational(2));
  EXPECT_EQ(S(0, 2), Rational(2));
  EXPECT_EQ(S(2, 2), Rational(1));
  auto R = evaluate_real(s, 2, {Real(5), Real(2)});
  EXPECT_EQ(to_real(S), R);
}

}  // namespace
}  // namespace khier
