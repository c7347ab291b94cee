#include <gtest/gtest.h>

#include "khier/generators.hpp"
#include "khier/reduce.hpp"
#include "support/oracles.hpp"

namespace khier {
namespace {

SymMatrix<Rational> diag(std::initializer_list<Rational> d) {
  SymMatrix<Rational> M(int(d.size()));
  int i = 0;
  for (const auto& v : d) M.set(i, i, v), ++i;
  return M;
}

TEST(ConeAlternative, PsdInSpan) {
  SymMatrix<Rational> E12(2);
  E12.set(0, 1, 1);
  auto alt = cone_alternative(std::vector<SymMatrix<Rational>>{diag({1, 0}), E12});
  ASSERT_EQ(alt.kind, ConeAlternative::Kind::NONZERO_PSD_IN_SPAN);
  EXPECT_EQ(alt.rank, 1);
  EXPECT_GT(abs(alt.lambda[0]), Real("1e-3"));
  EXPECT_LT(abs(alt.lambda[1]), Real("1e-30"));
}

TEST(ConeAlternative, PdInOrthogonalComplement) {
  SymMatrix<Rational> E12(2);
  E12.set(0, 1, 1);
  auto alt = cone_alternative(std::vector<SymMatrix<Rational>>{diag({1, -1}), E12});
  ASSERT_EQ(alt.kind, ConeAlternative::Kind::PD_IN_PERP);
  auto ev = testing::jacobi_eigenvalues(alt.W);
  EXPECT_GT(ev[0], Real("1e-3"));
  EXPECT_LT(abs(alt.W(0, 0) - alt.W(1, 1)), Real("1e-30"));
  EXPECT_LT(abs(alt.W(0, 1)), Real("1e-30"));
}

TEST(ConeAlternative, NearSingularIsAmbiguous) {
  try {
    cone_alternative(std::vector<SymMatrix<Rational>>{diag({1, Rational(-1, 1000000000000000LL)})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericallyAmbiguous);
  }
}

struct Case {
  SdpSystem base;
  int k;
};

std::vector<Case> families() {
  return {{gen_khachiyan(4), 4}, {gen_mild(4), 4}, {gen_polyopt({1, 0, 0, 0, 0, 0, 1}).system, 3}};
}

TEST(FacialReduction, RecoversKnownDegreeAfterScramble) {
  for (const auto& c : families())
    for (std::uint64_t seed : {1u, 2u}) {
      SdpSystem in = testing::scramble(c.base, seed);
      ReductionResult r = facial_reduction(in);
      EXPECT_EQ(r.certificate.k, c.k) << c.base.label << " seed " << seed;
      EXPECT_EQ(r.certificate.ranks, std::vector<int>(c.k, 1));
      EXPECT_LT(round_trip_error(in, r.system, r.certificate), ldexp(Real(1), -30));
      BlockPartition p = validate_regular(r.system);
      EXPECT_GE(p.k, c.k);
      EXPECT_FALSE(r.certificate.minimality_claimed);
    }
}

TEST(FacialReduction, RegularInputKeepsDegree) {
  ReductionResult r = facial_reduction(gen_khachiyan(3));
  EXPECT_EQ(r.certificate.k, 3);
  EXPECT_EQ(r.certificate.exact_steps, 3);
  EXPECT_EQ(validate_regular(r.system).k, 3);
}

TEST(FacialReduction, DegreeInvariantUnderRowOps) {
  std::mt19937_64 rng(31);
  SdpSystem base = gen_mild(4);
  for (int trial = 0; trial < 3; ++trial) {
    Matrix<Rational> G = testing::random_invertible(rng, base.m);
    EXPECT_EQ(singularity_degree(testing::scramble(base, G, Matrix<Rational>::identity(base.n))), 4);
  }
}

TEST(FacialReduction, IdentityLeadIsDegreeOne) {
  SdpSystem s;
  s.n = 3;
  s.m = 2;
  SymMatrix<Rational> A2(3);
  A2.set(0, 1, 1);
  s.A = {SymMatrix<Rational>::identity(3), A2};
  s.B = SymMatrix<Rational>(3);
  ReductionResult r = facial_reduction(s);
  EXPECT_EQ(r.certificate.k, 1);
  EXPECT_EQ(r.certificate.ranks, std::vector<int>{3});
  EXPECT_TRUE(r.certificate.degenerate);
}

TEST(FacialReduction, AmbiguousInstanceRaises) {
  SdpSystem s;
  s.n = 2;
  s.m = 1;
  s.A = {diag({1, Rational(-1, 1000000000000000LL)})};
  s.B = SymMatrix<Rational>(2);
  try {
    facial_reduction(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericallyAmbiguous);
  }
}

TEST(Certificate, JsonRoundTrip) {
  SdpSystem in = testing::scramble(gen_khachiyan(3), 7);
  ReductionResult r = facial_reduction(in);
  std::string text = certificate_to_json(r.certificate);
  FrCertificate back = parse_certificate(text);
  EXPECT_EQ(back.k, r.certificate.k);
  EXPECT_EQ(back.ranks, r.certificate.ranks);
  EXPECT_EQ(back.row_ops, r.certificate.row_ops);
  EXPECT_EQ(back.exact_steps, r.certificate.exact_steps);
  EXPECT_EQ(certificate_to_json(back), text);
  EXPECT_LT(round_trip_error(in, r.system, back), ldexp(Real(1), -30));
  EXPECT_THROW(parse_certificate("{}"), Error);
}

}  // namespace
}  // namespace khier
