#include <gtest/gtest.h>

#include "khier/generators.hpp"
#include "khier/verify.hpp"
#include "support/oracles.hpp"

namespace khier {
namespace {

// Sylvester's criterion in exact arithmetic.
bool exact_pd(const SdpSystem& s, const std::vector<Real>& x) {
  std::vector<Rational> xq;
  for (const auto& v : x) xq.push_back(exact_rational(v));
  if (s.fixed_tail)
    for (const auto& v : *s.fixed_tail) xq.push_back(v);
  xq.resize(s.m, Rational(0));
  SymMatrix<Rational> S = evaluate(s, xq);
  for (int d = 1; d <= s.n; ++d) {
    Matrix<Rational> lead(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) lead(a, b) = S(a, b);
    if (!(determinant(lead) > 0)) return false;
  }
  return true;
}

TEST(TrailingBlock, Khachiyan) {
  SdpSystem s = gen_khachiyan(3);
  BlockPartition p = validate_regular(s);
  EXPECT_TRUE(trailing_block_pd(s, p, 3, {Real(0), Real(0), Real(1)}));
  EXPECT_FALSE(trailing_block_pd(s, p, 2, {Real(0), Real(1), Real(2)}));
  EXPECT_TRUE(trailing_block_pd(s, p, 2, {Real(0), Real(5), Real(2)}));
}

TEST(MinimalCompletion, KhachiyanSquare) {
  SdpSystem s = gen_khachiyan(2);
  BlockPartition p = validate_regular(s);
  Real v = minimal_completion(s, p, 1, {Real(0), Real(4)});
  EXPECT_GE(v, Real(16));
  EXPECT_LE(v, Real(16) * (1 + ldexp(Real(1), -19)));
}

TEST(MinimalCompletion, MildCorrectedExample) {
  SdpSystem s = gen_mild(4);
  BlockPartition p = validate_regular(s);
  // x_2 x_4 > x_3^2 with x_3 = 5, x_4 = 2
  Real v = minimal_completion(s, p, 2, {Real(0), Real(0), Real(5), Real(2)});
  EXPECT_LT(abs(v - Real("12.5")), Real("12.5") * ldexp(Real(1), -19));
  // x_3 = 4, x_4 = 2 leaves the trailing block singular
  EXPECT_THROW(minimal_completion(s, p, 2, {Real(0), Real(0), Real(4), Real(2)}), Error);
}

TEST(MinimalCompletion, NegativeInfimum) {
  SdpSystem s;
  s.n = 2;
  s.m = 1;
  SymMatrix<Rational> A(2);
  A.set(0, 0, 1);
  s.A = {A};
  s.B = SymMatrix<Rational>::identity(2);
  BlockPartition p = validate_regular(s);
  ASSERT_EQ(p.k, 1);
  Real v = minimal_completion(s, p, 1, {Real(0)});
  EXPECT_LT(abs(v + 1), ldexp(Real(1), -19));
}

TEST(MinimalCompletion, RejectsBadArguments) {
  SdpSystem s = gen_khachiyan(3);
  BlockPartition p = validate_regular(s);
  EXPECT_THROW(minimal_completion(s, p, 0, {Real(0), Real(0), Real(1)}), Error);
  EXPECT_THROW(minimal_completion(s, p, 1, {Real(1)}), Error);
}

TEST(GreedyPoint, IsStrictlyFeasibleExactly) {
  std::vector<SdpSystem> all = {gen_khachiyan(4), gen_mild(5), gen_perturbed_khachiyan(),
                                gen_tail_pattern({4, 4, 6, 6}, 5), gen_polyopt({1, 0, 0, 0, 0, 0, 1}).system};
  for (const auto& s : all) {
    BlockPartition p = validate_regular(s);
    for (int e : {1, 5, 20}) {
      auto x = greedy_strict_point(s, p, ldexp(Real(1), e));
      EXPECT_TRUE(exact_pd(s, x)) << s.label << " M=2^" << e;
      for (const auto& v : x) EXPECT_GT(v, 0);
    }
  }
}

TEST(GreedyPoint, QuadraticsStrictlyPositive) {
  std::vector<SdpSystem> all = {gen_khachiyan(4), gen_mild(4), gen_perturbed_khachiyan(),
                                gen_polyopt({1, 0, 0, 0, 0, 0, 1}).system};
  for (const auto& s : all) {
    BlockPartition p = validate_regular(s);
    auto q = derive_quadratics(s, p, tail_indices(s, p));
    for (int e : {1, 8, 30}) {
      auto x = greedy_strict_point(s, p, ldexp(Real(1), e));
      std::vector<Real> full = x;
      if (s.fixed_tail)
        for (const auto& v : *s.fixed_tail) full.push_back(to_real(v));
      for (const auto& d : q) EXPECT_GT(d.evaluate(full), 0) << s.label << " j=" << d.j;
    }
  }
}

TEST(Sweep, MonotoneInScale) {
  for (const auto& s : {gen_khachiyan(3), gen_mild(4), gen_perturbed_khachiyan()}) {
    BlockPartition p = validate_regular(s);
    ScaleSweep sw = empirical_exponents(s, p, default_scales());
    for (std::size_t i = 1; i < sw.points.size(); ++i)
      for (int j = 0; j < p.k; ++j) EXPECT_GE(sw.points[i][j], sw.points[i - 1][j]) << s.label;
    for (const auto& f : sw.fits) {
      EXPECT_GT(f.slope, 1.0);
      EXPECT_LE(f.slope, 2.05);
    }
  }
}

TEST(Sweep, PolyoptMomentInequality) {
  // x_i = y_{2(n-i+1)}, so y_{2(n-j+1)} >= y_{2(n-j)}^{1+1/(n-j)} reads x_j >= x_{j+1}^{1+1/(n-j)}
  for (int n = 2; n <= 4; ++n) {
    std::vector<Rational> coeffs(2 * n + 1, Rational(0));
    coeffs.back() = 1;
    SdpSystem s = gen_polyopt(coeffs).system;
    BlockPartition p = validate_regular(s);
    ScaleSweep sw = empirical_exponents(s, p, default_scales());
    for (const auto& x : sw.points)
      for (int j = 1; j <= n - 1; ++j)
        EXPECT_GE(log(x[j - 1]), log(x[j]) * (1 + Real(1) / (n - j))) << "n=" << n << " j=" << j;
  }
}

TEST(GreedyPoint, ScaleTooSmall) {
  SdpSystem s = gen_khachiyan(3);
  try {
    greedy_strict_point(s, validate_regular(s), Real(-1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScaleTooSmall);
  }
}

TEST(Sweep, KhachiyanSlopes) {
  SdpSystem s = gen_khachiyan(3);
  BlockPartition p = validate_regular(s);
  ScaleSweep sw = empirical_exponents(s, p, default_scales());
  ASSERT_EQ(sw.points.size(), 7u);
  ASSERT_EQ(sw.fits.size(), 2u);
  for (const auto& f : sw.fits) EXPECT_NEAR(f.slope, 2.0, 1e-3);
  for (const auto& x : sw.points) EXPECT_TRUE(exact_pd(s, x));
  auto alpha = exponents_recursion(tail_indices(s, p).t, 3);
  EXPECT_TRUE(check_hierarchy(sw, alpha).pass);
  EXPECT_FALSE(check_hierarchy(sw, minimal_exponents(3)).pass);
  attach_fits(alpha, sw);
  ASSERT_TRUE(alpha.d.has_value());
  EXPECT_EQ(alpha.d->size(), 2u);
}

TEST(Sweep, ParallelMatchesSequential) {
  SdpSystem s = gen_mild(4);
  BlockPartition p = validate_regular(s);
  ScaleSweep a = empirical_exponents(s, p, default_scales(), false);
  ScaleSweep b = empirical_exponents(s, p, default_scales(), true);
  EXPECT_EQ(a.points, b.points);
}

TEST(Sweep, ScaleValidation) {
  SdpSystem s = gen_khachiyan(3);
  BlockPartition p = validate_regular(s);
  EXPECT_THROW(empirical_exponents(s, p, {Real(10), Real(100), Real(1000)}), Error);
  EXPECT_THROW(empirical_exponents(s, p, {Real(10), Real(100), Real(50), Real(1e5)}), Error);
  EXPECT_THROW(empirical_exponents(s, p, {Real(10), Real(20), Real(30), Real(40)}), Error);
}

TEST(Sweep, ODonnellIsNotPartiallyStrict) {
  SdpSystem s = gen_odonnell(3);
  try {
    empirical_exponents(s, validate_regular(s), default_scales());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotPartiallyStrict);
  }
}

TEST(Sweep, CsvLayout) {
  SdpSystem s = gen_khachiyan(2);
  BlockPartition p = validate_regular(s);
  ScaleSweep sw = empirical_exponents(s, p, default_scales());
  std::string pts = points_csv(sw);
  EXPECT_EQ(pts.substr(0, pts.find('\n')), "scale,x_1,x_2");
  auto check = check_hierarchy(sw, exponents_recursion({3}, 2));
  std::string sum = summary_csv(check);
  EXPECT_EQ(sum.substr(0, sum.find('\n')), "j,predicted_alpha,fitted_slope,residual,verdict");
  EXPECT_NE(sum.find(",PASS"), std::string::npos);
}

}  // namespace
}  // namespace khier
