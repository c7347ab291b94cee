#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "khier/instance.hpp"

namespace khier {

// constant + sum_i coeffs[i] * x_i over variables i > start (1-based).
struct LinearForm {
  int start = 0;
  std::map<int, Rational> coeffs;
  Rational constant;

  bool is_zero() const { return coeffs.empty() && constant == 0; }
  // x holds x_1..x_m.
  Real value(const std::vector<Real>& x) const;
  std::string to_string() const;
};

enum class QuadraticKind { TYPE1, TYPE2 };
const char* to_string(QuadraticKind kind);

// p_j = (x_j + delta_j)(x_t + delta_t) - (beta x_{j+1} + delta_{j+1})^2 for TYPE1;
// for TYPE2 the factor (x_t + delta_t) is delta_t alone (t = k+1, no x_t).
// p_j is the 2x2 principal minor of S at rows (pivot.l1, pivot.l2).
struct DerivedQuadratic {
  QuadraticKind kind = QuadraticKind::TYPE2;
  int j = 0;
  int t = 0;
  Rational beta;
  LinearForm delta_j;
  LinearForm delta_j1;
  LinearForm delta_t;
  TailPivot pivot;

  Real evaluate(const std::vector<Real>& x) const;
  std::string to_string() const;
};

std::vector<DerivedQuadratic> derive_quadratics(const SdpSystem& sys, const BlockPartition& part,
                                                const TailIndexVector& tails);

enum class ExponentMethod { RECURSION, FOURIER_MOTZKIN, MINIMAL_CLOSED_FORM };
const char* to_string(ExponentMethod method);

struct FittedConstant {
  double d = 0;         // exp(intercept)
  double residual = 0;  // rms of the log-log fit
};

struct ExponentHierarchy {
  int k = 0;
  std::vector<Rational> alpha;  // alpha[j-2] = alpha_j, j = 2..k
  ExponentMethod method = ExponentMethod::RECURSION;
  std::optional<std::vector<FittedConstant>> d;

  const Rational& at(int j) const { return alpha.at(j - 2); }
};

// Throws InvalidStructure ("INVALID_TAILS") unless t_{j+1} in {j+2..k+1}.
void require_valid_tails(const std::vector<int>& tails, int k);

// alpha_{j+1} = 2 - 1/(alpha_{j+2} ... alpha_{t_{j+1}}) if t_{j+1} <= k, else 2.
ExponentHierarchy exponents_recursion(const std::vector<int>& tails, int k);
// Eliminates y_k, y_{k-1}, ... from the log system and reads off y_j >= alpha_{j+1} y_{j+1}.
ExponentHierarchy exponents_fourier_motzkin(const std::vector<int>& tails, int k);
// alpha_{j+1} = 1 + 1/(k-j).
ExponentHierarchy minimal_exponents(int k);
// prod_{j=2..k} alpha_j; 1 for an empty hierarchy.
Rational magnitude_gap(const ExponentHierarchy& h);

// alpha_k = 2 and 1 + 1/(k-j) <= alpha_{j+1} <= 2; returns the violated conditions.
std::vector<std::string> bound_violations(const ExponentHierarchy& h);

}  // namespace khier
