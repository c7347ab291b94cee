#pragma once

#include <string>
#include <vector>

#include "khier/hierarchy.hpp"
#include "khier/instance.hpp"

namespace khier {

// PD test of the diagonal block I_j ∪ ... ∪ I_{k+1} of S(x) for x = (x_1..x_k);
// only x_j..x_k enter that block.
bool trailing_block_pd(const SdpSystem& sys, const BlockPartition& part, int j, const std::vector<Real>& x);

// x_k = M, then for j = k-1..1 the smallest power of two making the
// I_j..I_{k+1} block PD, times 2. Returns x_1..x_k; the full matrix is PD.
std::vector<Real> greedy_strict_point(const SdpSystem& sys, const BlockPartition& part, const Real& M);

// Infimum of x_j keeping the I_j..I_{k+1} block PD, given x_{j+1}..x_k in x
// (x has length k; entries 1..j are ignored). Bisection to relative gap 2^-20;
// returns the upper endpoint, which may be negative (-inf when unbounded).
Real minimal_completion(const SdpSystem& sys, const BlockPartition& part, int j, const std::vector<Real>& x);

struct PairFit {
  int j = 0;             // fit of log x_j against log x_{j+1}
  double slope = 0;      // estimates alpha_{j+1}
  double intercept = 0;  // estimates log d_{j+1}
  double residual = 0;   // rms
};

struct ScaleSweep {
  std::vector<Real> scales;
  std::vector<std::vector<Real>> points;  // x_1..x_k per scale
  std::vector<PairFit> fits;
};

// Needs >= 4 strictly increasing scales spanning >= 3 decades. Chains of
// minimal completions from x_k = scale, each multiplied by the safety factor 2
// before the next link; the fit uses the top half of the scales.
ScaleSweep empirical_exponents(const SdpSystem& sys, const BlockPartition& part, const std::vector<Real>& scales,
                               bool parallel = false);

// 10^2, 10^2.5, ..., 10^5.
std::vector<Real> default_scales();

struct PairVerdict {
  int j = 0;
  Rational predicted;  // alpha_{j+1}
  double slope = 0;
  double residual = 0;
  double lower_bound = 0;  // 1 + 1/(k-j)
  bool pass = false;
};

struct HierarchyCheck {
  std::vector<PairVerdict> pairs;
  bool pass = true;
};

HierarchyCheck check_hierarchy(const ScaleSweep& sweep, const ExponentHierarchy& alpha, double tol = 0.05);

// Attaches d_{j+1} = exp(intercept) and the fit residuals.
void attach_fits(ExponentHierarchy& h, const ScaleSweep& sweep);

std::string points_csv(const ScaleSweep& sweep);
std::string summary_csv(const HierarchyCheck& check);

}  // namespace khier
