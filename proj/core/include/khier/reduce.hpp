#pragma once

#include <optional>
#include <string>
#include <vector>

#include "khier/instance.hpp"

namespace khier {

struct ConeOptions {
  Real rank_tol{"1e-8"};       // rank cut: lambda_{i+1}/lambda_i < rank_tol
  int max_iterations = 300;
  Real target_mu{"1e-66"};     // interior-point stopping complementarity
  Real positive_level{"1e-12"};  // optimal value at or above: PD matrix in the orthogonal complement
};

struct ConeAlternative {
  enum class Kind { NONZERO_PSD_IN_SPAN, PD_IN_PERP };
  Kind kind = Kind::PD_IN_PERP;

  // NONZERO_PSD_IN_SPAN: Y = sum lambda_i span_i is PSD of numerical rank `rank`.
  std::vector<Real> lambda;
  std::vector<Rational> lambda_exact;  // same coefficients as exact rationals
  bool lambda_snapped = false;         // lambda_exact came from a small-denominator reconstruction
  SymMatrix<Real> Y;
  int rank = 0;

  // PD_IN_PERP: W > 0 with span_i . W = 0, scaled to trace n.
  SymMatrix<Real> W;

  bool heuristic = true;
  int iterations = 0;
  Real optimal_value;  // estimate of min{t : tI + V >= 0, V in span, tr = 1}
};

// Throws NumericallyAmbiguous when neither certificate is reached.
ConeAlternative cone_alternative(const std::vector<SymMatrix<Real>>& span, const ConeOptions& opt = {});
ConeAlternative cone_alternative(const std::vector<SymMatrix<Rational>>& span, const ConeOptions& opt = {});

struct FrCertificate {
  int k = 0;
  std::vector<int> ranks;  // r_1..r_k
  // A'_i = T^T (sum_j row_ops(i,j) A_j) T and B' = T^T B T with T = T_1 T_2 ... T_k.
  // In terms of variables: x = row_ops^T x'.
  Matrix<Rational> row_ops;
  std::vector<Matrix<Real>> congruences;
  Matrix<Real> T;
  std::optional<SymMatrix<Real>> residual_pd_witness;  // W > 0 on I_{k+1}
  Real witness_residual{0};  // max |A_i . Y| / (|A_i| |Y|) for Y = T diag(0, W) T^T
  bool heuristic = false;
  bool ambiguous = false;
  bool minimality_claimed = false;
  bool degenerate = false;  // r_1 + ... + r_k = n
  int exact_steps = 0;      // leading steps whose congruence is an exact rational matrix
};

struct ReductionResult {
  SdpSystem system;
  FrCertificate certificate;
};

ReductionResult facial_reduction(const SdpSystem& sys, const ConeOptions& opt = {});
int singularity_degree(const SdpSystem& sys, const ConeOptions& opt = {});

// Max entrywise |T^T(sum_j M_ij A_j)T - A'_i| / max(1, max|A'_i|), same for B.
Real round_trip_error(const SdpSystem& input, const SdpSystem& output, const FrCertificate& cert);

std::string certificate_to_json(const FrCertificate& cert);
FrCertificate parse_certificate(const std::string& text);

}  // namespace khier
