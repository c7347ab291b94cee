#pragma once

#include <optional>
#include <string>
#include <vector>

#include "khier/symmat.hpp"

namespace khier {

// x_1 A_1 + ... + x_m A_m + B >= 0.
struct SdpSystem {
  int n = 0;
  int m = 0;
  std::vector<SymMatrix<Rational>> A;
  SymMatrix<Rational> B;
  std::optional<std::vector<Rational>> fixed_tail;  // values of x_{k+1}..x_m
  std::string label;
};

// Throws InvalidStructure if sizes disagree.
void check_dimensions(const SdpSystem& sys);

struct BlockPartition {
  int n = 0;
  int k = 0;
  std::vector<int> r;  // r_1..r_k

  // First row of I_j (0-based), j = 1..k+1.
  int offset(int j) const;
  int size(int j) const;
  // I_j as 1-based indices.
  IndexSet block(int j) const;
  // I_j ∪ ... ∪ I_{k+1}.
  IndexSet trailing(int j) const;
  bool degenerate() const { return k > 0 && offset(k + 1) == n; }
};

// Greedy longest prefix A_1..A_k matching the staircase template exactly.
BlockPartition validate_regular(const SdpSystem& sys);

struct TailPivot {
  int l1 = 0;  // 1-based row in I_j
  int l2 = 0;  // 1-based column in I_{t_{j+1}}
  Rational beta;
};

struct TailIndexVector {
  int k = 0;
  std::vector<int> t;  // t[j-1] = t_{j+1}, j = 1..k-1
  std::vector<TailPivot> pivots;

  int tail(int j1) const { return t.at(j1 - 2); }  // t_{j1}
};

// Throws InvalidStructure when some A_{j+1}(I_j, I_t) is zero for every t >= j.
TailIndexVector tail_indices(const SdpSystem& sys, const BlockPartition& part);

// t_{j+1} in {j+2, ..., k+1} for j = 1..k-1.
bool tails_valid(const std::vector<int>& t, int k);

// Z = sum_{i>k} xbar_i A_i + B. Missing fixed_tail with m > k throws NotPartiallyStrict.
SymMatrix<Rational> fixed_part(const SdpSystem& sys, int k);

// S(x) for x = (x_1..x_k); the fixed tail supplies the rest.
SymMatrix<Real> evaluate_real(const SdpSystem& sys, int k, const std::vector<Real>& x);
// S(x) for a full exact x of length m.
SymMatrix<Rational> evaluate(const SdpSystem& sys, const std::vector<Rational>& x);

// JSON instance format: {"A":[[[i,j,"p/q"],...],...],"B":[...],"fixed_tail":[...],"label":"","m":m,"n":n}
// with 1-based upper-triangle triplets. Output is canonical (sorted keys, compact).
std::string to_json(const SdpSystem& sys);
SdpSystem parse_instance(const std::string& text);
SdpSystem read_instance(const std::string& path);
void write_instance(const SdpSystem& sys, const std::string& path);

}  // namespace khier
