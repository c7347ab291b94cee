#include "khier/instance.hpp"

#include <numeric>
#include <string>

namespace khier {

void check_dimensions(const SdpSystem& sys) {
  if (sys.n < 1) throw Error(ErrorCode::InvalidStructure, "n must be positive");
  if (sys.m < 1) throw Error(ErrorCode::InvalidStructure, "m must be positive");
  if (int(sys.A.size()) != sys.m)
    throw Error(ErrorCode::InvalidStructure,
                "expected " + std::to_string(sys.m) + " matrices A, got " + std::to_string(sys.A.size()));
  for (std::size_t i = 0; i < sys.A.size(); ++i)
    if (sys.A[i].n() != sys.n)
      throw Error(ErrorCode::InvalidStructure, "A[" + std::to_string(i + 1) + "] has wrong dimension");
  if (sys.B.n() != sys.n) throw Error(ErrorCode::InvalidStructure, "B has wrong dimension");
  if (sys.fixed_tail && int(sys.fixed_tail->size()) > sys.m)
    throw Error(ErrorCode::InvalidStructure, "fixed_tail longer than m");
}

int BlockPartition::offset(int j) const {
  if (j < 1 || j > k + 1) throw Error(ErrorCode::InvalidStructure, "block index out of range");
  return std::accumulate(r.begin(), r.begin() + (j - 1), 0);
}

int BlockPartition::size(int j) const { return j <= k ? r.at(j - 1) : n - offset(k + 1); }

IndexSet BlockPartition::block(int j) const {
  int first = offset(j) + 1;
  return IndexSet::range(first, first + size(j) - 1);
}

IndexSet BlockPartition::trailing(int j) const { return IndexSet::range(offset(j) + 1, n); }

BlockPartition validate_regular(const SdpSystem& sys) {
  check_dimensions(sys);
  BlockPartition part;
  part.n = sys.n;
  int s = 0;
  for (const auto& A : sys.A) {
    if (s == sys.n) break;
    int r = 0;
    while (s + r < sys.n && A(s + r, s + r) == 1) ++r;
    if (r == 0) break;
    bool ok = true;
    for (int i = s; i < sys.n && ok; ++i)
      for (int j = i; j < sys.n && ok; ++j) {
        Rational want = (i == j && i < s + r) ? 1 : 0;
        if (A(i, j) != want) ok = false;
      }
    if (!ok) break;
    part.r.push_back(r);
    s += r;
  }
  part.k = int(part.r.size());
  return part;
}

TailIndexVector tail_indices(const SdpSystem& sys, const BlockPartition& part) {
  if (part.k < 2) throw Error(ErrorCode::InvalidStructure, "tail indices need k >= 2");
  TailIndexVector out;
  out.k = part.k;
  for (int j = 1; j <= part.k - 1; ++j) {
    const auto& A = sys.A[j];  // A_{j+1}
    bool found = false;
    for (int t = part.k + 1; t >= j && !found; --t) {
      if (part.size(t) == 0) continue;
      int r0 = part.offset(j), c0 = part.offset(t);
      for (int a = r0; a < r0 + part.size(j) && !found; ++a)
        for (int b = c0; b < c0 + part.size(t) && !found; ++b)
          if (A(a, b) != 0) {
            out.t.push_back(t);
            out.pivots.push_back({a + 1, b + 1, A(a, b)});
            found = true;
          }
    }
    if (!found)
      throw Error(ErrorCode::InvalidStructure,
                  "malformed system: A_" + std::to_string(j + 1) + "(I_" + std::to_string(j) +
                      ", I_t) is zero for every t >= " + std::to_string(j));
  }
  return out;
}

bool tails_valid(const std::vector<int>& t, int k) {
  if (k < 2 || int(t.size()) != k - 1) return false;
  for (int j = 1; j <= k - 1; ++j)
    if (t[j - 1] < j + 2 || t[j - 1] > k + 1) return false;
  return true;
}

SymMatrix<Rational> fixed_part(const SdpSystem& sys, int k) {
  SymMatrix<Rational> Z = sys.B;
  if (sys.m == k) return Z;
  if (!sys.fixed_tail)
    throw Error(ErrorCode::NotPartiallyStrict, "fixed_tail missing for variables x_" + std::to_string(k + 1) + "..x_" +
                                                   std::to_string(sys.m));
  if (int(sys.fixed_tail->size()) != sys.m - k)
    throw Error(ErrorCode::InvalidStructure, "fixed_tail length " + std::to_string(sys.fixed_tail->size()) +
                                                 " does not equal m - k = " + std::to_string(sys.m - k));
  std::vector<Rational> c(sys.m, Rational(0));
  for (int i = k; i < sys.m; ++i) c[i] = (*sys.fixed_tail)[i - k];
  return combine(c, sys.A, Z);
}

SymMatrix<Real> evaluate_real(const SdpSystem& sys, int k, const std::vector<Real>& x) {
  SymMatrix<Real> S = to_real(fixed_part(sys, k));
  for (int i = 0; i < k && i < int(x.size()); ++i) {
    const auto& A = sys.A[i];
    for (int a = 0; a < sys.n; ++a)
      for (int b = a; b < sys.n; ++b)
        if (A(a, b) != 0) S.add(a, b, x[i] * to_real(A(a, b)));
  }
  return S;
}

SymMatrix<Rational> evaluate(const SdpSystem& sys, const std::vector<Rational>& x) {
  if (int(x.size()) != sys.m) throw Error(ErrorCode::InvalidStructure, "evaluate: x must have length m");
  return combine(x, sys.A, sys.B);
}

}  // namespace khier
