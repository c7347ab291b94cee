#include "khier/symmat.hpp"

#include <algorithm>

namespace khier {

IndexSet::IndexSet(std::vector<int> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
    throw Error(ErrorCode::InvalidStructure, "IndexSet: duplicate index");
  if (!members_.empty() && members_.front() < 1) throw Error(ErrorCode::InvalidStructure, "IndexSet: index < 1");
}

IndexSet IndexSet::range(int first, int last) {
  std::vector<int> v;
  for (int i = first; i <= last; ++i) v.push_back(i);
  return IndexSet(std::move(v));
}

SymMatrix<Real> to_real(const SymMatrix<Rational>& M) {
  SymMatrix<Real> R(M.n());
  for (int i = 0; i < M.n(); ++i)
    for (int j = i; j < M.n(); ++j)
      if (M(i, j) != 0) R.set(i, j, to_real(M(i, j)));
  return R;
}

Matrix<Real> to_real(const Matrix<Rational>& M) {
  Matrix<Real> R(M.rows(), M.cols());
  for (int i = 0; i < M.rows(); ++i)
    for (int j = 0; j < M.cols(); ++j) R(i, j) = to_real(M(i, j));
  return R;
}

Matrix<Rational> inverse(const Matrix<Rational>& M) {
  const int n = M.rows();
  if (M.cols() != n) throw Error(ErrorCode::InvalidStructure, "inverse: matrix not square");
  Matrix<Rational> a = M;
  Matrix<Rational> inv = Matrix<Rational>::identity(n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error(ErrorCode::InvalidStructure, "inverse: singular matrix");
    if (piv != c)
      for (int j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    Rational d = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) /= d;
      inv(c, j) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c) == 0) continue;
      Rational f = a(r, c);
      for (int j = 0; j < n; ++j) {
        a(r, j) -= f * a(c, j);
        inv(r, j) -= f * inv(c, j);
      }
    }
  }
  return inv;
}

Rational determinant(Matrix<Rational> a) {
  const int n = a.rows();
  if (a.cols() != n) throw Error(ErrorCode::InvalidStructure, "determinant: matrix not square");
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (a(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (a(r, c) == 0) continue;
      Rational f = a(r, c) / a(c, c);
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

const char* to_string(Definiteness d) {
  switch (d) {
    case Definiteness::PD: return "PD";
    case Definiteness::PSD: return "PSD";
    case Definiteness::INDEFINITE: return "INDEFINITE";
  }
  return "?";
}

Real default_tolerance() { return ldexp(Real(1), -64); }

Pivots ldlt_pivots(const SymMatrix<Real>& M, const Real& threshold) {
  const int n = M.n();
  std::vector<std::vector<Real>> a(n, std::vector<Real>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = M(i, j);
  std::vector<int> active(n);
  for (int i = 0; i < n; ++i) active[i] = i;
  const Real alpha = (1 + sqrt(Real(17))) / 8;
  Pivots out;

  auto remove = [&](int idx) { active.erase(std::find(active.begin(), active.end(), idx)); };
  auto one_by_one = [&](int p) {
    Real d = a[p][p];
    out.values.push_back(d);
    remove(p);
    if (d == 0) return;  // only reached when column p is zero
    for (int u : active) {
      if (a[u][p] == 0) continue;
      Real f = a[u][p] / d;
      for (int v : active) a[u][v] -= f * a[p][v];
    }
  };
  auto two_by_two = [&](int p, int r) {
    Real app = a[p][p], apr = a[p][r], arr = a[r][r];
    Real det = app * arr - apr * apr;
    Real mean = (app + arr) / 2, half = (app - arr) / 2;
    Real rad = sqrt(half * half + apr * apr);
    out.values.push_back(mean + rad);
    out.values.push_back(mean - rad);
    remove(p);
    remove(r);
    // E^-1 = [[arr, -apr], [-apr, app]] / det
    for (int u : active) {
      Real cu = (arr * a[u][p] - apr * a[u][r]) / det;
      Real du = (app * a[u][r] - apr * a[u][p]) / det;
      for (int v : active) a[u][v] -= cu * a[p][v] + du * a[r][v];
    }
  };

  while (!active.empty()) {
    Real maxabs = 0;
    for (int u : active)
      for (int v : active) maxabs = std::max(maxabs, Real(abs(a[u][v])));
    if (maxabs <= threshold) {
      out.zero_tail = int(active.size());
      break;
    }
    int p = active.front();
    for (int u : active)
      if (abs(a[u][u]) > abs(a[p][p])) p = u;
    Real omega = 0;
    int r = -1;
    for (int u : active)
      if (u != p && abs(a[u][p]) > omega) {
        omega = abs(a[u][p]);
        r = u;
      }
    if (r < 0 || abs(a[p][p]) >= alpha * omega) {
      one_by_one(p);
      continue;
    }
    Real sigma = 0;
    for (int u : active)
      if (u != r) sigma = std::max(sigma, Real(abs(a[u][r])));
    if (abs(a[p][p]) * sigma >= alpha * omega * omega)
      one_by_one(p);
    else if (abs(a[r][r]) >= alpha * sigma)
      one_by_one(r);
    else
      two_by_two(p, r);
  }
  return out;
}

Definiteness definiteness(const SymMatrix<Real>& M, const Real& tol) {
  Real trace_abs = 0;
  for (int i = 0; i < M.n(); ++i) trace_abs += abs(M(i, i));
  const Real thr = tol * (1 + trace_abs);
  Pivots piv = ldlt_pivots(M, thr);
  bool pd = piv.zero_tail == 0, psd = true;
  for (const Real& v : piv.values) {
    if (!(v > thr)) pd = false;
    if (v < -thr) psd = false;
  }
  if (pd) return Definiteness::PD;
  return psd ? Definiteness::PSD : Definiteness::INDEFINITE;
}

Definiteness definiteness(const SymMatrix<Rational>& M, const Real& tol) { return definiteness(to_real(M), tol); }

Definiteness definiteness_equilibrated(const SymMatrix<Real>& M, const Real& tol) {
  const int n = M.n();
  std::vector<Real> s(n);
  for (int i = 0; i < n; ++i) {
    if (!(M(i, i) > 0)) return definiteness(M, tol);
    s[i] = 1 / sqrt(M(i, i));
  }
  SymMatrix<Real> D(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) D.set(i, j, M(i, j) * s[i] * s[j]);
  return definiteness(D, tol);
}

}  // namespace khier
