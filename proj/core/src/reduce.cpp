#include <algorithm>
#include <numeric>

#include "eigen_util.hpp"
#include "json.hpp"
#include "khier/reduce.hpp"

namespace khier {

using namespace detail;
using nlohmann::json;

namespace {

// Orthonormal basis of range(P) for a projector P: repeatedly take the column of
// largest residual norm (lowest index on near-ties).
RealMat projector_basis(const RealMat& P, int count) {
  const Eigen::Index n = P.rows();
  RealMat cols = P;
  RealMat out(n, count);
  for (int c = 0; c < count; ++c) {
    Real best = -1;
    Eigen::Index arg = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      Real nrm = cols.col(j).norm();
      if (nrm > best * (1 + Real("1e-20"))) {
        best = nrm;
        arg = j;
      }
    }
    RealVec v = cols.col(arg) / best;
    out.col(c) = v;
    for (Eigen::Index j = 0; j < n; ++j) cols.col(j) -= v.dot(cols.col(j)) * v;
  }
  return out;
}

// T with T^T V T = diag(I_r, 0).
RealMat staircase_transform(const RealMat& V, int r) {
  const Eigen::Index n = V.rows();
  EigenDesc e = eigen_desc(V);
  RealMat Ur = e.vectors.leftCols(r), U0 = e.vectors.rightCols(n - r);
  RealMat Br = projector_basis(Ur * Ur.transpose(), r);
  RealMat B0 = projector_basis(U0 * U0.transpose(), int(n - r));
  RealMat C = Br.transpose() * V * Br;
  C = (C + C.transpose()) / 2;
  Eigen::LLT<RealMat> llt(C);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::NumericallyAmbiguous, "facial_reduction: range block not PD");
  RealMat L = llt.matrixL();
  // Br L^{-T}
  RealMat left = L.triangularView<Eigen::Lower>().solve(Br.transpose()).transpose();
  RealMat T(n, n);
  T.leftCols(r) = left;
  T.rightCols(n - r) = B0;
  return T;
}

Rational snap(const Real& v, const Real& scale) {
  if (abs(v) <= Real("1e-20") * scale) return 0;
  if (auto q = rationalize(v, Real("1e-20"), Integer(1000000))) return *q;
  return decimal_rational(v, 40);
}

SymMatrix<Rational> snap_matrix(const RealMat& M) {
  Real scale = 1;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) scale = std::max(scale, Real(abs(M(i, j))));
  SymMatrix<Rational> out(int(M.rows()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = i; j < M.cols(); ++j) out.set(int(i), int(j), snap((M(i, j) + M(j, i)) / 2, scale));
  return out;
}

RealMat real_eigen(const SymMatrix<Rational>& M) { return to_eigen(to_real(M)); }

// When the trailing w x w block of V is exactly d u u^T with d > 0 and u_p = 1,
// returns a rational T = diag(I_s, T~) with T^T V T = diag(., 1, 0) on that
// block (T~^T u = e_1); d is returned through `d`.
std::optional<Matrix<Rational>> exact_rank_one(const SymMatrix<Rational>& V, int s, Rational& d) {
  const int n = V.n();
  int p = -1;
  for (int i = s; i < n; ++i)
    if (V(i, i) > 0 && (p < 0 || V(i, i) > V(p, p))) p = i;
  if (p < 0) return std::nullopt;
  d = V(p, p);
  std::vector<Rational> u(n, Rational(0));
  for (int i = s; i < n; ++i) u[i] = V(i, p) / d;
  for (int a = s; a < n; ++a)
    for (int b = a; b < n; ++b)
      if (V(a, b) != d * u[a] * u[b]) return std::nullopt;
  // columns of T^{-T}: u first, then the unit vectors e_i, i != p
  Matrix<Rational> Tit = Matrix<Rational>::identity(n);
  for (int i = s; i < n; ++i) Tit(i, s) = u[i];
  int col = s + 1;
  for (int i = s; i < n; ++i) {
    if (i == p) continue;
    for (int r = s; r < n; ++r) Tit(r, col) = r == i ? Rational(1) : Rational(0);
    ++col;
  }
  return inverse(Tit).transpose();
}

// One solution of M x = b in exact arithmetic (free variables set to zero).
std::optional<std::vector<Rational>> solve_exact(std::vector<std::vector<Rational>> M, std::vector<Rational> b) {
  const int rows = int(M.size()), cols = rows ? int(M[0].size()) : 0;
  std::vector<int> pivot_col;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (M[i][c] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[r], M[piv]);
    std::swap(b[r], b[piv]);
    for (int i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      Rational f = M[i][c] / M[r][c];
      for (int k = c; k < cols; ++k) M[i][k] -= f * M[r][k];
      b[i] -= f * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (int i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  std::vector<Rational> x(cols, Rational(0));
  for (int i = 0; i < r; ++i) x[pivot_col[i]] = b[i] / M[i][pivot_col[i]];
  return x;
}

// Coefficients l with sum l_i A_i = u u^T on the trailing block, where u is the
// rationalized dominant eigenvector of the numerical rank-one combination.
std::optional<std::vector<Rational>> rank_one_from_kernel(const std::vector<SymMatrix<Rational>>& A, int j, int s,
                                                          const RealMat& V, const Real& tol, const Integer& max_den) {
  const int n = int(V.rows()), w = n - s, q = int(A.size()) - j;
  EigenDesc e = eigen_desc(V.bottomRightCorner(w, w));
  RealVec x = e.vectors.col(0);
  Eigen::Index p = 0;
  for (Eigen::Index i = 1; i < w; ++i)
    if (abs(x(i)) > abs(x(p)) * (1 + Real("1e-20"))) p = i;
  x /= x(p);
  std::vector<Rational> u;
  for (Eigen::Index i = 0; i < w; ++i) {
    auto r = rationalize(x(i), tol, max_den);
    if (!r) return std::nullopt;
    u.push_back(*r);
  }
  std::vector<std::vector<Rational>> M;
  std::vector<Rational> b;
  for (int a = 0; a < w; ++a)
    for (int c = a; c < w; ++c) {
      std::vector<Rational> row(q);
      for (int i = 0; i < q; ++i) row[i] = A[j + i](s + a, s + c);
      M.push_back(std::move(row));
      b.push_back(u[a] * u[c]);
    }
  return solve_exact(std::move(M), std::move(b));
}

json real_matrix_json(const Matrix<Real>& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < M.cols(); ++j) row.push_back(to_string(M(i, j), 40));
    rows.push_back(row);
  }
  return rows;
}

Matrix<Real> real_matrix_from_json(const json& v, const std::string& field) {
  if (!v.is_array()) throw Error(ErrorCode::ParseError, field + ": expected a matrix");
  int rows = int(v.size()), cols = rows ? int(v[0].size()) : 0;
  Matrix<Real> M(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (!v[i].is_array() || int(v[i].size()) != cols) throw Error(ErrorCode::ParseError, field + ": ragged matrix");
    for (int j = 0; j < cols; ++j) {
      if (!v[i][j].is_string()) throw Error(ErrorCode::ParseError, field + ": entries must be decimal strings");
      try {
        M(i, j) = Real(v[i][j].get<std::string>());
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, field + ": malformed number");
      }
    }
  }
  return M;
}

}  // namespace

ReductionResult facial_reduction(const SdpSystem& sys, const ConeOptions& opt) {
  check_dimensions(sys);
  const int n = sys.n, m = sys.m;
  // exact copies are kept while every step so far had a rational rank-one V
  std::vector<SymMatrix<Rational>> curq = sys.A;
  SymMatrix<Rational> Bq = sys.B;
  bool exact = true;
  std::vector<RealMat> cur;
  for (const auto& A : sys.A) cur.push_back(real_eigen(A));
  RealMat Bc = real_eigen(sys.B);
  RealMat Tacc = RealMat::Identity(n, n);

  FrCertificate cert;
  cert.row_ops = Matrix<Rational>::identity(m);
  int s = 0, j = 0;
  while (true) {
    if (s == n) {
      cert.degenerate = j > 0;
      break;
    }
    const int w = n - s;
    if (j == m) {
      cert.residual_pd_witness = SymMatrix<Real>::identity(w);
      break;
    }
    std::vector<SymMatrix<Real>> span;
    for (int i = j; i < m; ++i) span.push_back(sym_from_eigen(cur[i].bottomRightCorner(w, w)));
    ConeAlternative alt = cone_alternative(span, opt);
    cert.heuristic = cert.heuristic || alt.heuristic;
    if (alt.kind == ConeAlternative::Kind::PD_IN_PERP) {
      cert.residual_pd_witness = alt.W;
      break;
    }

    std::vector<Rational> lam = alt.lambda_exact;

    // the exact check makes loose rationalization safe; on deep faces the
    // numerical coefficients are only accurate to a root of the residual
    std::optional<Matrix<Rational>> Tq;
    if (exact && alt.rank == 1) {
      auto try_exact = [&](const std::vector<Rational>& cand) {
        if (cand.size() != alt.lambda.size()) return;
        SymMatrix<Rational> Vq(n);
        for (int i = 0; i < int(cand.size()); ++i)
          if (cand[i] != 0) Vq += cand[i] * curq[j + i];
        Rational d;
        Tq = exact_rank_one(Vq, s, d);
        if (!Tq) return;
        lam = cand;
        for (auto& l : lam) l /= d;
      };
      RealMat Vf = RealMat::Zero(n, n);
      for (int i = 0; i < int(alt.lambda.size()); ++i) Vf += alt.lambda[i] * cur[j + i];
      const std::pair<const char*, long> cascade[] = {
          {"1e-30", 1000000}, {"1e-20", 1000000}, {"1e-12", 1000000}, {"1e-7", 1000000}, {"1e-4", 10000}, {"1e-3", 1000}};
      for (const auto& [tol_text, den] : cascade) {
        const Real tol(tol_text);
        const Integer max_den(den);
        std::vector<Rational> cand;
        for (const auto& l : alt.lambda) {
          auto q = rationalize(l, tol, max_den);
          if (!q) break;
          cand.push_back(*q);
        }
        try_exact(cand);
        if (Tq) break;
        // lambda may have large denominators while the kernel vector u of V = d u u^T does not
        if (auto sol = rank_one_from_kernel(curq, j, s, Vf, tol, max_den)) try_exact(*sol);
        if (Tq) break;
      }
    }
    if (!Tq) exact = false;
    int p = 0;
    for (int i = 1; i < int(lam.size()); ++i)
      if (abs(lam[i]) > abs(lam[p])) p = i;

    std::vector<Rational> row(m, Rational(0));
    RealMat V = RealMat::Zero(n, n);
    SymMatrix<Rational> Vq(n);
    for (int i = 0; i < int(lam.size()); ++i) {
      if (lam[i] == 0) continue;
      for (int c = 0; c < m; ++c) row[c] += lam[i] * cert.row_ops(j + i, c);
      if (exact)
        Vq += lam[i] * curq[j + i];
      else
        V += to_real(lam[i]) * cur[j + i];
    }
    for (int c = 0; c < m; ++c) cert.row_ops(j + p, c) = row[c];
    if (exact) {
      curq[j + p] = Vq;
      if (p != 0) std::swap(curq[j], curq[j + p]);
    } else {
      cur[j + p] = V;
    }
    if (p != 0) {
      for (int c = 0; c < m; ++c) std::swap(cert.row_ops(j, c), cert.row_ops(j + p, c));
      std::swap(cur[j], cur[j + p]);
    }

    RealMat Tstep;
    if (exact) {
      for (auto& A : curq) A = congruence(A, *Tq);
      Bq = congruence(Bq, *Tq);
      for (int i = 0; i < m; ++i) cur[i] = real_eigen(curq[i]);
      Bc = real_eigen(Bq);
      Tstep = to_eigen(to_real(*Tq));
      ++cert.exact_steps;
    } else {
      Tstep = RealMat::Identity(n, n);
      Tstep.bottomRightCorner(w, w) = staircase_transform(cur[j].bottomRightCorner(w, w), alt.rank);
      for (auto& A : cur) {
        RealMat t = Tstep.transpose() * A * Tstep;
        A = (t + t.transpose()) / 2;
      }
      RealMat tb = Tstep.transpose() * Bc * Tstep;
      Bc = (tb + tb.transpose()) / 2;
    }
    Tacc = Tacc * Tstep;
    cert.congruences.push_back(from_eigen(Tstep));
    cert.ranks.push_back(alt.rank);
    s += alt.rank;
    ++j;
  }
  cert.k = j;
  cert.T = from_eigen(Tacc);

  ReductionResult out;
  out.certificate = cert;
  SdpSystem& red = out.system;
  red.n = n;
  red.m = m;
  red.label = sys.label.empty() ? "reduced" : sys.label + ":reduced";
  if (exact) {
    red.A = curq;
    red.B = Bq;
  } else {
    for (const auto& A : cur) red.A.push_back(snap_matrix(A));
    red.B = snap_matrix(Bc);
  }

  if (cert.residual_pd_witness) {
    const int w = n - std::accumulate(cert.ranks.begin(), cert.ranks.end(), 0);
    RealMat D = RealMat::Zero(n, n);
    D.bottomRightCorner(w, w) = to_eigen(*cert.residual_pd_witness);
    RealMat Y = Tacc * D * Tacc.transpose();
    Real worst = 0, ny = frobenius(Y);
    for (const auto& A : sys.A) {
      RealMat Ae = real_eigen(A);
      Real na = frobenius(Ae);
      if (na == 0) continue;
      worst = std::max(worst, Real(abs(inner(Ae, Y)) / (na * ny)));
    }
    out.certificate.witness_residual = worst;
  }

  BlockPartition part = validate_regular(red);
  if (part.k != cert.k || part.r != cert.ranks) {
    out.certificate.ambiguous = true;
    throw Error(ErrorCode::NumericallyAmbiguous,
                "facial_reduction: reformulated system does not validate as regular with k = " + std::to_string(cert.k));
  }
  return out;
}

int singularity_degree(const SdpSystem& sys, const ConeOptions& opt) { return facial_reduction(sys, opt).certificate.k; }

Real round_trip_error(const SdpSystem& input, const SdpSystem& output, const FrCertificate& cert) {
  const int n = input.n, m = input.m;
  if (output.n != n || output.m != m || cert.row_ops.rows() != m || cert.T.rows() != n)
    throw Error(ErrorCode::InvalidStructure, "round_trip_error: certificate does not match the systems");
  RealMat T = to_eigen(cert.T);
  auto rel = [](const RealMat& got, const RealMat& want) {
    Real scale = std::max(Real(1), Real(want.cwiseAbs().maxCoeff()));
    return Real((got - want).cwiseAbs().maxCoeff() / scale);
  };
  std::vector<RealMat> A;
  for (const auto& a : input.A) A.push_back(real_eigen(a));
  Real worst = 0;
  for (int i = 0; i < m; ++i) {
    RealMat comb = RealMat::Zero(n, n);
    for (int jj = 0; jj < m; ++jj)
      if (cert.row_ops(i, jj) != 0) comb += to_real(cert.row_ops(i, jj)) * A[jj];
    worst = std::max(worst, rel(T.transpose() * comb * T, real_eigen(output.A[i])));
  }
  worst = std::max(worst, rel(T.transpose() * real_eigen(input.B) * T, real_eigen(output.B)));
  return worst;
}

std::string certificate_to_json(const FrCertificate& cert) {
  json doc;
  doc["k"] = cert.k;
  doc["r"] = cert.ranks;
  json rows = json::array();
  for (int i = 0; i < cert.row_ops.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < cert.row_ops.cols(); ++j) row.push_back(to_string(cert.row_ops(i, j)));
    rows.push_back(row);
  }
  doc["row_ops"] = rows;
  json cong = json::array();
  for (const auto& T : cert.congruences) cong.push_back(real_matrix_json(T));
  doc["congruences"] = cong;
  doc["T"] = real_matrix_json(cert.T);
  doc["residual_pd_witness"] = cert.residual_pd_witness ? real_matrix_json(cert.residual_pd_witness->full()) : json();
  doc["witness_residual"] = to_string(cert.witness_residual, 6);
  doc["exact_steps"] = cert.exact_steps;
  doc["flags"] = {{"heuristic", cert.heuristic},
                  {"ambiguous", cert.ambiguous},
                  {"degenerate", cert.degenerate},
                  {"minimality_claimed", cert.minimality_claimed}};
  return doc.dump();
}

FrCertificate parse_certificate(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid certificate JSON: ") + e.what());
  }
  FrCertificate cert;
  try {
    cert.k = doc.at("k").get<int>();
    cert.ranks = doc.at("r").get<std::vector<int>>();
    const json& rows = doc.at("row_ops");
    int m = int(rows.size());
    cert.row_ops = Matrix<Rational>(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) cert.row_ops(i, j) = parse_rational(rows.at(i).at(j).get<std::string>());
    for (const auto& c : doc.at("congruences")) cert.congruences.push_back(real_matrix_from_json(c, "congruences"));
    cert.T = real_matrix_from_json(doc.at("T"), "T");
    if (!doc.at("residual_pd_witness").is_null())
      cert.residual_pd_witness =
          SymMatrix<Real>::from_upper(real_matrix_from_json(doc["residual_pd_witness"], "residual_pd_witness"));
    cert.witness_residual = Real(doc.at("witness_residual").get<std::string>());
    cert.exact_steps = doc.value("exact_steps", 0);
    const json& flags = doc.at("flags");
    cert.heuristic = flags.at("heuristic").get<bool>();
    cert.ambiguous = flags.at("ambiguous").get<bool>();
    cert.degenerate = flags.at("degenerate").get<bool>();
    cert.minimality_claimed = flags.at("minimality_claimed").get<bool>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("certificate: ") + e.what());
  }
  return cert;
}

}  // namespace khier
