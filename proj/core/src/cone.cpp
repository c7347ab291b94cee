#include <algorithm>

#include "eigen_util.hpp"
#include "khier/reduce.hpp"

namespace khier {

using namespace detail;

namespace {

// Frobenius-orthonormal basis G of the span; G_a = sum_i K(a,i) A_i.
struct Basis {
  std::vector<RealMat> G;
  std::vector<RealVec> K;
};

Basis orthonormalize(const std::vector<RealMat>& A) {
  Basis b;
  const Eigen::Index p = Eigen::Index(A.size());
  for (Eigen::Index i = 0; i < p; ++i) {
    Real scale = frobenius(A[i]);
    if (scale == 0) continue;
    RealMat v = A[i] / scale;
    RealVec coef = RealVec::Zero(p);
    coef(i) = 1 / scale;
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t a = 0; a < b.G.size(); ++a) {
        Real proj = inner(b.G[a], v);
        v -= proj * b.G[a];
        coef -= proj * b.K[a];
      }
    Real norm = frobenius(v);
    if (norm <= Real("1e-30")) continue;
    b.G.push_back(v / norm);
    b.K.push_back(coef / norm);
  }
  return b;
}

int rank_by_gap(const RealVec& e, const Real& tol) {
  const Eigen::Index n = e.size();
  if (n == 0 || !(e(0) > 0)) return 0;
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    if (!(e(i + 1) > 0) || e(i + 1) / e(i) < tol) return int(i + 1);
  return int(n);
}

// Largest step in [0, 1] keeping M + a dM PD, damped by gamma.
Real max_step(const RealMat& M, const RealMat& dM, const Real& gamma) {
  Eigen::LLT<RealMat> llt(M);
  if (llt.info() != Eigen::Success) return 0;
  RealMat L = llt.matrixL();
  RealMat A = L.triangularView<Eigen::Lower>().solve(dM);
  RealMat S = L.triangularView<Eigen::Lower>().solve(A.transpose());
  Real lo = eigen_desc(S).values.minCoeff();
  if (lo >= 0) return 1;
  return std::min(Real(1), Real(gamma * (-1 / lo)));
}

struct IpmState {
  RealVec lambda;
  RealMat X, Y;
  int iterations = 0;
  Real mu;
  int stable_rank = 0;  // leading eigenvalues of X that do not shrink with mu
};

// Eigenvalues on the range of the limit point converge, the others decay like
// a power of mu, so compare the final X with the iterate at the log-midpoint of mu.
int stable_rank(const std::vector<std::pair<Real, RealMat>>& history, const RealMat& X, const Real& mu) {
  if (history.empty() || !(mu > 0)) return 0;
  const Real target = sqrt(history.front().first * mu);
  std::size_t mid = 0;
  for (std::size_t i = 1; i < history.size(); ++i)
    if (abs(log(history[i].first / target)) < abs(log(history[mid].first / target))) mid = i;
  if (!(history[mid].first > mu * 1000)) return 0;
  RealVec a = eigen_desc(history[mid].second).values, b = eigen_desc(X).values;
  int r = 0;
  while (r < b.size() && b(r) > 0 && b(r) >= Real("0.8") * a(r)) ++r;
  return r;
}

// min c'l  s.t.  X = I/n + sum l_a F_a >= 0,  F_a = (tr G_a/n) I - G_a,  c_a = tr G_a / n.
// Dual: Y >= 0 with <F_a, Y> = c_a. Both sides strictly feasible when I is not in span G.
IpmState solve_auxiliary(const std::vector<RealMat>& G, const ConeOptions& opt) {
  const Eigen::Index n = G[0].rows();
  const Eigen::Index q = Eigen::Index(G.size());
  const RealMat I = RealMat::Identity(n, n);
  const RealMat F0 = I / Real(n);
  std::vector<RealMat> F(q);
  RealVec c(q);
  for (Eigen::Index a = 0; a < q; ++a) {
    c(a) = G[a].trace() / Real(n);
    F[a] = c(a) * I - G[a];
  }
  const Real gamma("0.95");

  IpmState s{RealVec::Zero(q), F0, I, 0, 0};
  auto assemble = [&](const RealVec& l) {
    RealMat X = F0;
    for (Eigen::Index a = 0; a < q; ++a) X += l(a) * F[a];
    return X;
  };

  Real best_mu = -1;
  int stalled = 0;
  std::vector<std::pair<Real, RealMat>> history;
  for (; s.iterations < opt.max_iterations; ++s.iterations) {
    s.mu = inner(s.X, s.Y) / Real(n);
    history.emplace_back(s.mu, s.X);
    // precision floor: mu stops shrinking once X and Y are too ill-conditioned
    if (best_mu < 0 || s.mu < best_mu / 2) {
      best_mu = s.mu;
      stalled = 0;
    } else if (++stalled >= 10) {
      break;
    }
    RealVec d(q);
    for (Eigen::Index a = 0; a < q; ++a) d(a) = inner(F[a], s.Y) - c(a);
    Real dres = d.size() ? d.cwiseAbs().maxCoeff() : Real(0);
    if (s.mu < opt.target_mu && dres < opt.target_mu) break;

    Eigen::LLT<RealMat> xllt(s.X);
    if (xllt.info() != Eigen::Success) break;
    RealMat Xinv = xllt.solve(I);
    RealMat Bs(q, q);
    std::vector<RealMat> H(q);
    for (Eigen::Index b = 0; b < q; ++b) H[b] = Xinv * F[b] * s.Y;
    for (Eigen::Index a = 0; a < q; ++a)
      for (Eigen::Index b = 0; b < q; ++b) Bs(a, b) = inner(F[a], H[b].transpose());
    Bs = (Bs + Bs.transpose()) / 2;
    Eigen::LDLT<RealMat> bsolve(Bs);
    if (bsolve.info() != Eigen::Success) break;

    RealMat P = s.X - assemble(s.lambda);
    RealMat XinvPY = Xinv * P * s.Y;
    struct Dir {
      RealVec dl;
      RealMat dX, dY;
    };
    auto direction = [&](const RealMat& R) {
      RealMat XinvR = Xinv * R;
      RealVec rhs(q);
      for (Eigen::Index a = 0; a < q; ++a)
        rhs(a) = inner(F[a], XinvR.transpose()) + inner(F[a], XinvPY.transpose()) + d(a);
      Dir dir{bsolve.solve(rhs), -P, RealMat()};
      for (Eigen::Index b = 0; b < q; ++b) dir.dX += dir.dl(b) * F[b];
      RealMat dY = Xinv * (R - dir.dX * s.Y);
      dir.dY = (dY + dY.transpose()) / 2;
      return dir;
    };

    RealMat XY = s.X * s.Y;
    Dir aff = direction(-XY);
    Real ap = max_step(s.X, aff.dX, Real(1)), ad = max_step(s.Y, aff.dY, Real(1));
    Real mu_aff = inner(s.X + ap * aff.dX, s.Y + ad * aff.dY) / Real(n);
    Real sigma = mu_aff / s.mu;
    sigma = std::clamp(Real(sigma * sigma * sigma), Real(0), Real(1));
    Dir cor = direction(sigma * s.mu * I - XY - aff.dX * aff.dY);
    ap = max_step(s.X, cor.dX, gamma);
    ad = max_step(s.Y, cor.dY, gamma);
    if (ap < Real("1e-30") && ad < Real("1e-30")) break;
    s.lambda += ap * cor.dl;
    s.X = assemble(s.lambda);
    RealMat Y = s.Y + ad * cor.dY;
    s.Y = (Y + Y.transpose()) / 2;
  }
  s.mu = inner(s.X, s.Y) / Real(n);
  s.stable_rank = stable_rank(history, s.X, s.mu);
  return s;
}

struct Polished {
  RealVec v;
  Real residual;  // |C22 - C21 C11^-1 C12| / |C|, -1 when C11 is not PD
};

// Gauss-Newton on the Schur complement of the leading r x r block of V in its
// eigenbasis; the complement vanishes exactly when rank V = r.
Polished polish(const std::vector<RealMat>& G, RealVec v, Eigen::Index r) {
  const Eigen::Index n = G[0].rows();
  const Eigen::Index q = Eigen::Index(G.size());
  if (r == 0 || r == n) return {v, 0};
  RealMat V = RealMat::Zero(n, n);
  for (Eigen::Index a = 0; a < q; ++a) V += v(a) * G[a];
  EigenDesc e = eigen_desc(V);
  const Eigen::Index s = n - r;
  std::vector<RealMat> H(q);
  for (Eigen::Index a = 0; a < q; ++a) H[a] = e.vectors.transpose() * G[a] * e.vectors;

  Polished best{v, -1};
  for (int it = 0; it < 12; ++it) {
    RealMat C = RealMat::Zero(n, n);
    for (Eigen::Index a = 0; a < q; ++a) C += v(a) * H[a];
    Eigen::LLT<RealMat> llt(C.topLeftCorner(r, r));
    if (llt.info() != Eigen::Success) break;
    RealMat K = llt.solve(RealMat(C.topRightCorner(r, s)));
    RealMat F = C.bottomRightCorner(s, s) - C.bottomLeftCorner(s, r) * K;
    Real res = frobenius(F) / frobenius(C);
    if (best.residual >= 0 && !(res < best.residual)) break;
    best = {v, res};
    if (res <= Real("1e-70")) break;

    // last row pins the scale: F is homogeneous in v, so -v would solve J d = -F
    const Eigen::Index rows = s * (s + 1) / 2 + 1;
    RealMat J(rows, q);
    RealVec f(rows);
    J.row(rows - 1) = v.transpose() / v.norm();
    f(rows - 1) = 0;
    for (Eigen::Index a = 0; a < q; ++a) {
      RealMat D = H[a].bottomRightCorner(s, s) - H[a].bottomLeftCorner(s, r) * K -
                  K.transpose() * H[a].topRightCorner(r, s) + K.transpose() * H[a].topLeftCorner(r, r) * K;
      Eigen::Index row = 0;
      for (Eigen::Index i = 0; i < s; ++i)
        for (Eigen::Index j = i; j < s; ++j) J(row++, a) = D(i, j);
    }
    Eigen::Index row = 0;
    for (Eigen::Index i = 0; i < s; ++i)
      for (Eigen::Index j = i; j < s; ++j) f(row++) = F(i, j);
    Eigen::JacobiSVD<RealMat> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(Real("1e-40"));
    v -= svd.solve(f);
  }
  return best;
}

// Ranks worth trying for a PSD point near the face: the gap rank first, then
// every position with a large relative drop, largest first.
std::vector<Eigen::Index> candidate_ranks(const RealVec& e, const Real& rank_tol) {
  std::vector<Eigen::Index> out;
  const Eigen::Index n = e.size();
  if (n == 0 || !(e(0) > 0)) return out;
  for (Eigen::Index i = n; i >= 1; --i) {
    bool cut = i == n || !(e(i) > 0) || e(i) / e(i - 1) < Real("1e-4");
    if (cut) out.push_back(i);
  }
  Eigen::Index g = rank_by_gap(e, rank_tol);
  out.erase(std::remove(out.begin(), out.end(), g), out.end());
  out.insert(out.begin(), g);
  return out;
}

RealMat combination(const std::vector<RealMat>& span, const std::vector<Real>& l) {
  RealMat V = RealMat::Zero(span[0].rows(), span[0].cols());
  for (std::size_t i = 0; i < span.size(); ++i)
    if (l[i] != 0) V += l[i] * span[i];
  return V;
}

}  // namespace

ConeAlternative cone_alternative(const std::vector<SymMatrix<Rational>>& span, const ConeOptions& opt) {
  std::vector<SymMatrix<Real>> r;
  for (const auto& m : span) r.push_back(to_real(m));
  return cone_alternative(r, opt);
}

ConeAlternative cone_alternative(const std::vector<SymMatrix<Real>>& span_in, const ConeOptions& opt) {
  if (span_in.empty()) throw Error(ErrorCode::InvalidStructure, "cone_alternative: empty span");
  const int n = span_in[0].n();
  std::vector<RealMat> span;
  for (const auto& m : span_in) {
    if (m.n() != n) throw Error(ErrorCode::InvalidStructure, "cone_alternative: dimension mismatch");
    span.push_back(to_eigen(m));
  }
  const Eigen::Index p = Eigen::Index(span.size());
  const RealMat I = RealMat::Identity(n, n);
  ConeAlternative out;

  Basis basis = orthonormalize(span);
  const Eigen::Index q = Eigen::Index(basis.G.size());
  if (q == 0) {
    out.kind = ConeAlternative::Kind::PD_IN_PERP;
    out.W = SymMatrix<Real>::identity(n);
    out.heuristic = false;
    out.optimal_value = Real(1) / n;
    return out;
  }

  // Finalizes alternative (1) from coefficients v on the orthonormal basis.
  auto finish_psd = [&](const RealVec& v0, bool heuristic, Eigen::Index preferred) {
    RealMat V0 = RealMat::Zero(n, n);
    for (Eigen::Index a = 0; a < q; ++a) V0 += v0(a) * basis.G[a];
    std::vector<Eigen::Index> ranks = candidate_ranks(eigen_desc(V0).values, opt.rank_tol);
    if (preferred > 0) {
      ranks.erase(std::remove(ranks.begin(), ranks.end(), preferred), ranks.end());
      ranks.insert(ranks.begin(), preferred);
    }
    for (Eigen::Index want : ranks) {
      Polished pol = polish(basis.G, v0, want);
      if (pol.residual < 0) continue;
      RealVec lam = RealVec::Zero(p);
      for (Eigen::Index a = 0; a < q; ++a) lam += pol.v(a) * basis.K[a];
      Real top = lam.cwiseAbs().maxCoeff();
      if (top == 0) continue;
      Eigen::Index piv = 0;
      for (Eigen::Index i = 0; i < p; ++i)
        if (abs(lam(i)) >= top * (1 - Real("1e-20"))) {
          piv = i;
          break;
        }
      lam /= abs(lam(piv));

      std::vector<Real> real(lam.data(), lam.data() + p);
      EigenDesc e = eigen_desc(combination(span, real));
      const Real vmax = e.values(0);
      if (want == preferred) {
        // the path history already separated range from vanishing eigenvalues
        bool ok = e.values(want - 1) > 0 && e.values.minCoeff() >= -Real("1e-20") * vmax;
        for (Eigen::Index i = want; i < e.values.size() && ok; ++i) ok = abs(e.values(i)) <= Real("1e-6") * e.values(want - 1);
        if (!ok) continue;
      } else if (rank_by_gap(e.values, opt.rank_tol) != want || e.values.minCoeff() < -Real("1e-20") * vmax) {
        continue;
      }
      const int r = int(want);

      std::vector<Rational> snapped;
      for (Eigen::Index i = 0; i < p; ++i) {
        auto sq = rationalize(lam(i), Real("1e-20"), Integer(1000000));
        if (!sq) break;
        snapped.push_back(*sq);
      }
      out.lambda_snapped = false;
      if (Eigen::Index(snapped.size()) == p) {
        std::vector<Real> sr;
        for (const auto& x : snapped) sr.push_back(to_real(x));
        EigenDesc es = eigen_desc(combination(span, sr));
        if (es.values(0) > 0 && es.values.minCoeff() >= -Real("1e-40") * es.values(0) &&
            (r == int(es.values.size()) || es.values(r) <= Real("1e-40") * es.values(0))) {
          out.lambda_exact = snapped;
          out.lambda_snapped = true;
          real = sr;
        }
      }
      if (!out.lambda_snapped) {
        out.lambda_exact.clear();
        for (Eigen::Index i = 0; i < p; ++i) out.lambda_exact.push_back(decimal_rational(lam(i), 40));
      }
      out.lambda = real;
      out.rank = r;
      out.kind = ConeAlternative::Kind::NONZERO_PSD_IN_SPAN;
      out.Y = sym_from_eigen(combination(span, real));
      out.heuristic = heuristic;
      return out;
    }
    throw Error(ErrorCode::NumericallyAmbiguous, "cone_alternative: span element is not numerically PSD");
  };

  // identity in the span: PD matrix available without solving anything
  {
    RealVec cI(q);
    RealMat R = I;
    for (Eigen::Index a = 0; a < q; ++a) {
      cI(a) = inner(basis.G[a], I);
      R -= cI(a) * basis.G[a];
    }
    if (frobenius(R) <= Real("1e-40") * sqrt(Real(n))) {
      out.optimal_value = -Real(1) / n;
      return finish_psd(cI, false, n);
    }
  }

  IpmState st = solve_auxiliary(basis.G, opt);
  out.iterations = st.iterations;
  Real nu = Real(1) / n;
  for (Eigen::Index a = 0; a < q; ++a) nu += basis.G[a].trace() / Real(n) * st.lambda(a);
  out.optimal_value = nu;

  if (nu >= opt.positive_level) {
    RealMat W = st.Y + ((1 - st.Y.trace()) / Real(n)) * I;
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index a = 0; a < q; ++a) W -= inner(basis.G[a], W) * basis.G[a];
    W = (W + W.transpose()) / 2;
    EigenDesc e = eigen_desc(W);
    Real lo = e.values(n - 1), hi = e.values(0);
    if (hi > 0 && lo > Real("1e-20") * hi) {
      out.kind = ConeAlternative::Kind::PD_IN_PERP;
      out.W = sym_from_eigen(W * (Real(n) / W.trace()));
      out.heuristic = true;
      return out;
    }
  }
  // on singular faces the optimal value only decays like sqrt(mu), so the
  // polished PSD certificate decides rather than the value itself
  if (nu < opt.positive_level) {
    try {
      return finish_psd(-st.lambda, true, st.stable_rank);
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::NumericallyAmbiguous,
              "cone_alternative: auxiliary optimal value " + to_string(nu, 6) + " after " +
                  std::to_string(st.iterations) + " iterations certifies neither alternative");
}

}  // namespace khier
