#include "khier/verify.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <sstream>

namespace khier {

namespace {

constexpr int kMaxExponent = 4096;

struct Evaluator {
  const BlockPartition& part;
  SymMatrix<Real> Z;
  std::vector<SymMatrix<Real>> A;

  Evaluator(const SdpSystem& sys, const BlockPartition& p) : part(p), Z(to_real(fixed_part(sys, p.k))) {
    for (int i = 0; i < p.k; ++i) A.push_back(to_real(sys.A[i]));
  }

  bool block_pd(int j, const std::vector<Real>& x) const {
    const int first = part.offset(j);
    const int w = part.n - first;
    SymMatrix<Real> S(w);
    for (int a = 0; a < w; ++a)
      for (int b = a; b < w; ++b) S.set(a, b, Z(first + a, first + b));
    for (int i = j; i <= part.k; ++i) {
      const Real& xi = x[i - 1];
      if (xi == 0) continue;
      for (int a = 0; a < w; ++a)
        for (int b = a; b < w; ++b) {
          const Real& v = A[i - 1](first + a, first + b);
          if (v != 0) S.add(a, b, xi * v);
        }
    }
    return definiteness_equilibrated(S) == Definiteness::PD;
  }
};

void require_k(const BlockPartition& part) {
  if (part.k < 1) throw Error(ErrorCode::InvalidStructure, "system is not in regular form (k = 0)");
}

void require_partially_strict(const Evaluator& ev) {
  const int first = ev.part.offset(ev.part.k + 1);
  const int w = ev.part.n - first;
  if (w == 0) return;
  SymMatrix<Real> S(w);
  for (int a = 0; a < w; ++a)
    for (int b = a; b < w; ++b) S.set(a, b, ev.Z(first + a, first + b));
  if (definiteness_equilibrated(S) != Definiteness::PD)
    throw Error(ErrorCode::NotPartiallyStrict, "Z(I_{k+1}) is not positive definite");
}

Real minimal_completion_impl(const Evaluator& ev, int j, std::vector<Real> x) {
  const int k = ev.part.k;
  if (j < 1 || j > k) throw Error(ErrorCode::InvalidStructure, "minimal_completion: j out of range");
  if (int(x.size()) != k) throw Error(ErrorCode::InvalidStructure, "minimal_completion: x must have length k");
  for (int l = 1; l <= j; ++l) x[l - 1] = 0;
  if (j < k) {
    if (!ev.block_pd(j + 1, x))
      throw Error(ErrorCode::InvalidStructure,
                  "minimal_completion: trailing block I_" + std::to_string(j + 1) + "..I_{k+1} is not PD");
  } else {
    require_partially_strict(ev);
  }
  const Real cap = ldexp(Real(1), kMaxExponent);
  auto pd = [&](const Real& v) {
    x[j - 1] = v;
    return ev.block_pd(j, x);
  };
  Real hi = 1, lo;
  if (pd(hi)) {
    Real step = 1;
    lo = 0;
    while (pd(lo)) {
      hi = lo;
      lo = -step;
      step *= 2;
      if (step > cap) return -std::numeric_limits<Real>::infinity();
    }
  } else {
    lo = hi;
    while (!pd(hi)) {
      lo = hi;
      hi *= 2;
      if (hi > cap) throw Error(ErrorCode::ScaleTooSmall, "minimal_completion: no x_j <= 2^4096 gives a PD block");
    }
  }
  const Real rel = ldexp(Real(1), -20);
  const Real floor_gap = ldexp(Real(1), -200);
  for (int it = 0; it < 10000; ++it) {
    Real gap = hi - lo;
    Real scale = std::max(abs(hi), abs(lo));
    if (gap <= rel * scale || gap <= floor_gap) break;
    Real mid = (lo + hi) / 2;
    if (pd(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

std::vector<Real> chain(const Evaluator& ev, const Real& M) {
  const int k = ev.part.k;
  std::vector<Real> x(k, Real(0));
  x[k - 1] = M;
  if (!ev.block_pd(k, x))
    throw Error(ErrorCode::ScaleTooSmall, "x_k = " + to_string(M, 6) + " does not make the I_k..I_{k+1} block PD");
  // each link gets the greedy safety factor so the slack left for the next one is scale independent
  for (int j = k - 1; j >= 1; --j) {
    Real m = minimal_completion_impl(ev, j, x);
    if (boost::multiprecision::isinf(m))
      m = 0;
    else if (m > 0)
      m *= 2;
    else if (m < 0)
      m /= 2;
    else
      m = 1;
    x[j - 1] = m;
  }
  return x;
}

PairFit fit_pair(int j, const std::vector<std::vector<Real>>& pts, std::size_t from) {
  PairFit f;
  f.j = j;
  std::vector<double> u, v;
  for (std::size_t s = from; s < pts.size(); ++s) {
    const Real& a = pts[s][j - 1];
    const Real& b = pts[s][j];
    if (!(a > 0) || !(b > 0)) {
      f.slope = f.intercept = f.residual = std::numeric_limits<double>::quiet_NaN();
      return f;
    }
    u.push_back(static_cast<double>(log(b)));
    v.push_back(static_cast<double>(log(a)));
  }
  const double N = double(u.size());
  double mu = 0, mv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i] / N;
    mv += v[i] / N;
  }
  double suu = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu) * (u[i] - mu);
    suv += (u[i] - mu) * (v[i] - mv);
  }
  f.slope = suv / suu;
  f.intercept = mv - f.slope * mu;
  double ss = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double e = v[i] - (f.intercept + f.slope * u[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / N);
  return f;
}

}  // namespace

bool trailing_block_pd(const SdpSystem& sys, const BlockPartition& part, int j, const std::vector<Real>& x) {
  require_k(part);
  if (int(x.size()) != part.k) throw Error(ErrorCode::InvalidStructure, "x must have length k");
  return Evaluator(sys, part).block_pd(j, x);
}

std::vector<Real> greedy_strict_point(const SdpSystem& sys, const BlockPartition& part, const Real& M) {
  require_k(part);
  Evaluator ev(sys, part);
  require_partially_strict(ev);
  const int k = part.k;
  std::vector<Real> x(k, Real(0));
  x[k - 1] = M;
  if (!ev.block_pd(k, x))
    throw Error(ErrorCode::ScaleTooSmall, "x_k = " + to_string(M, 6) + " does not make the I_k..I_{k+1} block PD");
  for (int j = k - 1; j >= 1; --j) {
    bool found = false;
    for (int e = 0; e <= kMaxExponent && !found; ++e) {
      x[j - 1] = ldexp(Real(1), e);
      found = ev.block_pd(j, x);
    }
    if (!found)
      throw Error(ErrorCode::ScaleTooSmall, "no power of two up to 2^4096 works for x_" + std::to_string(j));
    x[j - 1] *= 2;
  }
  if (!ev.block_pd(1, x)) throw Error(ErrorCode::VerificationFail, "greedy point is not strictly feasible");
  return x;
}

Real minimal_completion(const SdpSystem& sys, const BlockPartition& part, int j, const std::vector<Real>& x) {
  require_k(part);
  return minimal_completion_impl(Evaluator(sys, part), j, x);
}

std::vector<Real> default_scales() {
  std::vector<Real> s;
  for (int i = 0; i <= 6; ++i) s.push_back(pow(Real(10), Real(2) + Real(i) / 2));
  return s;
}

ScaleSweep empirical_exponents(const SdpSystem& sys, const BlockPartition& part, const std::vector<Real>& scales,
                               bool parallel) {
  require_k(part);
  if (scales.size() < 4) throw Error(ErrorCode::InvalidStructure, "empirical_exponents: need at least 4 scales");
  for (std::size_t i = 1; i < scales.size(); ++i)
    if (!(scales[i] > scales[i - 1])) throw Error(ErrorCode::InvalidStructure, "scales must be strictly increasing");
  if (!(scales.front() > 0) || scales.back() / scales.front() < 1000)
    throw Error(ErrorCode::InvalidStructure, "scales must be positive and span at least 3 decades");
  Evaluator ev(sys, part);
  require_partially_strict(ev);

  ScaleSweep sweep;
  sweep.scales = scales;
  if (parallel) {
    std::vector<std::future<std::vector<Real>>> jobs;
    for (const auto& M : scales) jobs.push_back(std::async(std::launch::async, [&ev, M] { return chain(ev, M); }));
    for (auto& f : jobs) sweep.points.push_back(f.get());
  } else {
    for (const auto& M : scales) sweep.points.push_back(chain(ev, M));
  }
  const std::size_t from = scales.size() / 2;
  for (int j = 1; j <= part.k - 1; ++j) sweep.fits.push_back(fit_pair(j, sweep.points, from));
  return sweep;
}

HierarchyCheck check_hierarchy(const ScaleSweep& sweep, const ExponentHierarchy& alpha, double tol) {
  HierarchyCheck out;
  if (alpha.k < 2 || alpha.alpha.empty()) return out;
  for (int j = 1; j <= alpha.k - 1; ++j) {
    PairVerdict v;
    v.j = j;
    v.predicted = alpha.at(j + 1);
    v.lower_bound = 1.0 + 1.0 / double(alpha.k - j);
    const PairFit* fit = nullptr;
    for (const auto& f : sweep.fits)
      if (f.j == j) fit = &f;
    if (fit) {
      v.slope = fit->slope;
      v.residual = fit->residual;
      double pred = static_cast<double>(v.predicted);
      v.pass = std::isfinite(v.slope) && std::abs(v.slope - pred) <= tol && v.slope >= v.lower_bound - tol &&
               v.slope <= 2 + tol;
    }
    out.pass = out.pass && v.pass;
    out.pairs.push_back(v);
  }
  return out;
}

void attach_fits(ExponentHierarchy& h, const ScaleSweep& sweep) {
  std::vector<FittedConstant> d;
  for (const auto& f : sweep.fits) d.push_back({std::exp(f.intercept), f.residual});
  h.d = d;
}

std::string points_csv(const ScaleSweep& sweep) {
  std::ostringstream os;
  os << "scale";
  const std::size_t k = sweep.points.empty() ? 0 : sweep.points[0].size();
  for (std::size_t i = 1; i <= k; ++i) os << ",x_" << i;
  os << '\n';
  for (std::size_t s = 0; s < sweep.points.size(); ++s) {
    os << to_string(sweep.scales[s], 17);
    for (const auto& v : sweep.points[s]) os << ',' << to_string(v, 17);
    os << '\n';
  }
  return os.str();
}

std::string summary_csv(const HierarchyCheck& check) {
  std::ostringstream os;
  os.precision(17);
  os << "j,predicted_alpha,fitted_slope,residual,verdict\n";
  for (const auto& p : check.pairs)
    os << p.j << ',' << to_string(p.predicted) << ',' << p.slope << ',' << p.residual << ','
       << (p.pass ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace khier
