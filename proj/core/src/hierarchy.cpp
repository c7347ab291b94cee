#include "khier/hierarchy.hpp"

#include <set>
#include <sstream>

namespace khier {

namespace {

std::string format_linear(const std::map<int, Rational>& coeffs, const Rational& constant) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : coeffs) {
    Rational a = abs(c);
    if (first)
      os << (c < 0 ? "-" : "");
    else
      os << (c < 0 ? " - " : " + ");
    if (a != 1) os << to_string(a) << "*";
    os << "x_" << i;
    first = false;
  }
  if (constant != 0 || first) {
    if (first)
      os << to_string(constant);
    else
      os << (constant < 0 ? " - " : " + ") << to_string(Rational(abs(constant)));
  }
  return os.str();
}

LinearForm entry_form(const SdpSystem& sys, int a, int b) {
  LinearForm f;
  for (int i = 0; i < sys.m; ++i)
    if (sys.A[i](a, b) != 0) f.coeffs[i + 1] = sys.A[i](a, b);
  f.constant = sys.B(a, b);
  return f;
}

LinearForm strip(LinearForm f, int var, const Rational& expected, int start, const char* what) {
  auto it = f.coeffs.find(var);
  Rational have = it == f.coeffs.end() ? Rational(0) : it->second;
  if (have != expected)
    throw Error(ErrorCode::InvalidStructure, std::string("malformed system: unexpected coefficient in ") + what);
  if (it != f.coeffs.end()) f.coeffs.erase(it);
  f.start = start;
  for (const auto& [i, c] : f.coeffs)
    if (i <= start)
      throw Error(ErrorCode::InvalidStructure, std::string("malformed system: ") + what + " depends on x_" +
                                                   std::to_string(i));
  return f;
}

}  // namespace

Real LinearForm::value(const std::vector<Real>& x) const {
  Real v = to_real(constant);
  for (const auto& [i, c] : coeffs) v += to_real(c) * x.at(i - 1);
  return v;
}

std::string LinearForm::to_string() const { return format_linear(coeffs, constant); }

const char* to_string(QuadraticKind kind) { return kind == QuadraticKind::TYPE1 ? "TYPE1" : "TYPE2"; }

Real DerivedQuadratic::evaluate(const std::vector<Real>& x) const {
  Real a = x.at(j - 1) + delta_j.value(x);
  Real b = kind == QuadraticKind::TYPE1 ? Real(x.at(t - 1) + delta_t.value(x)) : delta_t.value(x);
  Real c = to_real(beta) * x.at(j) + delta_j1.value(x);
  return a * b - c * c;
}

std::string DerivedQuadratic::to_string() const {
  auto with = [](int var, const Rational& coef, const LinearForm& f) {
    auto m = f.coeffs;
    m[var] = coef;
    return format_linear(m, f.constant);
  };
  std::ostringstream os;
  os << "(" << with(j, 1, delta_j) << ")(";
  os << (kind == QuadraticKind::TYPE1 ? with(t, 1, delta_t) : delta_t.to_string());
  os << ") - (" << with(j + 1, beta, delta_j1) << ")^2";
  return os.str();
}

std::vector<DerivedQuadratic> derive_quadratics(const SdpSystem& sys, const BlockPartition& part,
                                                const TailIndexVector& tails) {
  if (part.k < 2) throw Error(ErrorCode::InvalidStructure, "derive_quadratics needs k >= 2");
  std::vector<DerivedQuadratic> out;
  for (int j = 1; j <= part.k - 1; ++j) {
    DerivedQuadratic q;
    q.j = j;
    q.t = tails.t.at(j - 1);
    q.kind = q.t <= part.k ? QuadraticKind::TYPE1 : QuadraticKind::TYPE2;
    q.pivot = tails.pivots.at(j - 1);
    q.beta = q.pivot.beta;
    int l1 = q.pivot.l1 - 1, l2 = q.pivot.l2 - 1;
    q.delta_j = strip(entry_form(sys, l1, l1), j, 1, j, "delta_j");
    q.delta_j1 = strip(entry_form(sys, l1, l2), j + 1, q.beta, j + 1, "delta_{j+1}");
    if (q.kind == QuadraticKind::TYPE1)
      q.delta_t = strip(entry_form(sys, l2, l2), q.t, 1, q.t, "delta_t");
    else
      q.delta_t = strip(entry_form(sys, l2, l2), part.k + 1, 0, part.k, "delta_k");
    out.push_back(std::move(q));
  }
  return out;
}

const char* to_string(ExponentMethod method) {
  switch (method) {
    case ExponentMethod::RECURSION: return "RECURSION";
    case ExponentMethod::FOURIER_MOTZKIN: return "FOURIER_MOTZKIN";
    case ExponentMethod::MINIMAL_CLOSED_FORM: return "MINIMAL_CLOSED_FORM";
  }
  return "?";
}

void require_valid_tails(const std::vector<int>& tails, int k) {
  if (k < 2) throw Error(ErrorCode::InvalidStructure, "INVALID_TAILS: k must be at least 2");
  if (int(tails.size()) != k - 1)
    throw Error(ErrorCode::InvalidStructure, "INVALID_TAILS: expected " + std::to_string(k - 1) + " tail indices, got " +
                                                 std::to_string(tails.size()));
  for (int j = 1; j <= k - 1; ++j) {
    int t = tails[j - 1];
    if (t <= j + 1 || t > k + 1)
      throw Error(ErrorCode::InvalidStructure, "INVALID_TAILS: t_" + std::to_string(j + 1) + " = " + std::to_string(t) +
                                                   " is outside " + std::to_string(j + 2) + ".." +
                                                   std::to_string(k + 1));
  }
}

ExponentHierarchy exponents_recursion(const std::vector<int>& tails, int k) {
  require_valid_tails(tails, k);
  ExponentHierarchy h;
  h.k = k;
  h.method = ExponentMethod::RECURSION;
  h.alpha.assign(k - 1, Rational(0));
  for (int j = k - 1; j >= 1; --j) {
    int t = tails[j - 1];
    Rational a = 2;
    if (t <= k) {
      Rational prod = 1;
      for (int l = j + 2; l <= t; ++l) prod *= h.alpha[l - 2];
      a = 2 - 1 / prod;
    }
    h.alpha[j - 1] = a;  // alpha_{j+1}
  }
  return h;
}

namespace {

using Row = std::vector<Rational>;  // coefficients of y_1..y_k at positions 1..k; row . y >= 0

bool normalize(Row& row) {
  Rational scale = 0;
  for (const auto& c : row) scale = std::max(scale, Rational(abs(c)));
  if (scale == 0) return false;
  for (auto& c : row) c /= scale;
  return true;
}

}  // namespace

ExponentHierarchy exponents_fourier_motzkin(const std::vector<int>& tails, int k) {
  require_valid_tails(tails, k);
  std::set<Row> rows;
  for (int j = 1; j <= k - 1; ++j) {
    Row row(k + 1, Rational(0));
    row[j] += 1;
    row[j + 1] -= 2;
    if (tails[j - 1] <= k) row[tails[j - 1]] += 1;
    if (normalize(row)) rows.insert(row);
  }
  ExponentHierarchy h;
  h.k = k;
  h.method = ExponentMethod::FOURIER_MOTZKIN;
  h.alpha.assign(k - 1, Rational(0));
  for (int v = k; v >= 2; --v) {
    // all y_l with l > v are eliminated; read the tightest y_{v-1} >= c y_v
    std::optional<Rational> best;
    for (const auto& row : rows) {
      bool two_var = true;
      for (int l = 1; l <= k; ++l)
        if (l != v - 1 && l != v && row[l] != 0) two_var = false;
      if (!two_var || !(row[v - 1] > 0) || !(row[v] < 0)) continue;
      Rational c = -row[v] / row[v - 1];
      if (!best || c > *best) best = c;
    }
    if (!best)
      throw Error(ErrorCode::InvalidStructure, "Fourier-Motzkin: no bound on y_" + std::to_string(v - 1) + " in terms of y_" +
                                                   std::to_string(v));
    h.alpha[v - 2] = *best;
    if (v == 2) break;
    std::vector<Row> pos, neg;
    std::set<Row> next;
    for (const auto& row : rows) {
      if (row[v] > 0)
        pos.push_back(row);
      else if (row[v] < 0)
        neg.push_back(row);
      else
        next.insert(row);
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        Row comb(k + 1, Rational(0));
        Rational mp = 1 / p[v], mq = 1 / -q[v];
        for (int l = 1; l <= k; ++l) comb[l] = mp * p[l] + mq * q[l];
        comb[v] = 0;
        if (normalize(comb)) next.insert(comb);
      }
    rows = std::move(next);
  }
  return h;
}

ExponentHierarchy minimal_exponents(int k) {
  if (k < 2) throw Error(ErrorCode::InvalidStructure, "minimal_exponents needs k >= 2");
  ExponentHierarchy h;
  h.k = k;
  h.method = ExponentMethod::MINIMAL_CLOSED_FORM;
  for (int j = 1; j <= k - 1; ++j) h.alpha.push_back(1 + Rational(1, k - j));
  return h;
}

Rational magnitude_gap(const ExponentHierarchy& h) {
  Rational g = 1;
  for (const auto& a : h.alpha) g *= a;
  return g;
}

std::vector<std::string> bound_violations(const ExponentHierarchy& h) {
  std::vector<std::string> out;
  if (h.k < 2) return out;
  if (int(h.alpha.size()) != h.k - 1) {
    out.push_back("hierarchy has " + std::to_string(h.alpha.size()) + " exponents for k = " + std::to_string(h.k));
    return out;
  }
  if (h.at(h.k) != 2) out.push_back("alpha_" + std::to_string(h.k) + " = " + to_string(h.at(h.k)) + " != 2");
  for (int j = 1; j <= h.k - 1; ++j) {
    const Rational& a = h.at(j + 1);
    Rational lo = 1 + Rational(1, h.k - j);
    if (a < lo || a > 2)
      out.push_back("alpha_" + std::to_string(j + 1) + " = " + to_string(a) + " outside [" + to_string(lo) + ", 2]");
  }
  return out;
}

}  // namespace khier
