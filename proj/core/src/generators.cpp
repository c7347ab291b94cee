#include "khier/generators.hpp"

namespace khier {

namespace {

SdpSystem blank(int n, int m, std::string label) {
  SdpSystem s;
  s.n = n;
  s.m = m;
  s.A.assign(m, SymMatrix<Rational>(n));
  s.B = SymMatrix<Rational>(n);
  s.label = std::move(label);
  return s;
}

// 1-based E_{ab} with both symmetric entries.
void put(SymMatrix<Rational>& M, int a, int b, const Rational& v) { M.add(a - 1, b - 1, v); }

std::string tails_label(const std::vector<int>& tails) {
  std::string s = "tails(";
  for (std::size_t i = 0; i < tails.size(); ++i) s += (i ? "," : "") + std::to_string(tails[i]);
  return s + ")";
}

}  // namespace

const char* to_string(Family f) {
  switch (f) {
    case Family::KHACHIYAN: return "khachiyan";
    case Family::EXACT_KHACHIYAN: return "exact_khachiyan";
    case Family::MILD: return "mild";
    case Family::PERTURBED_KHACHIYAN: return "perturbed";
    case Family::POLYOPT: return "polyopt";
    case Family::ODONNELL: return "odonnell";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  for (Family f : {Family::KHACHIYAN, Family::EXACT_KHACHIYAN, Family::MILD, Family::PERTURBED_KHACHIYAN,
                   Family::POLYOPT, Family::ODONNELL})
    if (name == to_string(f)) return f;
  if (name == "perturbed_khachiyan") return Family::PERTURBED_KHACHIYAN;
  throw Error(ErrorCode::InvalidStructure, "unknown family \"" + name + "\"");
}

SdpSystem gen_tail_pattern(const std::vector<int>& tails, int k) {
  if (k < 2 || int(tails.size()) != k - 1)
    throw Error(ErrorCode::InvalidStructure, "gen_tail_pattern: need k >= 2 and k-1 tail indices");
  for (int j = 1; j <= k - 1; ++j)
    if (tails[j - 1] <= j + 1 || tails[j - 1] > k + 1)
      throw Error(ErrorCode::InvalidStructure, "INVALID_TAILS: t_" + std::to_string(j + 1) + " out of range");
  SdpSystem s = blank(k + 1, k, tails_label(tails));
  for (int i = 1; i <= k; ++i) put(s.A[i - 1], i, i, 1);
  for (int j = 1; j <= k - 1; ++j) put(s.A[j], j, tails[j - 1], 1);
  put(s.B, k + 1, k + 1, 1);
  return s;
}

SdpSystem gen_khachiyan(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidStructure, "gen_khachiyan: m >= 2 required");
  SdpSystem s = gen_tail_pattern(std::vector<int>(m - 1, m + 1), m);
  s.label = "khachiyan(" + std::to_string(m) + ")";
  return s;
}

SdpSystem gen_mild(int k) {
  if (k < 3) throw Error(ErrorCode::InvalidStructure, "gen_mild: k >= 3 required");
  std::vector<int> tails;
  for (int j = 1; j <= k - 1; ++j) tails.push_back(j + 2);
  SdpSystem s = gen_tail_pattern(tails, k);
  s.label = "mild(" + std::to_string(k) + ")";
  return s;
}

SdpSystem gen_exact_khachiyan(int m) {
  if (m < 2) throw Error(ErrorCode::InvalidStructure, "gen_exact_khachiyan: m >= 2 required");
  const int n = 2 * m - 1;
  SdpSystem s = blank(n, m, "exact_khachiyan(" + std::to_string(m) + ")");
  // cell p_i = i holds x_i; cell q_i = m + i is the unit of block i
  for (int i = 1; i <= m; ++i) put(s.A[i - 1], i, i, 1);
  for (int i = 2; i <= m; ++i) put(s.A[i - 1], i - 1, m + i - 1, 1);
  for (int i = 1; i <= m - 1; ++i) put(s.B, m + i, m + i, 1);
  put(s.B, m, m, -2);
  return s;
}

SdpSystem gen_perturbed_khachiyan() {
  SdpSystem s = blank(4, 3, "perturbed_khachiyan");
  put(s.A[0], 1, 1, 1);
  put(s.A[1], 1, 1, -2);
  put(s.A[1], 2, 2, 1);
  put(s.A[1], 1, 4, 1);
  put(s.A[2], 1, 4, -1);
  put(s.A[2], 2, 2, 1);
  put(s.A[2], 2, 4, 1);
  put(s.A[2], 3, 3, 1);
  put(s.B, 4, 4, 1);
  return s;
}

PolyoptInstance gen_polyopt(const std::vector<Rational>& coeffs) {
  if (coeffs.size() % 2 == 0)
    throw Error(ErrorCode::InvalidStructure, "gen_polyopt: need an odd number of coefficients a_0..a_{2n}");
  const int n = int(coeffs.size() / 2);
  if (n < 2) throw Error(ErrorCode::InvalidStructure, "gen_polyopt: degree 2n >= 4 required");
  if (!(coeffs.back() > 0)) throw Error(ErrorCode::InvalidStructure, "gen_polyopt: leading coefficient must be positive");
  PolyoptInstance out;
  SdpSystem& s = out.system;
  s = blank(n + 1, 2 * n, "polyopt(" + std::to_string(2 * n) + ")");
  // entry (a,b) carries y_{2n-(a-1)-(b-1)}, i.e. a+b = 2n+2-d for moment y_d
  auto place = [&](SymMatrix<Rational>& M, int d) {
    for (int a = 1; a <= n + 1; ++a) {
      int b = 2 * n + 2 - d - a;
      if (b >= a && b <= n + 1) put(M, a, b, 1);
    }
  };
  for (int i = 1; i <= n; ++i) place(s.A[i - 1], 2 * (n - i + 1));
  for (int i = 1; i <= n; ++i) place(s.A[n + i - 1], 2 * n - 2 * i + 1);
  place(s.B, 0);
  s.fixed_tail = std::vector<Rational>(n, Rational(0));
  out.objective = coeffs;
  return out;
}

std::vector<Rational> polyopt_variables(const std::vector<Rational>& y) {
  if (y.size() < 5 || y.size() % 2 == 0)
    throw Error(ErrorCode::InvalidStructure, "polyopt_variables: need moments y_0..y_{2n}, n >= 2");
  const int n = int(y.size() / 2);
  std::vector<Rational> x(2 * n);
  for (int i = 1; i <= n; ++i) x[i - 1] = y[2 * (n - i + 1)];
  for (int i = 1; i <= n; ++i) x[n + i - 1] = y[2 * n - 2 * i + 1];
  return x;
}

SdpSystem gen_odonnell(int n) {
  if (n < 2) throw Error(ErrorCode::InvalidStructure, "gen_odonnell: n >= 2 required");
  SdpSystem s = blank(2 * n + 1, n, "odonnell(" + std::to_string(n) + ")");
  put(s.A[0], 1, 1, 1);
  for (int i = 2; i <= n; ++i) {
    put(s.A[i - 1], i, i, 1);
    put(s.A[i - 1], i - 1, n + i - 1, -1);
  }
  for (int i = n + 1; i <= 2 * n; ++i) put(s.B, i, i, 1);
  put(s.B, n, 2 * n, -2);
  return s;
}

SdpSystem generate(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::KHACHIYAN: return gen_khachiyan(spec.size);
    case Family::EXACT_KHACHIYAN: return gen_exact_khachiyan(spec.size);
    case Family::MILD: return gen_mild(spec.size);
    case Family::PERTURBED_KHACHIYAN: return gen_perturbed_khachiyan();
    case Family::POLYOPT: {
      if (!spec.coeffs) throw Error(ErrorCode::InvalidStructure, "polyopt needs coefficients a_0..a_{2n}");
      return gen_polyopt(*spec.coeffs).system;
    }
    case Family::ODONNELL: return gen_odonnell(spec.size);
  }
  throw Error(ErrorCode::InvalidStructure, "unknown family");
}

}  // namespace khier
