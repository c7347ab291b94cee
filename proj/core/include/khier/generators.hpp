#pragma once

#include <optional>
#include <string>
#include <vector>

#include "khier/instance.hpp"

namespace khier {

enum class Family { KHACHIYAN, EXACT_KHACHIYAN, MILD, PERTURBED_KHACHIYAN, POLYOPT, ODONNELL };

const char* to_string(Family f);
// Accepts the lower-case names used on the command line ("khachiyan", "exact_khachiyan",
// "mild", "perturbed", "polyopt", "odonnell").
Family parse_family(const std::string& name);

struct FamilySpec {
  Family family = Family::KHACHIYAN;
  int size = 2;                        // m, k or n depending on the family; ignored for PERTURBED_KHACHIYAN
  std::optional<std::vector<Rational>> coeffs;  // POLYOPT: a_0..a_{2n}
};

// n = m+1; x_1..x_m and 1 on the diagonal; x_{i+1} at (i, m+1).
SdpSystem gen_khachiyan(int m);
// (2m-1)x(2m-1): blocks [[x_i, x_{i+1}], [x_{i+1}, 1]] for i < m and [x_m - 2].
// Rows 1..m carry x_1..x_m on the diagonal, rows m+1..2m-1 the unit cells.
SdpSystem gen_exact_khachiyan(int m);
// n = k+1; x_{j+1} at (j, j+2); tails t_{j+1} = j+2.
SdpSystem gen_mild(int k);
// n = k+1; x_1..x_k and 1 on the diagonal, x_{j+1} at (j, t_{j+1}).
SdpSystem gen_tail_pattern(const std::vector<int>& tails, int k);
// The fixed 4x4 instance with diagonal (x_1 - 2x_2, x_2 + x_3, x_3, 1).
SdpSystem gen_perturbed_khachiyan();

struct PolyoptInstance {
  SdpSystem system;
  std::vector<Rational> objective;  // a_0..a_{2n}
};
// Hankel moment matrix [y_{2n-(a-1)-(b-1)}] with y_0 = 1, variables renamed
// x_i = y_{2(n-i+1)} (i <= n) and x_{n+i} = y_{2n-2i+1}; odd moments fixed to 0.
PolyoptInstance gen_polyopt(const std::vector<Rational>& coeffs);
// (2n+1)x(2n+1): A_1 = E_11, A_i = E_ii - E_{i-1,n+i-1}, B = sum_{i=n+1}^{2n} E_ii - 2E_{n,2n}.
SdpSystem gen_odonnell(int n);

SdpSystem generate(const FamilySpec& spec);

// Moment-matrix point of a polyopt instance: x_i = y_{2(n-i+1)} and x_{n+i} = y_{2n-2i+1}.
std::vector<Rational> polyopt_variables(const std::vector<Rational>& y);

}  // namespace khier
