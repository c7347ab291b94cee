#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "khier/generators.hpp"
#include "khier/hierarchy.hpp"
#include "khier/reduce.hpp"

namespace khier::cli {

enum ExitCode { kOk = 0, kParse = 2, kStructure = 3, kAmbiguous = 4, kVerifyFail = 5 };
int exit_code(ErrorCode code);

struct AnalysisReport {
  std::string label;
  bool regular = false;
  int k = 0;
  std::vector<int> r;
  std::vector<int> tails;
  std::vector<Rational> alpha_recursion;
  std::vector<Rational> alpha_fm;
  bool alpha_match = false;
  Rational magnitude_gap{1};
  std::vector<DerivedQuadratic> quadratics;
  std::vector<std::string> warnings;

  std::string to_json() const;
  std::string to_text() const;
};

// Runs validate_regular -> tail_indices -> derive_quadratics -> both exponent
// methods -> magnitude_gap. The exit code is kStructure when the system is not
// regular or its tails are invalid.
AnalysisReport analyze(const SdpSystem& sys, int* exit = nullptr);

int cmd_generate(const FamilySpec& spec, const std::string& out_path, std::ostream& out, std::ostream& err);
int cmd_analyze(const std::string& in_path, bool json, std::ostream& out, std::ostream& err);
// Writes the reduced instance to out_path and the certificate to cert_path
// (out_path + ".cert.json" when empty).
int cmd_reduce(const std::string& in_path, const std::string& out_path, const std::string& cert_path,
               const ConeOptions& opt, std::ostream& out, std::ostream& err);
// Writes the per-scale points to out_csv and the verdict summary to stdout
// (or summary_csv when given).
int cmd_verify(const std::string& in_path, const std::vector<Real>& scales, const std::string& out_csv,
               const std::string& summary_csv, double slope_tol, bool parallel, std::ostream& out, std::ostream& err);
int cmd_exponents(const std::string& tails, std::optional<int> k, bool json, std::ostream& out, std::ostream& err);

int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace khier::cli
