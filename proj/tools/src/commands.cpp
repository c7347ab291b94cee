#include "khier_cli/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "khier/verify.hpp"

namespace khier::cli {

using nlohmann::json;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::InvalidStructure:
    case ErrorCode::NotPartiallyStrict: return kStructure;
    case ErrorCode::NumericallyAmbiguous: return kAmbiguous;
    case ErrorCode::ScaleTooSmall:
    case ErrorCode::VerificationFail: return kVerifyFail;
  }
  return kStructure;
}

namespace {

json rationals(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

std::string join(const std::vector<Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s;
}

template <class T>
std::string join_ints(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

json form_json(const LinearForm& f) {
  json coeffs = json::object();
  for (const auto& [i, c] : f.coeffs) coeffs["x_" + std::to_string(i)] = to_string(c);
  return {{"coeffs", coeffs}, {"constant", to_string(f.constant)}, {"start", f.start}};
}

int report_error(const Error& e, std::ostream& err) {
  err << to_string(e.code()) << ": " << e.what() << '\n';
  return exit_code(e.code());
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "malformed integer list \"" + text + "\"");
    }
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

std::vector<Real> parse_real_list(const std::string& text) {
  std::vector<Real> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.emplace_back(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "malformed number \"" + item + "\" in scale list");
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::InvalidStructure, "cannot write " + path);
  f << content;
}

}  // namespace

std::string AnalysisReport::to_json() const {
  json doc;
  doc["label"] = label;
  doc["regular"] = regular;
  doc["k"] = k;
  doc["r"] = r;
  doc["tails"] = tails;
  doc["alpha_recursion"] = rationals(alpha_recursion);
  doc["alpha_fm"] = rationals(alpha_fm);
  doc["alpha_match"] = alpha_match;
  doc["magnitude_gap"] = to_string(magnitude_gap);
  json qs = json::array();
  for (const auto& q : quadratics)
    qs.push_back({{"j", q.j},
                  {"t", q.t},
                  {"kind", to_string(q.kind)},
                  {"beta", to_string(q.beta)},
                  {"pivot", {q.pivot.l1, q.pivot.l2}},
                  {"delta_j", form_json(q.delta_j)},
                  {"delta_j1", form_json(q.delta_j1)},
                  {"delta_t", form_json(q.delta_t)},
                  {"polynomial", q.to_string()}});
  doc["quadratics"] = qs;
  doc["warnings"] = warnings;
  return doc.dump();
}

std::string AnalysisReport::to_text() const {
  std::ostringstream os;
  os << "label: " << label << '\n';
  os << "regular: " << (regular ? "yes" : "no") << '\n';
  if (regular) {
    os << "k: " << k << '\n';
    os << "r: " << join_ints(r) << '\n';
  }
  if (!tails.empty()) os << "tails: " << join_ints(tails) << '\n';
  for (const auto& q : quadratics)
    os << "p_" << q.j << " [" << to_string(q.kind) << ", t=" << q.t << ", pivot (" << q.pivot.l1 << "," << q.pivot.l2
       << ")]: " << q.to_string() << '\n';
  if (!alpha_recursion.empty()) {
    os << "alpha (recursion): " << join(alpha_recursion) << '\n';
    os << "alpha (Fourier-Motzkin): " << join(alpha_fm) << '\n';
    os << "match: " << (alpha_match ? "yes" : "NO") << '\n';
    os << "magnitude gap: x_1 >~ x_k^" << to_string(magnitude_gap) << '\n';
  }
  for (const auto& w : warnings) os << "warning: " << w << '\n';
  return os.str();
}

AnalysisReport analyze(const SdpSystem& sys, int* exit) {
  AnalysisReport rep;
  rep.label = sys.label;
  int code = kOk;
  check_dimensions(sys);
  BlockPartition part = validate_regular(sys);
  rep.k = part.k;
  rep.r = part.r;
  rep.regular = part.k > 0;
  if (!rep.regular) {
    rep.warnings.push_back("not in regular form (k = 0); run `khier reduce` to reformulate");
    if (exit) *exit = kStructure;
    return rep;
  }
  if (part.degenerate())
    rep.warnings.push_back("degenerate partition: r_1 + ... + r_k = n, I_{k+1} is empty");
  if (part.k == 1) {
    rep.warnings.push_back("k = 1: no exponent hierarchy");
    rep.alpha_match = true;
    if (exit) *exit = kOk;
    return rep;
  }
  TailIndexVector tails = tail_indices(sys, part);
  rep.tails = tails.t;
  if (!tails_valid(tails.t, part.k)) {
    rep.warnings.push_back("INVALID_TAILS: some t_{j+1} <= j+1; the sequence is not minimal");
    if (exit) *exit = kStructure;
    return rep;
  }
  rep.quadratics = derive_quadratics(sys, part, tails);
  ExponentHierarchy rec = exponents_recursion(tails.t, part.k);
  ExponentHierarchy fm = exponents_fourier_motzkin(tails.t, part.k);
  rep.alpha_recursion = rec.alpha;
  rep.alpha_fm = fm.alpha;
  rep.alpha_match = rec.alpha == fm.alpha;
  rep.magnitude_gap = magnitude_gap(rec);
  for (const auto& v : bound_violations(rec)) rep.warnings.push_back("bound violated: " + v);
  if (!rep.alpha_match) rep.warnings.push_back("recursion and Fourier-Motzkin disagree");
  if (exit) *exit = code;
  return rep;
}

int cmd_generate(const FamilySpec& spec, const std::string& out_path, std::ostream& out, std::ostream& err) {
  try {
    SdpSystem sys = generate(spec);
    if (out_path.empty() || out_path == "-")
      out << to_json(sys) << '\n';
    else
      write_instance(sys, out_path);
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_analyze(const std::string& in_path, bool as_json, std::ostream& out, std::ostream& err) {
  try {
    SdpSystem sys = read_instance(in_path);
    int code = kOk;
    AnalysisReport rep = analyze(sys, &code);
    out << (as_json ? rep.to_json() + "\n" : rep.to_text());
    return code;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_reduce(const std::string& in_path, const std::string& out_path, const std::string& cert_path,
               const ConeOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    SdpSystem sys = read_instance(in_path);
    ReductionResult res = facial_reduction(sys, opt);
    write_instance(res.system, out_path);
    const std::string cpath = cert_path.empty() ? out_path + ".cert.json" : cert_path;
    write_file(cpath, certificate_to_json(res.certificate) + "\n");
    Real rt = round_trip_error(sys, res.system, res.certificate);
    out << "k: " << res.certificate.k << '\n';
    out << "r: " << join_ints(res.certificate.ranks) << '\n';
    out << "round-trip error: " << to_string(rt, 6) << '\n';
    if (res.certificate.residual_pd_witness)
      out << "witness residual: " << to_string(res.certificate.witness_residual, 6) << '\n';
    if (res.certificate.degenerate) out << "warning: degenerate partition, I_{k+1} is empty\n";
    if (res.certificate.heuristic) out << "note: numerical cone alternative (heuristic); k is not certified minimal\n";
    out << "wrote " << out_path << " and " << cpath << '\n';
    return kOk;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_verify(const std::string& in_path, const std::vector<Real>& scales, const std::string& out_csv,
               const std::string& summary_path, double slope_tol, bool parallel, std::ostream& out, std::ostream& err) {
  try {
    SdpSystem sys = read_instance(in_path);
    BlockPartition part = validate_regular(sys);
    if (part.k < 1) throw Error(ErrorCode::InvalidStructure, "not in regular form; run `khier reduce` first");
    if (part.k < 2) {
      out << "k = 1: no hierarchy to verify (vacuous PASS)\n";
      return kOk;
    }
    TailIndexVector tails = tail_indices(sys, part);
    ExponentHierarchy alpha = exponents_recursion(tails.t, part.k);
    auto quads = derive_quadratics(sys, part, tails);
    ScaleSweep sweep = empirical_exponents(sys, part, scales.empty() ? default_scales() : scales, parallel);
    HierarchyCheck check = check_hierarchy(sweep, alpha, slope_tol);

    std::vector<Rational> tail_vals = part.k < sys.m ? *sys.fixed_tail : std::vector<Rational>{};
    bool quads_positive = true;
    for (const auto& x : sweep.points) {
      std::vector<Real> full = x;
      for (const auto& v : tail_vals) full.push_back(to_real(v));
      for (const auto& q : quads)
        if (!(q.evaluate(full) > 0)) quads_positive = false;
    }
    if (!out_csv.empty()) write_file(out_csv, points_csv(sweep));
    std::string summary = summary_csv(check);
    if (summary_path.empty())
      out << summary;
    else
      write_file(summary_path, summary);
    out << "quadratics positive at all points: " << (quads_positive ? "yes" : "NO") << '\n';
    bool pass = check.pass && quads_positive;
    out << "verdict: " << (pass ? "PASS" : "FAIL") << '\n';
    return pass ? kOk : kVerifyFail;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int cmd_exponents(const std::string& tails_text, std::optional<int> k, bool as_json, std::ostream& out,
                  std::ostream& err) {
  try {
    std::vector<int> tails = parse_int_list(tails_text);
    int kk = k ? *k : int(tails.size()) + 1;
    ExponentHierarchy rec = exponents_recursion(tails, kk);
    ExponentHierarchy fm = exponents_fourier_motzkin(tails, kk);
    if (as_json) {
      json doc{{"alpha", rationals(rec.alpha)},
               {"method", to_string(rec.method)},
               {"fourier_motzkin_match", rec.alpha == fm.alpha},
               {"magnitude_gap", to_string(magnitude_gap(rec))}};
      out << doc.dump() << '\n';
    } else {
      out << join(rec.alpha) << '\n';
    }
    return rec.alpha == fm.alpha ? kOk : kVerifyFail;
  } catch (const Error& e) {
    return report_error(e, err);
  }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exponential variable hierarchies in SDP feasibility systems"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "write an instance of a generator family");
  std::string family, coeffs, gen_out;
  int size = 4;
  gen->add_option("--family", family, "khachiyan|exact_khachiyan|mild|perturbed|polyopt|odonnell")->required();
  gen->add_option("--size", size, "m, k or n depending on the family");
  gen->add_option("--coeffs", coeffs, "polyopt coefficients a_0,...,a_2n");
  gen->add_option("-o,--out", gen_out, "output path (stdout when omitted)");

  auto* ana = app.add_subcommand("analyze", "tail indices, quadratics and exponent hierarchy");
  std::string ana_in;
  bool ana_json = false;
  ana->add_option("input", ana_in)->required();
  ana->add_flag("--json", ana_json);

  auto* red = app.add_subcommand("reduce", "facial reduction to regular form");
  std::string red_in, red_out, red_cert;
  double rank_tol = 1e-8;
  red->add_option("input", red_in)->required();
  red->add_option("-o,--out", red_out)->required();
  red->add_option("--cert", red_cert, "certificate path (default <out>.cert.json)");
  red->add_option("--tol", rank_tol, "eigenvalue-ratio rank cut");

  auto* ver = app.add_subcommand("verify", "scale sweep against the predicted hierarchy");
  std::string ver_in, ver_csv, ver_summary, ver_scales;
  double slope_tol = 0.05;
  bool parallel = false;
  ver->add_option("input", ver_in)->required();
  ver->add_option("--scales", ver_scales, "comma-separated x_k magnitudes (default 1e2..1e5, 7 points)");
  ver->add_option("-o,--out", ver_csv, "points CSV");
  ver->add_option("--summary", ver_summary, "summary CSV (stdout when omitted)");
  ver->add_option("--slope-tol", slope_tol);
  ver->add_flag("--parallel", parallel);

  auto* exps = app.add_subcommand("exponents", "exponent hierarchy from tail indices");
  std::string tails;
  std::optional<int> k;
  bool exp_json = false;
  exps->add_option("--tails", tails, "t_2,...,t_k")->required();
  exps->add_option("--k", k);
  exps->add_flag("--json", exp_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kParse;
  }

  try {
    if (*gen) {
      FamilySpec spec;
      spec.family = parse_family(family);
      spec.size = size;
      if (!coeffs.empty()) spec.coeffs = parse_rational_list(coeffs);
      return cmd_generate(spec, gen_out, out, err);
    }
    if (*ana) return cmd_analyze(ana_in, ana_json, out, err);
    if (*red) {
      ConeOptions opt;
      opt.rank_tol = Real(rank_tol);
      return cmd_reduce(red_in, red_out, red_cert, opt, out, err);
    }
    if (*ver) {
      std::vector<Real> scales = ver_scales.empty() ? std::vector<Real>{} : parse_real_list(ver_scales);
      return cmd_verify(ver_in, scales, ver_csv, ver_summary, slope_tol, parallel, out, err);
    }
    if (*exps) return cmd_exponents(tails, k, exp_json, out, err);
  } catch (const Error& e) {
    return report_error(e, err);
  }
  return kParse;
}

}  // namespace khier::cli
