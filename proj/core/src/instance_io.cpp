#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "khier/instance.hpp"

namespace khier {

using nlohmann::json;

namespace {

json triplets(const SymMatrix<Rational>& M) {
  json out = json::array();
  for (int i = 0; i < M.n(); ++i)
    for (int j = i; j < M.n(); ++j)
      if (M(i, j) != 0) out.push_back(json::array({i + 1, j + 1, to_string(M(i, j))}));
  return out;
}

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
  throw Error(ErrorCode::ParseError, field + ": " + msg);
}

Rational scalar(const json& v, const std::string& field) {
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const Error& e) {
      fail(field, e.what());
    }
  }
  if (v.is_number_integer()) return Rational(v.get<long long>());
  fail(field, "expected a rational string \"p/q\" or an integer");
}

SymMatrix<Rational> read_triplets(const json& v, int n, const std::string& field) {
  if (!v.is_array()) fail(field, "expected an array of [row, col, value] triplets");
  SymMatrix<Rational> M(n);
  std::map<std::pair<int, int>, bool> seen;
  for (std::size_t e = 0; e < v.size(); ++e) {
    const std::string where = field + "[" + std::to_string(e) + "]";
    const json& t = v[e];
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() || !t[1].is_number_integer())
      fail(where, "expected [row, col, value]");
    int i = t[0].get<int>(), j = t[1].get<int>();
    if (i < 1 || j < 1 || i > n || j > n) fail(where, "index out of range 1.." + std::to_string(n));
    if (i > j) fail(where, "triplets must be upper triangle (row <= col)");
    if (seen[{i, j}]) fail(where, "duplicate entry");
    seen[{i, j}] = true;
    M.set(i - 1, j - 1, scalar(t[2], where));
  }
  return M;
}

int positive_int(const json& doc, const char* key) {
  if (!doc.contains(key)) fail(key, "missing");
  const json& v = doc[key];
  if (!v.is_number_integer() || v.get<long long>() < 1) fail(key, "expected a positive integer");
  return v.get<int>();
}

}  // namespace

std::string to_json(const SdpSystem& sys) {
  json doc;
  doc["n"] = sys.n;
  doc["m"] = sys.m;
  doc["label"] = sys.label;
  json A = json::array();
  for (const auto& a : sys.A) A.push_back(triplets(a));
  doc["A"] = A;
  doc["B"] = triplets(sys.B);
  if (sys.fixed_tail) {
    json ft = json::array();
    for (const auto& v : *sys.fixed_tail) ft.push_back(to_string(v));
    doc["fixed_tail"] = ft;
  }
  return doc.dump();
}

SdpSystem parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("instance", "expected a JSON object");
  SdpSystem sys;
  sys.n = positive_int(doc, "n");
  sys.m = positive_int(doc, "m");
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) fail("label", "expected a string");
    sys.label = doc["label"].get<std::string>();
  }
  if (!doc.contains("A") || !doc["A"].is_array()) fail("A", "expected an array of m triplet lists");
  if (int(doc["A"].size()) != sys.m)
    fail("A", "has " + std::to_string(doc["A"].size()) + " matrices, m = " + std::to_string(sys.m));
  for (int i = 0; i < sys.m; ++i) sys.A.push_back(read_triplets(doc["A"][i], sys.n, "A[" + std::to_string(i) + "]"));
  if (!doc.contains("B")) fail("B", "missing");
  sys.B = read_triplets(doc["B"], sys.n, "B");
  if (doc.contains("fixed_tail") && !doc["fixed_tail"].is_null()) {
    const json& ft = doc["fixed_tail"];
    if (!ft.is_array()) fail("fixed_tail", "expected an array of rationals");
    std::vector<Rational> vals;
    for (std::size_t i = 0; i < ft.size(); ++i) vals.push_back(scalar(ft[i], "fixed_tail[" + std::to_string(i) + "]"));
    if (int(vals.size()) > sys.m) fail("fixed_tail", "longer than m");
    sys.fixed_tail = std::move(vals);
  }
  return sys;
}

SdpSystem read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

void write_instance(const SdpSystem& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidStructure, "cannot write " + path);
  out << to_json(sys) << '\n';
}

}  // namespace khier
