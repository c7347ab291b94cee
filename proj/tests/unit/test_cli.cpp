#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "khier/generators.hpp"
#include "khier_cli/commands.hpp"
#include "support/oracles.hpp"

namespace khier {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out, err;
};

CliResult invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "khier");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  int code = cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("khier_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const SdpSystem& s) const {
    write_instance(s, path(name));
    return path(name);
  }
  fs::path dir_;
};

TEST_F(Cli, GenerateRoundTripIsByteIdentical) {
  for (auto args : std::vector<std::vector<std::string>>{{"--family", "khachiyan", "--size", "4"},
                                                         {"--family", "mild", "--size", "4"},
                                                         {"--family", "polyopt", "--coeffs", "1,0,0,0,0,0,1"}}) {
    args.insert(args.begin(), "generate");
    args.push_back("-o");
    args.push_back(path("g.json"));
    ASSERT_EQ(invoke(args).code, 0);
    std::string text = slurp(path("g.json"));
    EXPECT_EQ(to_json(parse_instance(text)) + "\n", text);
  }
  EXPECT_EQ(slurp(path("g.json")), to_json(gen_polyopt({1, 0, 0, 0, 0, 0, 1}).system) + "\n");
}

TEST_F(Cli, GenerateToStdout) {
  CliResult r = invoke({"generate", "--family", "khachiyan", "--size", "4"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, to_json(gen_khachiyan(4)) + "\n");
}

TEST_F(Cli, AnalyzeGoldenValues) {
  CliResult r = invoke({"analyze", "--json", write("kh.json", gen_khachiyan(4))});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["alpha_recursion"], nlohmann::json({"2", "2", "2"}));
  EXPECT_EQ(doc["magnitude_gap"], "8");
  EXPECT_TRUE(doc["alpha_match"].get<bool>());

  r = invoke({"analyze", "--json", write("mild.json", gen_mild(4))});
  doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["alpha_fm"], nlohmann::json({"4/3", "3/2", "2"}));
  EXPECT_EQ(doc["magnitude_gap"], "4");
}

TEST_F(Cli, AnalyzeIsDeterministic) {
  std::string in = write("p.json", gen_perturbed_khachiyan());
  EXPECT_EQ(invoke({"analyze", in}).out, invoke({"analyze", in}).out);
  EXPECT_EQ(invoke({"analyze", "--json", in}).out, invoke({"analyze", "--json", in}).out);
}

TEST_F(Cli, AnalyzeNonRegularSuggestsReduce) {
  CliResult r = invoke({"analyze", "--json", write("s.json", testing::scramble(gen_khachiyan(3), 4))});
  EXPECT_EQ(r.code, 3);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_FALSE(doc["regular"].get<bool>());
  EXPECT_NE(r.out.find("reduce"), std::string::npos);
}

TEST_F(Cli, ParseErrorExitCode) {
  std::ofstream(path("bad.json")) << "{\"n\": 2";
  CliResult r = invoke({"analyze", path("bad.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("PARSE_ERROR", 0), 0u);
  EXPECT_EQ(invoke({"analyze", path("missing.json")}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
}

TEST_F(Cli, ExponentsCommand) {
  CliResult r = invoke({"exponents", "--tails", "3,4,5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "4/3,3/2,2\n");
  EXPECT_EQ(invoke({"exponents", "--tails", "5,5,5"}).out, "2,2,2\n");
  r = invoke({"exponents", "--tails", "2,4,5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("INVALID_TAILS"), std::string::npos);
  EXPECT_EQ(invoke({"exponents", "--tails", "3,x"}).code, 2);
}

TEST_F(Cli, ReduceScrambledKhachiyan) {
  std::string in = write("s.json", testing::scramble(gen_khachiyan(4), 9));
  CliResult r = invoke({"reduce", in, "-o", path("out.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto cert = nlohmann::json::parse(slurp(path("out.json.cert.json")));
  EXPECT_EQ(cert["k"], 4);
  EXPECT_EQ(cert["r"], nlohmann::json({1, 1, 1, 1}));
  EXPECT_EQ(cert["exact_steps"], 4);
  SdpSystem out = read_instance(path("out.json"));
  EXPECT_EQ(validate_regular(out).k, 4);
}

TEST_F(Cli, ReduceAmbiguousExitCode) {
  SdpSystem s;
  s.n = 2;
  s.m = 1;
  SymMatrix<Rational> A(2);
  A.set(0, 0, 1);
  A.set(1, 1, Rational(-1, 1000000000000000LL));
  s.A = {A};
  s.B = SymMatrix<Rational>(2);
  CliResult r = invoke({"reduce", write("amb.json", s), "-o", path("out.json")});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("AMBIGUOUS"), std::string::npos);
}

TEST_F(Cli, VerifyPassAndSummary) {
  CliResult r = invoke({"verify", write("mild.json", gen_mild(4)), "-o", path("pts.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("verdict: PASS"), std::string::npos);
  std::string pts = slurp(path("pts.csv"));
  EXPECT_EQ(pts.substr(0, pts.find('\n')), "scale,x_1,x_2,x_3,x_4");
  // 17 significant digits per float
  std::string row = pts.substr(pts.find('\n') + 1);
  row = row.substr(0, row.find(','));
  EXPECT_EQ(row, "1.0000000000000000e+02");
}

TEST_F(Cli, VerifyMissingFixedTail) {
  SdpSystem s = gen_polyopt({1, 0, 0, 0, 0, 0, 1}).system;
  s.fixed_tail.reset();
  CliResult r = invoke({"verify", write("p.json", s)});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NOT_PARTIALLY_STRICT"), std::string::npos);
}

TEST_F(Cli, VerifyFailExitCode) {
  // slopes near 2 cannot meet a tolerance of zero
  CliResult r = invoke({"verify", write("k.json", gen_khachiyan(3)), "--slope-tol", "0"});
  EXPECT_EQ(r.code, 5);
  EXPECT_NE(r.out.find("verdict: FAIL"), std::string::npos);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(cli::exit_code(ErrorCode::ParseError), 2);
  EXPECT_EQ(cli::exit_code(ErrorCode::InvalidStructure), 3);
  EXPECT_EQ(cli::exit_code(ErrorCode::NumericallyAmbiguous), 4);
  EXPECT_EQ(cli::exit_code(ErrorCode::VerificationFail), 5);
}

}  // namespace
}  // namespace khier
