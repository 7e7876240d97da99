#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "evolflow/json_io.hpp"

namespace evolflow {
namespace {

namespace fs = std::filesystem;
using io::json;

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("evolflow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static Outcome run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

TEST(ParseGrid, Examples) {
  EXPECT_EQ(cli::parse_grid("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(cli::parse_grid("0:0:1"), (std::vector<double>{0.0}));
  const auto g = cli::parse_grid("-2:2:0.1");
  ASSERT_EQ(g.size(), 41u);
  EXPECT_EQ(g.front(), -2.0);
  EXPECT_EQ(g.back(), 2.0);
  EXPECT_NEAR(g[20], 0.0, 1e-15);
}

TEST(ParseGrid, ShortLastIntervalAndOtherForms) {
  EXPECT_EQ(cli::parse_grid("0:1:0.4"), (std::vector<double>{0.0, 0.4, 0.8, 1.0}));
  EXPECT_EQ(cli::parse_grid("2.5"), (std::vector<double>{2.5}));
  EXPECT_EQ(cli::parse_grid("[0, -1, 3.5]"), (std::vector<double>{0.0, -1.0, 3.5}));
}

TEST(ParseGrid, Rejections) {
  for (const char* spec : {"", "1:0:0.1", "0:1:0", "0:1:-1", "0:1", "0:1:a", "[]", "[1, \"x\"]", "nan",
                           "/nonexistent/grid.json", "0:1:0.1:2"}) {
    try {
      cli::parse_grid(spec);
      ADD_FAILURE() << "accepted '" << spec << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::BadGrid) << spec;
    }
  }
}

TEST_F(CliTest, GridFromFile) {
  EXPECT_EQ(cli::parse_grid(write("g.json", "[0.1, 0.2]")), (std::vector<double>{0.1, 0.2}));
}

TEST_F(CliTest, MarkovSemigroupFlipFlop) {
  const auto r = run({"markov-semigroup", "--lambda", "1", "--t", "1"});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["status"], "pass");
  const auto a = io::matrix_from_json(j["samples"][0]["A"]);
  EXPECT_NEAR(a(0, 0).real(), 0.5676676416183064, 1e-15);
  EXPECT_NEAR(a(0, 1).real(), 0.43233235838169365, 1e-15);
  EXPECT_NEAR(j["samples"][0]["det"].get<double>(), 0.1353352832366127, 1e-15);
  EXPECT_NE(r.err.find("markov-semigroup: pass"), std::string::npos);
}

TEST_F(CliTest, MarkovSemigroupNegativeTimeAndCsv) {
  const auto csv = path("semigroup.csv");
  const auto r = run({"markov", "semigroup", "--lambda", "1", "--t", "-1:1:1", "--out", csv});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
  const json j = r.report();
  EXPECT_TRUE(j["samples"][0]["non_markov_range"].get<bool>());
  EXPECT_NEAR(j["samples"][0]["A"]["real"][0][1].get<double>(), -3.194528049465325, 1e-12);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,a1_1,a1_2,a2_1,a2_2,row_sum_defect,det,exp_trace");
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 3);
}

TEST_F(CliTest, MarkovSemigroupSeededIsDeterministic) {
  const std::vector<std::string> args{"markov-semigroup", "--random-states", "4", "--seed", "17", "--t", "0:2:0.5"};
  const auto first = run(args);
  const auto second = run(args);
  EXPECT_EQ(first.code, cli::kPass) << first.err;
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(first.report()["seed"], 17);
  EXPECT_NE(run({"markov-semigroup", "--random-states", "4", "--seed", "18", "--t", "1"}).out, first.out);
  EXPECT_EQ(run({"markov-semigroup", "--random-states", "4", "--t", "1"}).code,
            std::getenv("EVOLFLOW_SEED") ? cli::kPass : cli::kUsage);
}

TEST_F(CliTest, GroupCheckReportsDeterminantDefect) {
  const auto m = write("bad.json", R"({"real": [[0, 1], [1, 3]]})");
  const auto r = run({"group-check", "--group", "sl", "--tol", "1e-9", m});
  EXPECT_EQ(r.code, cli::kFail);
  const json j = r.report();
  EXPECT_EQ(j["status"], "fail");
  EXPECT_NEAR(j["residuals"]["membership"].get<double>(), 2.0, 1e-12);
  EXPECT_EQ(j["report"]["component"], -1);
  EXPECT_EQ(run({"group", "check", "--group", "gl", m}).code, cli::kPass);
}

TEST_F(CliTest, O11ComponentReported) {
  const auto m = write("a4.json", R"({"real": [[-1, 0], [0, 1]]})");
  const auto r = run({"group-check", "--group", "o11", m});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_EQ(r.report()["o11_component"], 4);
}

TEST_F(CliTest, AlgebraCheck) {
  const auto q = write("q.json", R"({"real": [[-2, 2], [2, -2]]})");
  EXPECT_EQ(run({"algebra-check", "--algebra", "rate", q}).code, cli::kPass);
  EXPECT_EQ(run({"algebra-check", "--algebra", "omega0", q}).code, cli::kPass);
  EXPECT_EQ(run({"algebra-check", "--algebra", "so", q}).code, cli::kFail);
}

TEST_F(CliTest, ExpmMissingFileIsUsageError) {
  const auto r = run({"expm", path("missing.json")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("IoError"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kUsage);
  EXPECT_EQ(run({"expm"}).code, cli::kUsage);
  const auto m = write("m.json", R"({"real": [[0, 1], [-1, 0]]})");
  EXPECT_EQ(run({"curve-eval", write("c.json", R"({"variant": "so2"})"), "--t", "1:0:1"}).code, cli::kUsage);
  EXPECT_EQ(run({"expm", write("broken.json", "{oops")}).code, cli::kUsage);
  EXPECT_EQ(run({"group-check", m}).code, cli::kUsage);
  EXPECT_EQ(run({"--help"}).code, cli::kPass);
}

TEST_F(CliTest, ExpmMatrixRoundTrip) {
  const auto m = write("x.json", R"({"real": [[0, 1], [-1, 0]]})");
  const auto r = run({"expm", m, "--t", "0.5"});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
  const json j = r.report();
  const Matrix e = io::matrix_from_json(j["result"]);
  EXPECT_EQ(io::to_json(e), j["result"]);
  // Writing the parsed value back out reproduces the bytes.
  const auto again = write("e.json", j["result"].dump());
  EXPECT_EQ(io::matrix_from_json(io::read_json_file(again)), e);
  EXPECT_NEAR(e(0, 1).real(), std::sin(0.5), 1e-15);
}

TEST_F(CliTest, CurveEvalAndCheck) {
  const auto ff = write("ff.json", R"({"variant": "flip_flop", "lambda": 1})");
  const auto r = run({"curve-eval", ff, "--t", "1", "--derivative"});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_NEAR(r.report()["samples"][0]["A"]["real"][1][1].get<double>(), 0.5676676416183064, 1e-15);

  const auto line = write("line.json", R"({"variant": "exp_line",
      "A0": {"real": [[0, 1], [1, 0]]}, "X": {"real": [[0.2, 1], [-0.5, 0.1]]}})");
  const auto c = run({"curve-check", line, "--check", "ode", "--check", "perfectness"});
  EXPECT_EQ(c.code, cli::kPass) << c.err;
  const json j = c.report();
  EXPECT_TRUE(j["perfectness"]["all_perfect"].get<bool>());
  EXPECT_TRUE(j["perfectness"]["sign_constant"].get<bool>());
  EXPECT_EQ(j["perfectness"]["samples"].size(), 41u);
  EXPECT_EQ(run({"curve-check", line, "--check", "subgroup"}).code, cli::kFail);

  const auto affine = write("affine.json", R"({"variant": "affine_line", "A": {"real": [[1, 2], [0, 1]]}})");
  EXPECT_EQ(run({"curve-check", affine, "--check", "subgroup"}).code, cli::kFail);
}

TEST_F(CliTest, MarkovValidateAndBalance) {
  EXPECT_EQ(run({"markov-validate", write("ok.json", R"({"real": [[-1, 1], [1, -1]]})")}).code, cli::kPass);
  const auto bad = run({"markov-validate", write("bad.json", R"({"real": [[1, -1], [0, 0]]})")});
  EXPECT_EQ(bad.code, cli::kFail);
  EXPECT_EQ(bad.report()["defects"][0]["kind"], "NegativeOffDiagonal");

  const auto cycle = write("cycle.json", R"({"real": [[-1, 1, 0], [0, -1, 1], [1, 0, -1]]})");
  const auto unbalanced = run({"markov-balance", cycle, "--pi", "[0.3333333333333333, 0.3333333333333333, 0.3333333333333334]"});
  EXPECT_EQ(unbalanced.code, cli::kFail);

  const auto bd = write("bd.json", R"({"real": [[-1, 1, 0], [2, -3, 1], [0, 4, -4]]})");
  // pi_1/pi_0 = 1/2, pi_2/pi_1 = 1/4.
  const auto balanced = run({"markov-balance", bd, "--pi", "[0.6153846153846154, 0.3076923076923077, 0.07692307692307693]",
                             "--tol", "1e-12"});
  EXPECT_EQ(balanced.code, cli::kPass) << balanced.out;
  const auto truncated = run({"markov-balance", bd, "--pi", "[0.6153846153846154, 0.3076923076923077, 0.07692307692307693]",
                              "--subset", "1,2", "--tol", "1e-12"});
  EXPECT_EQ(truncated.code, cli::kPass) << truncated.out;
  EXPECT_EQ(truncated.report()["truncated_rate"]["real"][0][0], -1.0);

  const auto small = run({"markov-balance", bd, "--pi", "[0.6153846153846154, 0.3076923076923077, 0.07692307692307693]",
                          "--subset", "1"});
  EXPECT_EQ(small.code, cli::kFail);
  EXPECT_EQ(small.report()["status"], "error");
  EXPECT_EQ(small.report()["error"]["kind"], "SubsetTooSmall");
}

TEST_F(CliTest, FlowOrbitCsv) {
  const auto x = write("x.json", R"({"real": [[0, 1], [1, 0]]})");
  const auto a = write("a.json", R"({"real": [[-1, 0], [0, 1]]})");
  const auto csv = path("orbit.csv");
  const auto r = run({"flow-orbit", "--generator", x, "--base", a, "--group", "o11", "--grid", "-3:3:0.5", "--out", csv});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_EQ(r.report()["samples"], 13);
  std::ifstream in(csv);
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  EXPECT_EQ(header, "t,a1_1,a1_2,a2_1,a2_2,group_residual,det");
  EXPECT_EQ(first.substr(0, 3), "-3,");

  const auto so = run({"flow-orbit", "--generator", x, "--group", "so"});
  EXPECT_EQ(so.code, cli::kFail);
  EXPECT_EQ(so.report()["error"]["kind"], "NotInAlgebra");
}

TEST_F(CliTest, OdeSolveAndMagnus) {
  const auto gen = write("gen.json", R"({"real": [[-1, 1], [1, -1]]})");
  const auto r = run({"ode-solve", "--gen-spec", gen, "--T", "1", "--h", "1e-3"});
  EXPECT_EQ(r.code, cli::kPass) << r.err;
  const json j = r.report();
  EXPECT_LE(j["residuals"]["exp_oracle_error"].get<double>(), 1e-10);
  EXPECT_EQ(j["steps"], 1000);

  const auto cosq = write("cosq.json", R"({"terms": [{"fn": {"kind": "cos"}, "X": {"real": [[-1, 1], [1, -1]]}}]})");
  const auto m = run({"magnus", "--gen-spec", cosq, "--t", "1.5707963267948966"});
  EXPECT_EQ(m.code, cli::kPass) << m.err;
  EXPECT_NEAR(m.report()["result"]["real"][0][0].get<double>(), 0.5676676416183064, 1e-8);

  const auto noncomm = write("nc.json", R"({"terms": [
      {"fn": 1, "X": {"real": [[0, 1], [0, 0]]}},
      {"fn": {"kind": "poly", "coeffs": [0, 1]}, "X": {"real": [[0, 0], [1, 0]]}}]})");
  const auto bad = run({"magnus", "--gen-spec", noncomm});
  EXPECT_EQ(bad.code, cli::kFail);
  EXPECT_EQ(bad.report()["error"]["kind"], "CommutatorTooLarge");
}

}  // namespace
}  // namespace evolflow
