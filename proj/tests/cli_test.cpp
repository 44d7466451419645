#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using nlohmann::json;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + HOLOSCOPE_CLI + std::string(" ") + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(HOLOSCOPE_TEST_DATA) + "/" + name; }

json run_json(const std::string& args, int expected_code) {
  CliRun r = run(args);
  EXPECT_EQ(r.code, expected_code) << args;
  return json::parse(r.out);
}

double fl(const json& j) { return j["float"].get<double>(); }

}  // namespace

TEST(Cli, ObstructCounterexample) {
  json j = run_json("obstruct " + data("counter.rec") + " --initials 0,1", 10);
  EXPECT_EQ(j["verdict"]["kind"], "ObstructionIrrationalExponent");
  const auto& f = j["singularities"]["factors"];
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f[1]["factor"]["text"], "2*z^2 - 7*z + 2");
  EXPECT_EQ(f[1]["exponent_poly"]["text"], "44*alpha^2 + 88*alpha - 31");
  EXPECT_EQ(f[1]["exponent_poly"]["coeffs"], json::array({"-31", "88", "44"}));
  // 30-digit decimals of -1 - (5/2) sqrt(3/11)
  EXPECT_EQ(f[1]["exponents"][0]["box"]["re"]["decimal"].get<std::string>().substr(0, 20), "-2.30558241966773378");
  EXPECT_EQ(f[1]["exponents"][0]["log_power_bound"], 0);
  EXPECT_EQ(j["sequence"]["head"][5], "9593/7");
}

TEST(Cli, ObstructExitCodes) {
  EXPECT_EQ(run("obstruct " + data("geometric.rec") + " --initials 1").code, 0);
  EXPECT_EQ(run("obstruct " + data("mixed.rec") + " --initials 0,1,13").code, 11);
  EXPECT_EQ(run("obstruct " + data("singular.rec") + " --initials 1").code, 6);
  EXPECT_EQ(run("obstruct " + data("counter.rec") + " --initials 0").code, 2);
  EXPECT_EQ(run("obstruct " + data("counter.rec") + " --initials 0,x").code, 2);
  EXPECT_EQ(run("obstruct " + data("apery.term") + " --initials 0,1").code, 2);
  EXPECT_EQ(run("obstruct " + data("no_such_file.rec") + " --initials 1").code, 1);
  EXPECT_EQ(run("obstruct " + data("counter.rec")).code, 2);  // missing --initials
}

TEST(Cli, AnalyzeTerm) {
  json a = run_json("analyze-term " + data("apery.term"), 0);
  EXPECT_EQ(a["recurrence"]["order"], 2);
  EXPECT_EQ(a["recurrence"]["degree"], 3);
  EXPECT_TRUE(a["sequence"]["all_integers"].get<bool>());
  EXPECT_EQ(a["sequence"]["head"][4], "33001");
  EXPECT_EQ(a["verdict"]["kind"], "ConsistentRationalExponents");
  EXPECT_NEAR(fl(a["fit"]["growth"]["value"]), 33.9705627484771, 1e-3);
  EXPECT_TRUE(a["cross_validation"]["consistent"].get<bool>());

  json b = run_json("analyze-term " + data("binomial.term") + " --nmax 40", 0);
  EXPECT_EQ(b["recurrence"]["order"], 1);
  EXPECT_NEAR(fl(b["fit"]["growth"]["value"]), 2.0, 1e-20);
  EXPECT_EQ(b["verdict"]["kind"], "ConsistentRationalExponents");

  json u = run_json("analyze-term " + data("unbalanced.term"), 3);
  EXPECT_EQ(u["term"]["residual"], "n");
  EXPECT_EQ(u["errors"][0]["stage"], "balance");
  json i = run_json("analyze-term " + data("infinite.term"), 4);
  EXPECT_TRUE(i["term"].contains("recession_direction"));
  json p = run_json("analyze-term " + data("syntax_error.term"), 2);
  EXPECT_EQ(p["errors"][0]["stage"], "parse");
  // order 1 cannot describe the Apery numbers
  json g = run_json("analyze-term " + data("apery.term") + " --max-order 1", 5);
  EXPECT_EQ(g["errors"][0]["stage"], "guess");
  EXPECT_TRUE(g.contains("sequence"));
  EXPECT_TRUE(g.contains("certificates"));
}

TEST(Cli, Fit) {
  json a = run_json("fit " + data("apery.seq"), 0);
  EXPECT_NEAR(fl(a["fit"]["growth"]["value"]), 33.9705627484771, 1e-3);
  json t = run_json("fit " + data("powers2.seq"), 0);
  EXPECT_NEAR(fl(t["fit"]["growth"]["value"]), 2.0, 1e-20);
  EXPECT_NEAR(fl(t["fit"]["theta"]["value"]), 0.0, 1e-15);
  json f = run_json("fit " + data("factorial.seq"), 0);
  EXPECT_EQ(f["fit"]["s_class"]["snapped"], "1");
  EXPECT_FALSE(f["fit"].contains("growth"));
  EXPECT_EQ(run("fit " + data("bad.seq")).code, 2);
  EXPECT_EQ(run("fit " + data("apery.seq") + " --depth 99").code, 2);
}

TEST(Cli, CertifyAndLcmTable) {
  json c = run_json("certify " + data("apery.seq"), 0);
  EXPECT_EQ(c["certificates"]["verdict"], "consistent-with-G-function");
  EXPECT_TRUE(c["certificates"]["holonomic"].get<bool>());
  CliRun csv = run("certify " + data("powers2.seq") + " --format csv --curve height");
  EXPECT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.substr(0, 10), "n,value\n1,");
  json l = run_json("lcm-table --nmax 10", 0);
  EXPECT_EQ(l["table"][3]["L"], "12");
  CliRun lc = run("lcm-table --nmax 4 --format csv");
  EXPECT_EQ(lc.out.substr(0, 8), "n,value\n");
  CliRun text = run("lcm-table --nmax 4 --format text");
  EXPECT_NE(text.out.find("table[3].L = 12"), std::string::npos);
}

TEST(Cli, OutFileAndPrecision) {
  const std::string path = ::testing::TempDir() + "holoscope_cli_out.json";
  EXPECT_EQ(run("lcm-table --nmax 5 --out " + path).code, 0);
  std::ifstream in(path);
  json j = json::parse(in);
  EXPECT_EQ(j["command"], "lcm-table");
  CliRun p = run("lcm-table --nmax 4", "HOLOSCOPE_PRECISION=50");
  json pj = json::parse(p.out);
  // d.ddd...e+00 with 50 significant digits
  EXPECT_EQ(pj["table"][3]["log_L_over_n"]["decimal"].get<std::string>().size(), 50u + 1 + 4);
}

TEST(Cli, Deterministic) {
  for (const std::string& args : {"obstruct " + data("counter.rec") + " --initials 0,1", "analyze-term " + data("apery.term"),
                                 "fit " + data("apery.seq"), "certify " + data("apery.seq"), std::string("lcm-table --nmax 50")}) {
    json a = json::parse(run(args).out), b = json::parse(run(args).out);
    a.erase("timing");
    b.erase("timing");
    EXPECT_EQ(a.dump(), b.dump()) << args;
  }
}
