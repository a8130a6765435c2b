#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "artfima/cli.hpp"

using namespace artfima;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "artfima_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Cli, CoeffsExample) {
  const auto r = run({"coeffs", "--d", "0.4", "--lambda", "0", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,value\r");
  const double want[] = {1.0, 0.4, 0.28};
  for (int k = 0; k < 3; ++k) {
    ASSERT_TRUE(std::getline(in, line));
    const auto comma = line.find(',');
    EXPECT_EQ(std::stoi(line.substr(0, comma)), k);
    EXPECT_NEAR(std::stod(line.substr(comma + 1)), want[k], 1e-15);
  }
  EXPECT_FALSE(std::getline(in, line));
}

TEST(Cli, UsageErrors) {
  auto r = run({"bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("coeffs"), std::string::npos);  // usage lists the subcommands
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"coeffs", "--d", "abc"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--no-such-flag", "1"}).code, 2);
  EXPECT_EQ(run({"coeffs", "--kind", "zeta"}).code, 2);
  EXPECT_EQ(run({"critical-values", "--replicates", "10"}).code, 2);
}

TEST(Cli, NumericalFailureIsReportedVerbatim) {
  // lambda = 0 and d > 1/2: no finite variance
  const auto r = run({"acf", "--d", "0.7", "--lambda", "0"});
  EXPECT_EQ(r.code, 2);
  const auto s = run({"simulate", "--d", "0.3", "--lambda", "0", "--n", "1000", "--tol", "1e-300"});
  EXPECT_EQ(s.code, 1);
  EXPECT_NE(s.err.find("truncation cap"), std::string::npos);
}

TEST(Cli, VerifyIdentities) {
  const auto r = run({"verify", "--suite", "identities"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("0 criteria failed"), std::string::npos);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
}

TEST(Cli, ConfigRoundTripAndHash) {
  const auto cfg = scratch("rt.cfg"), out1 = scratch("rt1.csv"), out2 = scratch("rt2.csv");
  ASSERT_EQ(run({"coeffs", "--d", "-0.25", "--lambda", "0.1", "--n", "5", "--phi", "0.5", "--write-config",
                 cfg.string(), "--out", out1.string()})
                .code,
            0);
  const auto text = slurp(cfg);
  EXPECT_NE(text.find("d = -0.25\n"), std::string::npos);
  EXPECT_NE(text.find("phi = 0.5\n"), std::string::npos);
  EXPECT_EQ(io::config_to_text(io::config_from_text(text)), text);

  ASSERT_EQ(run({"coeffs", "--config", cfg.string(), "--out", out2.string()}).code, 0);
  EXPECT_EQ(slurp(out1), slurp(out2));
  const auto j1 = nlohmann::json::parse(slurp(out1.string() + ".json"));
  const auto j2 = nlohmann::json::parse(slurp(out2.string() + ".json"));
  EXPECT_EQ(j1["config_hash"], j2["config_hash"]);
  EXPECT_EQ(j1["config_hash"], io::config_hash(io::config_from_text(text)));

  // flags override the file, and equivalent spellings hash alike
  ASSERT_EQ(run({"coeffs", "--config", cfg.string(), "--d", "-2.5e-1", "--out", out2.string()}).code, 0);
  EXPECT_EQ(nlohmann::json::parse(slurp(out2.string() + ".json"))["config_hash"], j1["config_hash"]);
  ASSERT_EQ(run({"coeffs", "--config", cfg.string(), "--d", "0.2", "--out", out2.string()}).code, 0);
  EXPECT_NE(nlohmann::json::parse(slurp(out2.string() + ".json"))["config_hash"], j1["config_hash"]);

  std::ofstream(scratch("bad.cfg")) << "nonsense = 1\n";
  EXPECT_EQ(run({"coeffs", "--config", scratch("bad.cfg").string()}).code, 2);
}

TEST(Cli, SidecarContents) {
  const auto out = scratch("sim.csv");
  ASSERT_EQ(run({"simulate", "--n", "50", "--paths", "2", "--seed", "9", "--out", out.string()}).code, 0);
  const auto j = nlohmann::json::parse(slurp(out.string() + ".json"));
  EXPECT_EQ(j["version"], io::tool_version);
  EXPECT_EQ(j["subcommand"], "simulate");
  EXPECT_EQ(j["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(j["config"]["seed"], "9");
  EXPECT_TRUE(j.contains("truncation"));
  EXPECT_TRUE(j.contains("tail_bound"));
  EXPECT_FALSE(j["config"].contains("workers"));
}

TEST(Cli, CsvQuoting) {
  EXPECT_EQ(io::csv_field("plain"), "plain");
  EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(io::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(io::csv_field("two\nlines"), "\"two\nlines\"");
  io::CsvTable t({"x", "note"});
  t.add(0.1, "a,b");
  EXPECT_EQ(t.str(), "x,note\r\n0.1,\"a,b\"\r\n");
}

TEST(Cli, DoublesRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.27999999999999997}) {
    const auto s = io::format_double(v);
    EXPECT_EQ(io::parse_double(s), v);
    EXPECT_LE(s.size(), 24u);
  }
}

TEST(Cli, OutputIndependentOfWorkerCount) {
  const std::vector<std::vector<std::string>> cmds = {
      {"simulate", "--n", "200", "--paths", "5", "--seed", "3"},
      {"unit-root", "--n", "300", "--replicates", "1000", "--seed", "4"},
      {"limit-dist", "--replicates", "1000", "--steps", "512", "--seed", "5"},
      {"limit-path", "--points", "8", "--paths", "6", "--seed", "6"},
  };
  for (const auto& c : cmds) {
    std::vector<std::string> outputs;
    for (const char* w : {"1", "3"}) {
      const auto path = scratch(c[0] + "_w" + w + ".csv");
      auto args = c;
      args.insert(args.end(), {"--workers", w, "--out", path.string()});
      ASSERT_EQ(run(args).code, 0) << c[0];
      outputs.push_back(slurp(path));
      outputs.push_back(slurp(path.string() + ".json"));
    }
    EXPECT_EQ(outputs[0], outputs[2]) << c[0];
    EXPECT_EQ(outputs[1], outputs[3]) << c[0];
  }
}
