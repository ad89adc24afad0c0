#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct CliRun {
  std::string out;
  int code = -1;
};

// feeds the job through a temp file so the shell never sees the JSON
CliRun run_cli(const std::string& job, const std::string& flags = "", const std::string& env = "") {
  static int counter = 0;
  const std::string path = testing::TempDir() + "cli_job_" + std::to_string(++counter) + ".json";
  std::ofstream(path) << job;
  const std::string cmd = env + " '" + GIESEKER_CLI_PATH + "' --input '" + path + "' " + flags + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::remove(path.c_str());
  return r;
}

nlohmann::json parse(const CliRun& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, StrataRankOne) {
  const CliRun r = run_cli(R"({"command":"strata","params":{"r":1}})");
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_EQ(j["status"], "ok");
  EXPECT_EQ(j["result"]["count"], 3);
}

TEST(Cli, StrataRankTwoCount) {
  const auto j = parse(run_cli(R"({"command":"strata","params":{"r":2}})"));
  EXPECT_EQ(j["result"]["count"], 8);
}

TEST(Cli, RoundtripPasses) {
  const CliRun r = run_cli(R"({"command":"roundtrip","p":7,"params":{"r":3,"block_sizes":[1,2]}})");
  ASSERT_EQ(r.code, 0);
  const auto j = parse(r);
  EXPECT_TRUE(j["result"]["passed"].get<bool>());
  EXPECT_EQ(j["result"]["e"], 2);
}

TEST(Cli, RoundtripWithGroupOrderOverride) {
  const auto j = parse(run_cli(R"({"command":"roundtrip","p":7,"params":{"r":3,"block_sizes":[1,2],"e":3}})"));
  EXPECT_EQ(j["result"]["e"], 3);
  EXPECT_TRUE(j["result"]["passed"].get<bool>());
}

TEST(Cli, InverseFeedsForward) {
  const auto inv = parse(run_cli(R"({"command":"inverse","p":7,"params":{"r":3,"block_sizes":[1,2]}})"));
  const nlohmann::json job = {{"command", "forward"}, {"p", 7}, {"params", inv["result"]["germ"]}};
  const CliRun r = run_cli(job.dump());
  ASSERT_EQ(r.code, 0) << r.out;
  const auto j = parse(r);
  EXPECT_EQ(j["result"]["datum"]["partition"]["block_sizes"], nlohmann::json::array({1, 2}));
  // sorting permutation is reported 1-based
  EXPECT_EQ(j["result"]["datum"]["perm"], nlohmann::json::array({1, 2, 3}));
}

TEST(Cli, MissingFieldReportsPath) {
  const CliRun r = run_cli(R"({"command":"forward","params":{"e":2}})");
  EXPECT_EQ(r.code, 2);
  const auto j = parse(r);
  EXPECT_EQ(j["status"], "error");
  EXPECT_EQ(j["error"]["path"], "/params/F");
}

TEST(Cli, BadJsonIsInputError) {
  const CliRun r = run_cli("{");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(parse(r)["status"], "error");
}

TEST(Cli, UnknownCommand) {
  const CliRun r = run_cli(R"({"command":"frobnicate"})");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(parse(r)["error"]["path"], "/command");
}

TEST(Cli, RejectsComposite) {
  const CliRun r = run_cli(R"({"command":"strata","p":12,"params":{"r":1}})");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(parse(r)["error"]["path"], "/p");
}

TEST(Cli, PrimePrecedence) {
  const std::string job = R"({"command":"strata","params":{"r":1}})";
  EXPECT_EQ(parse(run_cli(job))["defaults"]["p"], 13);
  EXPECT_EQ(parse(run_cli(job, "", "GT_DEFAULT_PRIME=11"))["defaults"]["p"], 11);
  const std::string with_p = R"({"command":"strata","p":7,"params":{"r":1}})";
  EXPECT_EQ(parse(run_cli(with_p, "", "GT_DEFAULT_PRIME=11"))["defaults"]["p"], 7);
  EXPECT_EQ(parse(run_cli(with_p, "--prime 5", "GT_DEFAULT_PRIME=11"))["defaults"]["p"], 5);
  EXPECT_EQ(run_cli(job, "", "GT_DEFAULT_PRIME=abc").code, 2);
}

TEST(Cli, InvarianceIsDeterministic) {
  const std::string job = R"({"command":"invariance","seed":9,"params":{"trials":4,"r":3}})";
  const CliRun a = run_cli(job), b = run_cli(job);
  ASSERT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, run_cli(job, "--seed 10").out);
  const auto j = parse(a);
  EXPECT_EQ(j["result"]["trials"].size(), 4u);
  EXPECT_EQ(j["result"]["trials"][0]["seed"], 9);
}

TEST(Cli, AdmissibleCanonicalChain) {
  const auto j = parse(run_cli(R"({"command":"admissible","params":{"r":4,"block_sizes":[0,2,2]}})"));
  EXPECT_TRUE(j["result"]["admissible"].get<bool>());
  EXPECT_EQ(j["result"]["component_degrees"], nlohmann::json::array({2, 2}));
}

TEST(Cli, Version) {
  CliRun r;
  FILE* pipe = popen((std::string("'") + GIESEKER_CLI_PATH + "' --version").c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::array<char, 256> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  EXPECT_EQ(WEXITSTATUS(pclose(pipe)), 0);
  EXPECT_FALSE(r.out.empty());
}
