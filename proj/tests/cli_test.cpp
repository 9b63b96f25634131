#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Run {
  int exit = -1;
  std::string out;
};

// Runs the binary with stderr folded into a file next to the inputs.
Run run(const std::string& args) {
  const std::string cmd = std::string(SMALLSET_BIN) + " " + args + " 2>" + SMALLSET_TEST_DIR + "/stderr.txt";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string stderr_text() {
  std::ifstream in(std::string(SMALLSET_TEST_DIR) + "/stderr.txt");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string write(const std::string& name, const std::string& text) {
  fs::create_directories(SMALLSET_TEST_DIR);
  const std::string path = std::string(SMALLSET_TEST_DIR) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

nlohmann::json parse(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, Weight) {
  const auto p = write("two.json", R"({"entries":[{"block":[0,1],"words":["00","11"]},{"block":[2],"words":["1"]}]})");
  const auto r = run("weight " + p);
  EXPECT_EQ(r.exit, 0);
  const auto j = parse(r);
  EXPECT_EQ(j["weight"], "1");
  EXPECT_EQ(j["exit"], 0);
  EXPECT_TRUE(j["inputs"].contains(p));
}

TEST(Cli, SubsetNoWithWitness) {
  const auto a = write("a.json", R"({"entries":[{"block":[0],"words":["1"]}]})");
  const auto b = write("b.json", R"({"entries":[{"block":[0,1],"words":["10"]}]})");
  const auto r = run("subset " + a + " " + b + " --oracle 4 --trunc 4");
  EXPECT_EQ(r.exit, 1);
  const auto j = parse(r);
  EXPECT_EQ(j["contained"], false);
  EXPECT_EQ(j["witness"], "1100");
  EXPECT_EQ(j["oracle"]["counterexample"], "1100");
}

TEST(Cli, ErrorsExitTwo) {
  const auto bad = write("bad.json", "{not json");
  const auto r = run("weight " + bad);
  EXPECT_EQ(r.exit, 2);
  EXPECT_EQ(stderr_text().rfind("smallset: ", 0), 0U);
  EXPECT_TRUE(parse(r).contains("error"));
  EXPECT_EQ(run("no-such-command").exit, 2);
}

TEST(Cli, HittingIsDeterministic) {
  const auto first = run("hitting sample --n 5 --eps 3/8 --seed 11");
  const auto second = run("hitting sample --n 5 --eps 3/8 --seed 11");
  EXPECT_EQ(first.exit, 0);
  EXPECT_EQ(first.out, second.out);
  const auto p = write("cand.json", parse(first)["candidate"].dump());
  const auto v = run("hitting verify " + p + " --naive");
  EXPECT_TRUE(v.exit == 0 || v.exit == 1);
  EXPECT_FALSE(parse(v).contains("error"));
}

TEST(Cli, Defined) {
  const auto r = run("hitting defined 140");
  EXPECT_EQ(r.exit, 0);
  EXPECT_EQ(parse(r)["check"]["defined"], true);
  EXPECT_EQ(run("hitting defined 2").exit, 1);
}

TEST(Cli, DecomposeWithOracle) {
  const auto f = write("f.json", R"({"families":[[],[],["11"],[],[],["00000"]]})");
  const auto r = run("decompose " + f + " --oracle 8");
  EXPECT_EQ(r.exit, 0);
  const auto j = parse(r);
  EXPECT_EQ(j["bounds_hold"], true);
  EXPECT_EQ(j["oracle"]["holds"], true);
}

TEST(Cli, IntervalReport) {
  const auto r = run("cex report --nmax 500");
  EXPECT_EQ(r.exit, 0);
  EXPECT_FALSE(parse(r).contains("error"));
}

TEST(Cli, OutFileMatchesStdout) {
  const std::string out = std::string(SMALLSET_TEST_DIR) + "/sample.json";
  const auto direct = run("hitting sample --n 5 --eps 1/2 --seed 3");
  run("--out " + out + " hitting sample --n 5 --eps 1/2 --seed 3");
  std::ifstream in(out);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  // the command string differs by the --out argument only
  auto a = nlohmann::json::parse(direct.out);
  auto b = nlohmann::json::parse(text);
  a.erase("command");
  b.erase("command");
  EXPECT_EQ(a, b);
}
