#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(BUYK_CLI_PATH) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("buyk_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, AnalyzeCoffee) {
  ASSERT_EQ(run("gen-example coffee -o " + path("coffee.json")).status, 0);
  const CliRun two = run("analyze " + path("coffee.json") + " --k 2");
  EXPECT_EQ(two.status, 0) << two.out;
  EXPECT_NE(two.out.find("buy-2 IC: false"), std::string::npos);
  EXPECT_NE(two.out.find("witness type (4,6): options {1,2} payment 6"), std::string::npos);
  EXPECT_NE(two.out.find("buy-2 revenue: 4"), std::string::npos);
  EXPECT_NE(two.out.find("OptBuy1: 14/3"), std::string::npos);

  const CliRun one = run("analyze " + path("coffee.json"));
  EXPECT_EQ(one.status, 0) << one.out;
  EXPECT_NE(one.out.find("buy-1 IC: true"), std::string::npos);
  EXPECT_NE(one.out.find("holds"), std::string::npos);
}

TEST_F(Cli, MenugapBasis) {
  ASSERT_EQ(run("gen-example basis --n 2 -o " + path("basis2.json")).status, 0);
  const CliRun r = run("menugap " + path("basis2.json") + " --k 2");
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("menugap_2: 2\n"), std::string::npos);
  EXPECT_NE(r.out.find("i=2 gap=1 normalized=1 witness={1,1}"), std::string::npos);
  EXPECT_EQ(run("menugap " + path("basis2.json") + " --k 2 --prune").status, 0);
}

TEST_F(Cli, GenLowerboundPassesAnalyze) {
  const CliRun r = run("gen-lowerbound --n 9 --k 2 --method ks --q 3 --m 2 -o " + path("lb"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("verdict: all bounds hold"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "lb" / "instance.json"));
  EXPECT_TRUE(fs::exists(dir_ / "lb" / "report.txt"));
  const CliRun a = run("analyze " + path("lb/menu.json") + " --k 2");
  EXPECT_EQ(a.status, 0) << a.out;
  EXPECT_NE(a.out.find("buy-2 IC: true"), std::string::npos);

  const CliRun g = run("gen-lowerbound --n 3 --k 1 -o " + path("g"));
  EXPECT_EQ(g.status, 0) << g.out;
  EXPECT_NE(g.out.find("ratio: 256/91"), std::string::npos);
  EXPECT_EQ(run("analyze " + path("g/menu.json")).status, 0);
}

TEST_F(Cli, ReproducibleOutput) {
  ASSERT_EQ(run("gen-example srev-gap --n 4 -o " + path("s.json")).status, 0);
  const CliRun first = run("analyze " + path("s.json") + " --k 4");
  const CliRun second = run("analyze " + path("s.json") + " --k 4");
  EXPECT_EQ(first.status, 0) << first.out;
  EXPECT_EQ(first.out, second.out);
  // re-serializing our own file is the identity
  ASSERT_EQ(run("gen-example srev-gap --n 4 -o " + path("t.json")).status, 0);
  EXPECT_EQ(slurp(path("s.json")), slurp(path("t.json")));
}

TEST_F(Cli, ReportKeepsInputOrder) {
  ASSERT_EQ(run("gen-example coffee -o " + path("a.json")).status, 0);
  ASSERT_EQ(run("gen-example srev-gap --n 3 -o " + path("b.json")).status, 0);
  ASSERT_EQ(run("gen-example basis --n 2 -o " + path("c.json")).status, 0);
  const CliRun r = run("report " + path("b.json") + " " + path("a.json") + " " + path("c.json") + " --k 1 --csv " +
                    path("out.csv"));
  EXPECT_EQ(r.status, 0) << r.out;
  const std::string csv = slurp(path("out.csv"));
  const auto b = csv.find(path("b.json"));
  const auto a = csv.find(path("a.json"));
  const auto c = csv.find(path("c.json"));
  ASSERT_NE(b, std::string::npos);
  EXPECT_LT(b, a);
  EXPECT_LT(a, c);
  EXPECT_EQ(csv.substr(0, 9), "instance,");
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("frobnicate").status, 2);
  EXPECT_EQ(run("analyze " + path("missing.json")).status, 2);
  {
    std::ofstream bad(path("bad.json"));
    bad << R"({"n": 3, "support": [{"values": ["2","0"], "prob": "1"}]})";
  }
  const CliRun r = run("analyze " + path("bad.json"));
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("/support/0/values"), std::string::npos);
  EXPECT_EQ(run("gen-lowerbound --n 8 --k 2 --method ks -o " + path("x")).status, 2);
  EXPECT_EQ(run("gen-lowerbound --n 13 --k 1 -o " + path("x")).status, 2);
  EXPECT_EQ(run("--help").status, 0);
  {
    // the menu-size bound holds for any menu at k = 1, however it is priced
    std::ofstream over(path("over.json"));
    over << R"({"n": 1, "support": [{"values": ["1"], "prob": "1/2"}, {"values": ["100"], "prob": "1/100"}],
               "menus": [[{"price": "1", "alloc": ["1"]}, {"price": "100", "alloc": ["1"]}]]})";
  }
  const CliRun o = run("analyze " + path("over.json"));
  EXPECT_EQ(o.status, 0) << o.out;
}
