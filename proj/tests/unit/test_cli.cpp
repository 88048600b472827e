#include "testkit.hpp"
#include "tfm/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Out {
  int code;
  std::string out, err;
};

Out cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tfm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream o, e;
  int code = tfm::run_cli(static_cast<int>(argv.size()), argv.data(), o, e);
  return {code, o.str(), e.str()};
}

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tfm_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunHalts) {
  auto r = cli({"run", "--program", testkit::corpus("halt.prog")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("halted at 1"), std::string::npos) << r.out;
}

TEST_F(Cli, RunExitCodes) {
  EXPECT_EQ(cli({"run", "--program", testkit::corpus("flipper.prog")}).code, 2);
  EXPECT_EQ(cli({"run", "--program", testkit::corpus("omega2_halter.prog"), "--budget", "steps=1000,level=1,snaps=50"}).code, 3);
  auto crash = write("crash.prog", "family ibssm\nregisters 2\nnode 0: div r0 r0 r1 -> halt\n");
  EXPECT_EQ(cli({"run", "--program", crash}).code, 4);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(cli({"run"}).code, tfm::kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, tfm::kExitUsage);
  auto r = cli({"run", "--program", path("missing.prog")});
  EXPECT_EQ(r.code, tfm::kExitUsage);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(cli({"run", "--program", testkit::corpus("halt.prog"), "--family", "ibssm"}).code, tfm::kExitUsage);
  EXPECT_EQ(cli({"run", "--program", testkit::corpus("halt.prog"), "--budget", "steps=x"}).code, tfm::kExitUsage);
}

TEST_F(Cli, RunOtmWithMarks) {
  auto prog = write("seek.prog", "family otm\ntapes 1\nhead 0 : 0\nstates a\nstart a\nrule a 0 -> _ R a\n");
  auto r = cli({"run", "--program", prog, "--marks", "w + 2"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("w + 2"), std::string::npos) << r.out;
}

TEST_F(Cli, RunIbssmRules) {
  auto prog = write("alt.prog", "family ibssm\nregisters 1\nnode 0: const r0 1/10 -> 1\nnode 1: const r0 1/100 -> 0\n");
  EXPECT_EQ(cli({"run", "--program", prog, "--rule", "liminf"}).code, 2);
  EXPECT_EQ(cli({"run", "--program", prog, "--rule", "continuity"}).code, 4);
  EXPECT_EQ(cli({"run", "--program", prog, "--rule", "limsup"}).code, tfm::kExitUsage);
}

TEST_F(Cli, TraceThenReplay) {
  auto trace = path("t.jsonl");
  EXPECT_EQ(cli({"run", "--program", testkit::corpus("flipper_then_halt.prog"), "--trace", trace}).code, 0);
  ASSERT_TRUE(fs::exists(trace));
  auto r = cli({"replay", trace});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  std::string text;
  {
    std::ifstream in(trace);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  auto pos = text.rfind("\"w + 1\"");
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, 7, "\"w + 3\"");
  std::ofstream(trace) << text;
  EXPECT_NE(cli({"replay", trace}).code, 0);
}

TEST_F(Cli, CompileWritesIbssm) {
  auto out = path("c.prog");
  EXPECT_EQ(cli({"compile", "--in", testkit::corpus("flipper_then_halt.prog"), "--out", out}).code, 0);
  auto p = transfinite::load_program(out);
  EXPECT_EQ(p.family, transfinite::Family::IBSSM);
  auto r = cli({"compile", "--in", testkit::corpus("halt.prog")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("family ibssm"), std::string::npos);
}

TEST_F(Cli, Bisim) {
  auto report = path("b.jsonl");
  auto r = cli({"bisim", "--program", testkit::corpus("flipper_then_halt.prog"), "--report", report});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_TRUE(fs::exists(report));
  EXPECT_EQ(cli({"bisim", "--program", testkit::corpus("eraser.prog"), "--input", "1"}).code, 3);
}

TEST_F(Cli, Survey) {
  auto out = path("s.jsonl");
  auto r = cli({"survey", "--bound", "40", "--budget", "steps=300,level=1,snaps=20", "--threads", "1", "--out", out});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("w"), std::string::npos) << r.out;
  EXPECT_TRUE(fs::exists(out));
  EXPECT_EQ(cli({"survey", "--delta", "w*2"}).code, tfm::kExitUsage);
}

TEST_F(Cli, Torus) {
  auto map = write("rot.map", "dim 1\nrow 1 | 1/3\n");
  auto r = cli({"torus", "--map", map, "--point", "0", "--alpha", "w + 1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1/3"), std::string::npos) << r.out;
  auto p = cli({"torus", "--map", map, "--point", "0; 1/3", "--probe"});
  EXPECT_EQ(p.code, 0) << p.err;
}

TEST_F(Cli, ConfigFile) {
  auto cfg = write("run.toml", "[run]\nprogram = \"" + testkit::corpus("halt.prog") + "\"\n");
  auto r = cli({"--config", cfg, "run"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(CliExitCode, Mapping) {
  using transfinite::Outcome;
  EXPECT_EQ(tfm::exit_code(Outcome::Halted), 0);
  EXPECT_EQ(tfm::exit_code(Outcome::Looping), 2);
  EXPECT_EQ(tfm::exit_code(Outcome::Unresolved), 3);
  EXPECT_EQ(tfm::exit_code(Outcome::Crashed), 4);
  EXPECT_EQ(tfm::exit_code(Outcome::ContinuityViolation), 4);
}
