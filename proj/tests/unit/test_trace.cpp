#include "testkit.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace transfinite;

namespace {

std::string trace_ittm(const Program& p, std::string_view input, const Budget& b) {
  std::ostringstream out;
  TraceWriter w(out, p, b);
  auto r = ittm_run(p, input, b, w.observer());
  w.finish(r);
  return out.str();
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string join(const std::vector<std::string>& ls) {
  std::string s;
  for (const auto& l : ls) s += l + "\n";
  return s;
}

ReplayReport replay(const std::string& s) {
  std::istringstream in(s);
  return replay_trace(in);
}

}  // namespace

TEST(Trace, ShapeOfRecords) {
  auto ls = lines_of(trace_ittm(testkit::load("flipper_then_halt.prog"), "", testkit::budget(2000, 2, 50)));
  ASSERT_GE(ls.size(), 4u);
  EXPECT_EQ(ls.front().rfind(R"({"kind":"header","format":1,)", 0), 0u) << ls.front();
  EXPECT_NE(ls[1].find(R"("role":"initial")"), std::string::npos);
  EXPECT_NE(ls[1].find(R"("tapes")"), std::string::npos);
  EXPECT_NE(ls[2].find(R"("cells")"), std::string::npos) << ls[2];
  EXPECT_EQ(ls.back().rfind(R"({"kind":"result","outcome":"halted")", 0), 0u) << ls.back();
  bool limit = false;
  for (const auto& l : ls)
    if (l.find(R"("role":"limit")") != std::string::npos) {
      limit = true;
      EXPECT_NE(l.find(R"("evidence")"), std::string::npos);
    }
  EXPECT_TRUE(limit);
}

TEST(Trace, ReplaysCorpus) {
  for (const char* f : {"halt.prog", "flipper_then_halt.prog", "two_phase.prog", "flipper.prog", "marcher.prog"}) {
    auto rep = replay(trace_ittm(testkit::load(f), "", testkit::budget(2000, 2, 100)));
    EXPECT_TRUE(rep.ok) << f << ": " << rep.str();
    EXPECT_GT(rep.records, 1u);
  }
  auto rep = replay(trace_ittm(testkit::load("two_phase.prog"), "", testkit::budget(2000, 2, 100)));
  EXPECT_GE(rep.limits_checked, 2u);
  EXPECT_GT(rep.successors_checked, 0u);
}

TEST(Trace, RecordCountMatchesLines) {
  std::ostringstream out;
  Program p = testkit::load("two_phase.prog");
  TraceWriter w(out, p, testkit::budget());
  w.finish(ittm_run(p, "", testkit::budget(), w.observer()));
  EXPECT_EQ(w.records(), lines_of(out.str()).size());
}

TEST(Trace, OtmAndIbssm) {
  Program m = testkit::load("marcher.prog");
  m.family = Family::OTM;
  {
    std::ostringstream out;
    TraceWriter w(out, m, testkit::budget());
    w.finish(otm_run(m, {}, testkit::budget(), w.observer()));
    EXPECT_TRUE(replay(out.str()).ok);
  }
  Program b = parse_program("family ibssm\nregisters 1\nnode 0: const r0 1/10 -> 1\nnode 1: const r0 1/100 -> 0\n");
  std::ostringstream out;
  TraceWriter w(out, b, testkit::budget(), LimitRule::Liminf);
  w.finish(run_liminf(b, {}, testkit::budget(), w.observer()));
  auto rep = replay(out.str());
  EXPECT_TRUE(rep.ok) << rep.str();
  EXPECT_NE(out.str().find(R"("rule":"liminf")"), std::string::npos);
}

TEST(Trace, TamperedSuccessorFails) {
  auto ls = lines_of(trace_ittm(testkit::load("flipper_then_halt.prog"), "", testkit::budget(2000, 2, 50)));
  ASSERT_GE(ls.size(), 4u);
  auto& l = ls[2];
  auto pos = l.find(R"("state":)");
  ASSERT_NE(pos, std::string::npos);
  pos += 8;
  l[pos] = l[pos] == '0' ? '1' : '0';
  auto rep = replay(join(ls));
  EXPECT_FALSE(rep.ok);
  EXPECT_FALSE(rep.failure.empty());
}

TEST(Trace, TamperedResultFails) {
  auto ls = lines_of(trace_ittm(testkit::load("flipper_then_halt.prog"), "", testkit::budget(2000, 2, 50)));
  auto& l = ls.back();
  auto pos = l.find(R"("w + 1")");
  ASSERT_NE(pos, std::string::npos) << l;
  l.replace(pos, 7, R"("w + 2")");
  EXPECT_FALSE(replay(join(ls)).ok);
}

TEST(Trace, Malformed) {
  EXPECT_THROW(replay("not json\n"), SyntaxError);
  EXPECT_THROW(replay(""), SyntaxError);
  EXPECT_THROW(replay(R"({"kind":"snap"})" "\n"), SyntaxError);
}
