#include "testkit.hpp"

#include <gtest/gtest.h>

using namespace transfinite;
using testkit::limit_mismatch;
using testkit::successor_history;

namespace {

const char* kTwoHeadStill = R"(family ittm
tapes 2
head 0 : 0
head 1 : 1
states a b c
start a
rule a ** -> __ SS b
rule b ** -> __ SS c
rule c ** -> __ SS halt
)";

// head 0 marches right writing 1s; head 1 flips its cell
const char* kTwoHeadDrift = R"(family ittm
tapes 2
head 0 : 0
head 1 : 1
states a
start a
rule a *0 -> 11 RS a
rule a *1 -> 10 RS a
)";

std::map<Ordinal, Snapshot> limits_of(const Program& p, std::string_view input, const Budget& b, RunResult* out) {
  std::map<Ordinal, Snapshot> lim;
  auto r = ittm_run(p, input, b, [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
    if (role == SnapshotRole::Limit) lim.emplace(s.time, s);
  });
  if (out) *out = r;
  return lim;
}

}  // namespace

TEST(IttmStep, WritesMovesAndState) {
  Program p = parse_program("family ittm\ntapes 3\nhead 0 : 0 1 2\nstates q0 q1\nstart q0\n"
                            "rule q0 000 -> 010 R q1\n");
  StepOutcome o = ittm_step(ittm_initial(p, ""), p);
  EXPECT_EQ(o.status, StepStatus::Continue);
  EXPECT_EQ(o.snapshot.time, Ordinal(1));
  EXPECT_EQ(o.snapshot.state, 1u);
  EXPECT_EQ(o.snapshot.heads[0], CellAddr({}, 1));
  EXPECT_EQ(o.snapshot.tapes[1].get(CellAddr({}, 0)), 1);
  EXPECT_EQ(o.snapshot.tapes[0].ones(), 0u);
  // no rule for q1 000: implicit halt, unchanged snapshot
  StepOutcome h = ittm_step(o.snapshot, p);
  EXPECT_TRUE(h.halted());
  EXPECT_EQ(h.status, StepStatus::HaltImplicit);
  EXPECT_EQ(h.snapshot, o.snapshot);
}

TEST(IttmStep, LeftAtZeroStays) {
  Program p = parse_program("family ittm\ntapes 1\nhead 0 : 0\nstates a\nstart a\nrule a * -> _ L a\n");
  StepOutcome o = ittm_step(ittm_initial(p, ""), p);
  EXPECT_EQ(o.snapshot.heads[0], CellAddr{});
}

TEST(IttmStep, TwoHeadsMoveIndependently) {
  Program p = parse_program("family ittm\ntapes 2\nhead 0 : 0\nhead 1 : 1\nstates a\nstart a\nrule a ** -> 11 RS a\n");
  StepOutcome o = ittm_step(ittm_initial(p, ""), p);
  EXPECT_EQ(o.snapshot.heads[0], CellAddr({}, 1));
  EXPECT_EQ(o.snapshot.heads[1], CellAddr({}, 0));
  EXPECT_EQ(o.snapshot.tapes[0].ones(), 1u);
  EXPECT_EQ(o.snapshot.tapes[1].ones(), 1u);
}

TEST(IttmStep, RejectsOtherFamilies) {
  Program p = testkit::load("halt.prog");
  p.family = Family::OTM;
  EXPECT_THROW(ittm_step(tm_initial(p, {}), p), PreconditionError);
}

TEST(IttmInput, BitsOnTapeZero) {
  EXPECT_EQ(parse_bit_input("0110").size(), 2u);
  EXPECT_THROW(parse_bit_input("01a"), SyntaxError);
  Program p = testkit::load("copy_input.prog");
  Snapshot s = ittm_initial(p, "101");
  EXPECT_EQ(s.tapes[0].get(CellAddr({}, 0)), 1);
  EXPECT_EQ(s.tapes[0].get(CellAddr({}, 1)), 0);
  EXPECT_EQ(s.tapes[0].get(CellAddr({}, 2)), 1);
}

TEST(IttmRun, ImmediateHalt) {
  auto r = ittm_run(testkit::load("halt.prog"), "", testkit::budget());
  EXPECT_EQ(r.outcome, Outcome::Halted);
  EXPECT_EQ(r.time, Ordinal(1));
}

TEST(IttmRun, CorpusOutcomes) {
  struct Case {
    const char* file;
    const char* input;
    Outcome outcome;
    const char* time;
  };
  for (const Case& c : {Case{"flipper_then_halt.prog", "", Outcome::Halted, "w + 1"},
                        Case{"two_phase.prog", "", Outcome::Halted, "w*2"},
                        Case{"omega2_halter.prog", "", Outcome::Halted, "w^2 + 1"},
                        Case{"flipper.prog", "", Outcome::Looping, "w"},
                        Case{"marcher.prog", "", Outcome::Halted, "w + 1"},
                        Case{"marcher3.prog", "", Outcome::Halted, "w + 1"},
                        Case{"write_c5.prog", "", Outcome::Halted, "6"},
                        Case{"copy_input.prog", "1", Outcome::Halted, "2"},
                        Case{"walker3.prog", "", Outcome::Halted, "3"},
                        Case{"toggle_pair.prog", "", Outcome::Looping, "w"},
                        Case{"bounded_marcher.prog", "", Outcome::Looping, "w"},
                        Case{"eraser.prog", "1", Outcome::Looping, "w^2"}}) {
    auto r = ittm_run(testkit::load(c.file), c.input, testkit::budget());
    EXPECT_EQ(r.outcome, c.outcome) << c.file << ": " << r.str();
    EXPECT_EQ(r.time.str(), c.time) << c.file << ": " << r.str();
  }
}

TEST(IttmRun, FlipperThenHaltAgainstSuccessorSimulation) {
  Program p = testkit::load("flipper_then_halt.prog");
  RunResult r;
  auto lim = limits_of(p, "", testkit::budget(), &r);
  ASSERT_EQ(r.time, Ordinal::parse("w + 1"));
  ASSERT_TRUE(lim.count(Ordinal::omega()));
  auto h = successor_history(p, tm_initial(p, {}), 10000);
  ASSERT_EQ(h.size(), 10001u);
  auto rules = LimitRuleSet::of(p, Ordinal::omega());
  auto oracle = brute_liminf_oracle(h, 2, p.heads, rules);
  EXPECT_EQ(limit_mismatch(lim.at(Ordinal::omega()), oracle), "");
  Snapshot s = oracle.snapshot;
  EXPECT_EQ(tm_step(s, p), StepStatus::HaltExplicit);
  EXPECT_EQ(s.time, r.time);
}

TEST(IttmRun, TwoPhaseHaltsAtOmegaTwo) {
  Program p = testkit::load("two_phase.prog");
  RunResult r;
  auto lim = limits_of(p, "", testkit::budget(), &r);
  EXPECT_EQ(r.time, Ordinal::parse("w*2"));
  ASSERT_TRUE(lim.count(Ordinal::omega()));
  // second approach from the first limit, simulated directly
  auto h = successor_history(p, lim.at(Ordinal::omega()), 10000);
  ASSERT_EQ(h.size(), 10001u);
  auto oracle = brute_liminf_oracle(h, 2, p.heads, LimitRuleSet::of(p, Ordinal::parse("w*2")));
  Snapshot s = oracle.snapshot;
  EXPECT_EQ(tm_step(s, p), StepStatus::HaltImplicit);
  EXPECT_TRUE(s.same_configuration(r.final));
}

TEST(IttmRun, DeterministicAndAbsolute) {
  Program p = testkit::load("omega2_halter.prog");
  auto a = ittm_run(p, "", testkit::budget(10000, 2, 200));
  auto b = ittm_run(p, "", testkit::budget(10000, 2, 200));
  auto c = ittm_run(p, "", testkit::budget(50000, 3, 1000));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.outcome, Outcome::Halted);
  EXPECT_EQ(c.time, a.time);
  EXPECT_TRUE(c.final.same_configuration(a.final));
}

TEST(IttmRun, LiminfStarDichotomy) {
  for (const char* f : {"marcher.prog", "bounded_marcher.prog", "flipper.prog", "marcher3.prog"}) {
    Program p = testkit::load(f);
    std::vector<Snapshot> hist;
    ittm_run(p, "", testkit::budget(), [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
      if (role != SnapshotRole::Limit) {
        hist.push_back(s);
        return;
      }
      std::uint64_t lo = UINT64_MAX;
      for (std::size_t k = hist.size() / 2; k < hist.size(); ++k) lo = std::min(lo, hist[k].heads[0].offset);
      EXPECT_TRUE(s.heads[0].offset == 0 || s.heads[0].offset == lo) << f;
      hist.clear();
    });
  }
}

TEST(Multihead, StillHeadsHaltAtThree) {
  auto r = ittm_multihead_demo(parse_program(kTwoHeadStill), testkit::budget());
  EXPECT_EQ(r.outcome, Outcome::Halted);
  EXPECT_EQ(r.time, Ordinal(3));
}

TEST(Multihead, DriftAndFlipAtOmega) {
  Program p = parse_program(kTwoHeadDrift);
  std::optional<Snapshot> at_w;
  ittm_multihead_demo(p, testkit::budget(), [&](const Snapshot& s, SnapshotRole role, const CycleEvidence*) {
    if (role == SnapshotRole::Limit && s.time == Ordinal::omega()) at_w = s;
  });
  ASSERT_TRUE(at_w);
  EXPECT_EQ(at_w->heads[0], CellAddr{});
  EXPECT_EQ(at_w->heads[1], CellAddr{});
  EXPECT_EQ(at_w->tapes[1].get(CellAddr({}, 0)), 0);
  auto h = successor_history(p, tm_initial(p, {}), 2000);
  EXPECT_EQ(limit_mismatch(*at_w, brute_liminf_oracle(h, 2, p.heads, LimitRuleSet::of(p, Ordinal::omega()))), "");
}

TEST(Multihead, SingleHeadRejected) {
  EXPECT_THROW(ittm_multihead_demo(testkit::load("halt.prog"), testkit::budget()), PreconditionError);
}
