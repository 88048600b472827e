#include "testkit.hpp"

#include <gtest/gtest.h>

using namespace transfinite;

namespace {

Program otm(const char* body) { return parse_program(std::string("family otm\n") + body); }

Snapshot at(const Program& p, const Ordinal& pos) {
  Snapshot s = tm_initial(p, {});
  s.heads[0] = CellAddr::from_ordinal(pos);
  return s;
}

// walks right until it reads a 1, then halts on it
const char* kSeekMark = "tapes 1\nhead 0 : 0\nstates a\nstart a\nrule a 0 -> _ R a\n";

}  // namespace

TEST(OtmStep, LeftFromLimitGoesToZero) {
  Program p = otm("tapes 1\nhead 0 : 0\nstates a\nstart a\nrule a * -> _ L a\n");
  EXPECT_EQ(otm_step(at(p, Ordinal::omega()), p).snapshot.heads[0], CellAddr{});
  EXPECT_EQ(otm_step(at(p, Ordinal::parse("w + 1")), p).snapshot.heads[0], CellAddr(Ordinal::omega(), 0));
  EXPECT_EQ(otm_step(at(p, 0), p).snapshot.heads[0], CellAddr{});
}

TEST(OtmStep, RightFromLimit) {
  Program p = otm("tapes 1\nhead 0 : 0\nstates a\nstart a\nrule a * -> _ R a\n");
  EXPECT_EQ(otm_step(at(p, Ordinal::parse("w*2")), p).snapshot.heads[0].ordinal(), Ordinal::parse("w*2 + 1"));
}

TEST(OtmStep, LimitCellsAreOrdinaryCells) {
  Program p = otm("tapes 1\nhead 0 : 0\nstates a\nstart a\nrule a 0 -> 1 S halt\n");
  auto o = otm_step(at(p, Ordinal::omega()), p);
  EXPECT_EQ(o.status, StepStatus::HaltExplicit);
  EXPECT_EQ(o.snapshot.tapes[0].get(CellAddr(Ordinal::omega(), 0)), 1);
}

TEST(OtmMarks, Parse) {
  auto m = parse_marks("w, w*2+1");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0], CellAddr(Ordinal::omega(), 0));
  EXPECT_EQ(m[1], CellAddr(Ordinal::parse("w*2"), 1));
  EXPECT_THROW(parse_marks("w,,3"), SyntaxError);
}

TEST(OtmRun, MarcherHeadAtOmega) {
  Program p = testkit::load("marcher.prog");
  p.family = Family::OTM;
  std::optional<Snapshot> lim;
  auto r = otm_run(p, {}, testkit::budget(), [&](const Snapshot& s, SnapshotRole role, const CycleEvidence* ev) {
    if (role == SnapshotRole::Limit && !lim) {
      lim = s;
      ASSERT_NE(ev, nullptr);
      EXPECT_EQ(ev->kind, CycleKind::RightDrift);
    }
  });
  ASSERT_TRUE(lim);
  EXPECT_EQ(lim->time, Ordinal::omega());
  EXPECT_EQ(lim->heads[0], CellAddr(Ordinal::omega(), 0));
  EXPECT_EQ(lim->tapes[0].get(CellAddr({}, 12345)), 1);
  EXPECT_EQ(lim->tapes[0].get(CellAddr(Ordinal::omega(), 0)), 0);
  // state liminf: h has index 0; h reads 0 at w and has no rule
  EXPECT_EQ(lim->state, 0u);
  EXPECT_EQ(r.outcome, Outcome::Halted);
  EXPECT_EQ(r.time, Ordinal::omega());
  // direct scan of an explicit prefix agrees
  auto h = testkit::successor_history(p, tm_initial(p, {}), 400);
  EXPECT_EQ(testkit::limit_mismatch(*lim, brute_liminf_oracle(h, 2, p.heads, LimitRuleSet::of(p, Ordinal::omega()))),
            "");
}

TEST(OtmRun, SeeksOrdinalParameter) {
  Program p = otm(kSeekMark);
  auto r = otm_run(p, {Ordinal::omega()}, testkit::budget());
  ASSERT_EQ(r.outcome, Outcome::Halted) << r.str();
  // arrives at w at the first limit and stops there on the mark
  EXPECT_EQ(r.final.heads[0], CellAddr(Ordinal::omega(), 0));
  EXPECT_EQ(r.time, Ordinal::omega());
  auto r2 = otm_run(p, {Ordinal::parse("w + 3")}, testkit::budget());
  ASSERT_EQ(r2.outcome, Outcome::Halted);
  EXPECT_EQ(r2.final.heads[0].ordinal(), Ordinal::parse("w + 3"));
  EXPECT_EQ(r2.time, Ordinal::parse("w + 3"));
}

TEST(OtmRun, ImmediateHalt) {
  Program p = testkit::load("halt.prog");
  p.family = Family::OTM;
  auto r = otm_run(p, {}, testkit::budget());
  EXPECT_EQ(r.outcome, Outcome::Halted);
  EXPECT_EQ(r.time, Ordinal(1));
}

TEST(OtmRun, BoundedHeadsMatchIttm) {
  for (const char* f : {"flipper_then_halt.prog", "two_phase.prog", "bounded_marcher.prog", "omega2_halter.prog",
                        "write_c5.prog", "toggle_pair.prog"}) {
    Program p = testkit::load(f);
    std::vector<Snapshot> a, b;
    auto ra = ittm_run(p, "", testkit::budget(), [&](const Snapshot& s, SnapshotRole, const CycleEvidence*) {
      a.push_back(s);
    });
    Program q = p;
    q.family = Family::OTM;
    auto rb = otm_run(q, {}, testkit::budget(), [&](const Snapshot& s, SnapshotRole, const CycleEvidence*) {
      b.push_back(s);
    });
    EXPECT_EQ(ra.outcome, rb.outcome) << f;
    EXPECT_EQ(ra.time, rb.time) << f;
    ASSERT_EQ(a.size(), b.size()) << f;
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]) << f << " record " << i;
  }
}

TEST(OtmRun, FamilyChecked) {
  EXPECT_THROW(otm_run(testkit::load("halt.prog"), {}, testkit::budget()), PreconditionError);
}
