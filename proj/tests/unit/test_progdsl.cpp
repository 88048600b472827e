#include "testkit.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace transfinite;

namespace {

const char* kTwoCellFlipper = R"(family ittm
name two_cell_flipper
# C0 and C1 alternate 10, 01, 10, ...: never both 0 at a finite stage
input 0
tapes 2
head 0 : 0 1
states a b
start a
rule a ** -> 10 S b
rule b ** -> 01 S a
)";

}  // namespace

TEST(Program, ImmediateHalt) {
  Program p = parse_program("family ittm\ntapes 1\nhead 0 : 0\nstates q\nstart q\nrule q * -> _ S halt\n");
  EXPECT_EQ(p.state_count(), 1u);
  EXPECT_EQ(p.rule_count(), 2u);  // '*' covers both observations
  EXPECT_EQ(p.family, Family::ITTM);
}

TEST(Program, UnknownStateDiagnostic) {
  try {
    parse_program("family ittm\ntapes 1\nhead 0 : 0\nstates q\nstart q\nrule q 0 -> 1 R q9\n");
    FAIL() << "expected ProgramError";
  } catch (const ProgramError& e) {
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_NE(e.diagnostics()[0].message.find("unknown state q9"), std::string::npos) << e.what();
    EXPECT_EQ(e.diagnostics()[0].line, 6u);
  }
}

TEST(Program, DuplicateRuleRejected) {
  EXPECT_THROW(parse_program("family ittm\ntapes 1\nhead 0 : 0\nstates q\nstart q\nrule q 0 -> 1 R q\n"
                             "rule q * -> 0 S halt\n"),
               ProgramError);
}

TEST(Program, FamilyMismatches) {
  EXPECT_THROW(parse_program("family ittm\ndelta w\ntapes 1\nhead 0 : 0\nstates q\nstart q\n"), ProgramError);
  EXPECT_THROW(parse_program("family delta\ndelta w*2\ntapes 1\nhead 0 : 0\nstates q\nstart q\n"), ProgramError);
  EXPECT_THROW(parse_program("family ibssm\nregisters 1\nnode 0: add r0 r0 r5 -> halt\n"), ProgramError);
  EXPECT_THROW(parse_program("family lisp\n"), ProgramError);
}

TEST(Program, TwoCellFlipperRoundTrip) {
  Program p = parse_program(kTwoCellFlipper);
  EXPECT_EQ(p.state_count(), 2u);
  std::string canon = print_program(p);
  EXPECT_EQ(parse_program(canon), p);
  EXPECT_EQ(print_program(parse_program(canon)), canon);
}

TEST(Program, CorpusRoundTrips) {
  for (const char* f : {"halt.prog", "flipper.prog", "flipper_then_halt.prog", "two_phase.prog", "omega2_halter.prog",
                        "bounded_marcher.prog", "marcher.prog", "marcher3.prog", "write_c5.prog", "copy_input.prog",
                        "walker3.prog", "toggle_pair.prog", "eraser.prog"}) {
    Program p = testkit::load(f);
    EXPECT_EQ(parse_program(print_program(p)), p) << f;
  }
}

TEST(Program, IbssmFlowChart) {
  Program p = parse_program("family ibssm\nregisters 2\nnode 0: add r0 r0 r1 -> 1\nnode 1: branch r0 r1 -> 0 | halt\n");
  EXPECT_EQ(p.nodes.size(), 2u);
  EXPECT_EQ(p.computation_nodes(), 2u);
  EXPECT_EQ(p.nodes[1].op, Op::Branch);
  EXPECT_EQ(p.nodes[1].alt, kHalt);
  EXPECT_EQ(parse_program(print_program(p)), p);
}

TEST(Program, MultiHeadDoubleWriteRejected) {
  // both heads on tape 0, writing different bits: they may share a cell
  EXPECT_THROW(parse_program("family ittm\ntapes 1\nhead 0 : 0\nhead 1 : 0\nstates q\nstart q\n"
                             "rule q ** -> 10 RS q\n"),
               ProgramError);
}

TEST(Enumerate, EmptyBound) {
  EXPECT_TRUE(enumerate_programs(Schema{Family::ITTM, 1, 1}, 0).empty());
}

TEST(Enumerate, OneStateCount) {
  Schema s{Family::ITTM, 1, 1};
  // each of the two (state, observation) cells: no rule, or write x move x target
  EXPECT_EQ(schema_size(s), 13u * 13u);
  auto all = enumerate_programs(s, schema_size(s));
  EXPECT_EQ(all.size(), 169u);
  std::set<std::string> texts;
  for (const auto& p : all) {
    EXPECT_TRUE(validate_program(p).empty());
    auto body = print_program(p);
    body = body.substr(body.find('\n', body.find("name")));  // names carry the index
    texts.insert(body);
  }
  EXPECT_EQ(texts.size(), 169u);
}

TEST(Enumerate, IndexStability) {
  Schema s{Family::ITTM, 2, 1};
  auto a = enumerate_programs(s, 400);
  auto b = enumerate_programs(s, 400);
  ASSERT_EQ(a, b);
  for (std::uint64_t e : {0u, 5u, 168u, 169u, 399u}) {
    auto p = program_at(s, e);
    ASSERT_TRUE(p);
    EXPECT_EQ(enumeration_index(*p), e);
  }
  EXPECT_THROW(program_at(s, schema_size(s)), PreconditionError);
}

TEST(Enumerate, IbssmSchema) {
  Schema s{Family::IBSSM, 2, 1};
  auto ps = enumerate_programs(s, 50);
  ASSERT_FALSE(ps.empty());
  for (const auto& p : ps) {
    EXPECT_EQ(p.family, Family::IBSSM);
    EXPECT_LE(p.nodes.size(), 2u);
  }
}
