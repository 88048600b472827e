#include "transfinite/transfinite.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <string>

using namespace transfinite;

namespace {

Program corpus(const char* name) { return load_program(std::string(TRANSFINITE_PROGRAMS_DIR) + "/" + name); }

Budget budget(std::uint64_t steps, std::uint64_t level) { return Budget{steps, level, 200}; }

void BM_OrdinalAddMul(benchmark::State& st) {
  std::mt19937_64 rng(1);
  std::vector<Ordinal> xs;
  for (int i = 0; i < 64; ++i) {
    Ordinal o;
    for (int k = 0; k < 4; ++k) o = add(o, mul(omega_pow(Ordinal(rng() % 6)), Ordinal(1 + rng() % 5)));
    xs.push_back(o);
  }
  std::size_t i = 0;
  for (auto _ : st) {
    const Ordinal& a = xs[i % xs.size()];
    const Ordinal& b = xs[(i * 7 + 3) % xs.size()];
    benchmark::DoNotOptimize(mul(add(a, b), b));
    ++i;
  }
}
BENCHMARK(BM_OrdinalAddMul);

void BM_OrdinalParse(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(Ordinal::parse("w^(w + 1)*2 + w^3*4 + w*5 + 7"));
}
BENCHMARK(BM_OrdinalParse);

void BM_IttmSuccessorSteps(benchmark::State& st) {
  Program p = corpus("bounded_marcher.prog");
  for (auto _ : st) {
    Snapshot s = tm_initial(p, {});
    for (int i = 0; i < 1000; ++i) tm_step(s, p);
    benchmark::DoNotOptimize(s);
  }
  st.SetItemsProcessed(st.iterations() * 1000);
}
BENCHMARK(BM_IttmSuccessorSteps);

void BM_IttmRun(benchmark::State& st, const char* file) {
  Program p = corpus(file);
  for (auto _ : st) benchmark::DoNotOptimize(ittm_run(p, "", budget(10000, 2)));
}
BENCHMARK_CAPTURE(BM_IttmRun, flipper_then_halt, "flipper_then_halt.prog");
BENCHMARK_CAPTURE(BM_IttmRun, two_phase, "two_phase.prog");
BENCHMARK_CAPTURE(BM_IttmRun, omega2_halter, "omega2_halter.prog");
BENCHMARK_CAPTURE(BM_IttmRun, marcher, "marcher.prog");

void BM_CompileIttm(benchmark::State& st) {
  Program p = corpus("two_phase.prog");
  for (auto _ : st) benchmark::DoNotOptimize(compile_ittm_to_ibssm(p));
}
BENCHMARK(BM_CompileIttm);

void BM_Bisimulate(benchmark::State& st) {
  Program p = corpus("flipper_then_halt.prog");
  for (auto _ : st) benchmark::DoNotOptimize(bisimulate(p, "", budget(100000, 2)));
}
BENCHMARK(BM_Bisimulate)->Unit(benchmark::kMillisecond);

void BM_IbssmEnumeratedRuns(benchmark::State& st) {
  Schema s{Family::IBSSM, 2, 1};
  auto ps = enumerate_programs(s, 500);
  std::vector<Rational> in{Rational(1, 2), Rational(1, 3)};
  for (auto _ : st)
    for (const auto& p : ps) benchmark::DoNotOptimize(run_continuity(p, in, budget(2000, 3)));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(ps.size()));
}
BENCHMARK(BM_IbssmEnumeratedRuns)->Unit(benchmark::kMillisecond);

void BM_SRoutine(benchmark::State& st) {
  Ordinal ww = Ordinal::parse("w^w");
  Program p = s_routine_program(ww, static_cast<std::size_t>(st.range(0)));
  DeltaMachine m(ww);
  for (auto _ : st) benchmark::DoNotOptimize(m.run(p, {}, budget(5000, 1)));
}
BENCHMARK(BM_SRoutine)->Arg(5)->Arg(21)->Unit(benchmark::kMillisecond);

void BM_TorusOmegaSquared(benchmark::State& st) {
  TorusMap f = TorusMap::rotation({Rational(3, 47), Rational(5, 13)});
  TorusPoint x{Rational(1, 7), Rational(2, 9)};
  Ordinal a = Ordinal::parse("w^2");
  for (auto _ : st) benchmark::DoNotOptimize(iterate_torus(f, x, a, budget(20000, 3)));
}
BENCHMARK(BM_TorusOmegaSquared)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
