// Serial reference loops against the OpenMP kernels. Engines memoize Y, so each
// iteration builds a fresh one outside the timed region.
#include <benchmark/benchmark.h>

#include "vqg/fields.hpp"
#include "vqg/lattice.hpp"
#include "vqg/parallel.hpp"
#include "vqg/vqg_suite.hpp"

using namespace vqg;

namespace {

Exec mode_of(const benchmark::State& s) { return s.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_associativity_polynomial(benchmark::State& s) {
  ExecScope scope(mode_of(s));
  for (auto _ : s) {
    s.PauseTiming();
    auto P = polynomial_engine();
    auto st = P.states(4);
    s.ResumeTiming();
    benchmark::DoNotOptimize(check_associativity_all(P, st, CheckWindow{std::nullopt, 6}));
  }
}

void BM_skew_even_lattice(benchmark::State& s) {
  ExecScope scope(mode_of(s));
  for (auto _ : s) {
    s.PauseTiming();
    auto V = borcherds_twist_vertex(Lattice::make({{2}}));
    auto st = V.states(2);
    s.ResumeTiming();
    benchmark::DoNotOptimize(check_skew_all(V, st, CheckWindow{std::nullopt, 6}));
  }
}

void BM_vqg_suite(benchmark::State& s) {
  ExecScope scope(mode_of(s));
  auto L = Lattice::make({{0, 1}, {0, 0}});
  auto R = as_rmatrix(lattice_bicharacter(L, build_sign_cocycle(L)), "r");
  for (auto _ : s) {
    s.PauseTiming();
    auto A = holomorphic_lattice_engine(2);
    auto st = lattice_states(2, 1, 1);
    s.ResumeTiming();
    benchmark::DoNotOptimize(check_vqg_suite(A, R, st, CheckWindow{std::nullopt, 3}));
  }
}

}  // namespace

BENCHMARK(BM_associativity_polynomial)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_skew_even_lattice)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_vqg_suite)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
