#include <benchmark/benchmark.h>

#include <string>

#include "msalg/cli/format.hpp"
#include "msalg/clone.hpp"
#include "msalg/homog.hpp"
#include "msalg/lattice.hpp"

using namespace msalg;

namespace {

SortedAlgebra corpus(std::string const& name) {
  return cli::load_algebra(std::string(MSALG_CORPUS_DIR) + "/" + name + ".alg");
}

std::string const names[] = {"A_tiny", "A_malcev", "A_lattice"};

void BM_binary_closure(benchmark::State& state) {
  SortedAlgebra h = homogenize(corpus(names[state.range(0)])).algebra;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_fragment(h, {uniform_profile(2, 0)}));
  }
  state.SetLabel(names[state.range(0)]);
}

void BM_congruences(benchmark::State& state) {
  SortedAlgebra h = homogenize(corpus(names[state.range(0)])).algebra;
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_congruences(h));
  state.SetLabel(names[state.range(0)]);
}

void BM_homogenize(benchmark::State& state) {
  SortedAlgebra a = corpus(names[state.range(0)]);
  for (auto _ : state) benchmark::DoNotOptimize(homogenize(a));
  state.SetLabel(names[state.range(0)]);
}

}  // namespace

BENCHMARK(BM_binary_closure)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_congruences)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_homogenize)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
