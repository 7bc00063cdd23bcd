#include <benchmark/benchmark.h>

#include "readgen/search.hpp"

using namespace readgen;

namespace {

const SubjectClass& subject() {
  static const SubjectClass s = load_subject(READGEN_FIXTURE_DIR "/array_int_list.sub");
  return s;
}

void BM_Generation(benchmark::State& state) {
  SearchConfig cfg;
  cfg.population_size = static_cast<std::size_t>(state.range(0));
  cfg.max_generations = 1u << 30;
  DynaMosa search(subject(), cfg);
  search.initialize();
  for (auto _ : state) search.evolve();
  state.counters["coverage"] = search.state().coverage();
}
BENCHMARK(BM_Generation)->Arg(20)->Arg(50)->Arg(100);

void BM_PreferenceSort(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const std::size_t targets = 300;
  Rng rng = make_rng(3);
  FitnessMatrix fitness(n, std::vector<double>(targets));
  std::vector<std::size_t> lengths(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : fitness[i]) v = uniform01(rng);
    lengths[i] = 1 + uniform_index(rng, 30);
  }
  std::vector<std::uint32_t> objectives;
  for (std::uint32_t t = 0; t < targets; t += 3) objectives.push_back(t);
  for (auto _ : state) benchmark::DoNotOptimize(preference_sort(fitness, lengths, objectives));
}
BENCHMARK(BM_PreferenceSort)->Arg(50)->Arg(100);

}  // namespace
