#include <benchmark/benchmark.h>

#include "readgen/minimization.hpp"
#include "readgen/search.hpp"

using namespace readgen;

namespace {

const SubjectClass& subject() {
  static const SubjectClass s = load_subject(READGEN_FIXTURE_DIR "/array_int_list.sub");
  return s;
}

std::vector<TestCase> random_tests(std::size_t count) {
  TestFactory factory(subject());
  Rng rng = make_rng(1);
  std::vector<TestCase> out;
  while (out.size() < count) out.push_back(factory.random_test(rng));
  return out;
}

void BM_Execute(benchmark::State& state) {
  const auto tests = random_tests(64);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(execute(subject(), tests[i++ % tests.size()]));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Execute);

void BM_FitnessVector(benchmark::State& state) {
  const auto tests = random_tests(64);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto trace = execute(subject(), tests[i++ % tests.size()]);
    benchmark::DoNotOptimize(target_distances(subject(), trace));
  }
}
BENCHMARK(BM_FitnessVector);

void BM_Minimize(benchmark::State& state) {
  std::vector<std::pair<TestCase, std::uint32_t>> pairs;
  for (const auto& t : random_tests(200)) {
    const auto covered = covered_targets(subject(), execute(subject(), t));
    if (!covered.empty()) pairs.emplace_back(t, covered.back());
    if (pairs.size() == 32) break;
  }
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& [test, target] = pairs[i++ % pairs.size()];
    benchmark::DoNotOptimize(minimize_for_target(subject(), test, subject().target(target)));
  }
}
BENCHMARK(BM_Minimize);

}  // namespace
