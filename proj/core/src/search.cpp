#include "readgen/search.hpp"

#include <algorithm>
#include <numeric>

namespace readgen {

void SearchConfig::validate() const {
  if (population_size < 2) throw ConfigError("population size must be at least 2");
  if (max_generations < 1) throw ConfigError("budget must be at least one generation");
  if (crossover_rate < 0.0 || crossover_rate > 1.0) throw ConfigError("crossover rate must be in [0, 1]");
  if (archive_probability < 0.0 || archive_probability > 1.0) {
    throw ConfigError("archive probability must be in [0, 1]");
  }
  if (tournament_size < 1) throw ConfigError("tournament size must be positive");
  if (step_budget < 1) throw ConfigError("step budget must be positive");
  if (max_length < 1) throw ConfigError("max length must be positive");
}

Preference preference_compare(double fitness_a, std::size_t length_a, double fitness_b, std::size_t length_b) {
  if (fitness_a < fitness_b) return Preference::kFirst;
  if (fitness_b < fitness_a) return Preference::kSecond;
  if (length_a < length_b) return Preference::kFirst;
  if (length_b < length_a) return Preference::kSecond;
  return Preference::kTie;
}

bool dominates(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<std::uint32_t>& objectives) {
  bool better = false;
  for (std::uint32_t o : objectives) {
    if (a[o] > b[o]) return false;
    if (a[o] < b[o]) better = true;
  }
  return better;
}

std::vector<double> crowding_distance(const FitnessMatrix& fitness, const std::vector<std::size_t>& front,
                                      const std::vector<std::uint32_t>& objectives) {
  const std::size_t n = front.size();
  std::vector<double> distance(n, 0.0);
  if (n <= 2) {
    std::fill(distance.begin(), distance.end(), kUnreached);
    return distance;
  }
  std::vector<std::size_t> order(n);
  for (std::uint32_t o : objectives) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return fitness[front[x]][o] < fitness[front[y]][o];
    });
    const double lo = fitness[front[order.front()]][o];
    const double hi = fitness[front[order.back()]][o];
    distance[order.front()] = kUnreached;
    distance[order.back()] = kUnreached;
    if (hi <= lo) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      distance[order[k]] += (fitness[front[order[k + 1]]][o] - fitness[front[order[k - 1]]][o]) / (hi - lo);
    }
  }
  return distance;
}

namespace {

void order_by_crowding(const FitnessMatrix& fitness, std::vector<std::size_t>& front,
                       const std::vector<std::uint32_t>& objectives) {
  std::sort(front.begin(), front.end());
  const auto distance = crowding_distance(fitness, front, objectives);
  std::vector<std::size_t> order(front.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return distance[x] > distance[y]; });
  std::vector<std::size_t> sorted;
  sorted.reserve(front.size());
  for (std::size_t k : order) {
    sorted.push_back(front[k]);
  }
  front = std::move(sorted);
}

}  // namespace

std::vector<std::vector<std::size_t>> preference_sort(const FitnessMatrix& fitness,
                                                      const std::vector<std::size_t>& lengths,
                                                      const std::vector<std::uint32_t>& objectives) {
  const std::size_t n = fitness.size();
  std::vector<std::vector<std::size_t>> fronts;
  if (n == 0) return fronts;

  std::vector<bool> taken(n, false);
  std::vector<std::size_t> first;
  for (std::uint32_t o : objectives) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (preference_compare(fitness[i][o], lengths[i], fitness[best][o], lengths[best]) == Preference::kFirst) {
        best = i;
      }
    }
    if (!taken[best]) {
      taken[best] = true;
      first.push_back(best);
    }
  }
  if (!first.empty()) fronts.push_back(std::move(first));

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  // Fast non-dominated sorting over the remaining individuals.
  const std::size_t m = rest.size();
  std::vector<std::vector<std::size_t>> dominated(m);
  std::vector<std::size_t> counter(m, 0);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (dominates(fitness[rest[a]], fitness[rest[b]], objectives)) {
        dominated[a].push_back(b);
        ++counter[b];
      } else if (dominates(fitness[rest[b]], fitness[rest[a]], objectives)) {
        dominated[b].push_back(a);
        ++counter[a];
      }
    }
  }
  std::vector<std::size_t> current;
  for (std::size_t a = 0; a < m; ++a) {
    if (counter[a] == 0) current.push_back(a);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    std::vector<std::size_t> front;
    for (std::size_t a : current) {
      front.push_back(rest[a]);
      for (std::size_t b : dominated[a]) {
        if (--counter[b] == 0) next.push_back(b);
      }
    }
    fronts.push_back(std::move(front));
    current = std::move(next);
  }
  for (auto& front : fronts) order_by_crowding(fitness, front, objectives);
  return fronts;
}

CoverageArchive::CoverageArchive(std::size_t target_count) : entries_(target_count) {}

bool CoverageArchive::offer(std::uint32_t target, const TestCase& test, std::size_t generation) {
  auto& slot = entries_.at(target);
  if (!slot) {
    slot = ArchiveEntry{test, generation};
    order_.push_back(target);
    return true;
  }
  if (test.length() < slot->test.length()) {
    slot->test = test;
    return true;
  }
  return false;
}

std::vector<std::uint32_t> CoverageArchive::update(const TestCase& test, const std::vector<double>& distances,
                                                   std::size_t generation) {
  std::vector<std::uint32_t> fresh;
  for (std::uint32_t t = 0; t < distances.size(); ++t) {
    if (distances[t] != 0.0) continue;
    const bool was_covered = covered(t);
    if (offer(t, test, generation) && !was_covered) fresh.push_back(t);
  }
  return fresh;
}

double CoverageArchive::coverage() const {
  if (entries_.empty()) return 1.0;
  return static_cast<double>(order_.size()) / static_cast<double>(entries_.size());
}

std::vector<std::uint32_t> CoverageArchive::covered_targets() const {
  std::vector<std::uint32_t> out = order_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> SearchState::active_targets() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t t = 0; t < active.size(); ++t) {
    if (active[t]) out.push_back(t);
  }
  return out;
}

DynaMosa::DynaMosa(const SubjectClass& subject, SearchConfig config)
    : subject_(subject),
      config_(config),
      factory_(subject, VariationConfig{.max_length = config.max_length}),
      rng_(make_rng(config.seed, 0)) {
  config_.validate();
  state_.archive = CoverageArchive(subject.targets().size());
  state_.active.assign(subject.targets().size(), 0);
}

Individual DynaMosa::evaluate(TestCase test) const {
  Individual ind;
  const ExecutionTrace trace = execute(subject_, test, config_.step_budget);
  ind.fitness = target_distances(subject_, trace);
  ind.test = std::move(test);
  return ind;
}

void DynaMosa::expand_targets() {
  const auto& targets = subject_.targets();
  for (std::uint32_t t = 0; t < targets.size(); ++t) {
    if (state_.archive.covered(t)) {
      state_.active[t] = 0;
      continue;
    }
    const auto& parent = targets[t].control_parent;
    state_.active[t] = !parent || state_.archive.covered(*parent);
  }
}

void DynaMosa::initialize() {
  state_.generation = 0;
  state_.population.clear();
  for (std::size_t i = 0; i < config_.population_size; ++i) {
    Individual ind = evaluate(factory_.random_test(rng_));
    state_.archive.update(ind.test, ind.fitness, 0);
    state_.population.push_back(std::move(ind));
  }
  expand_targets();
  survive(std::move(state_.population));
}

bool DynaMosa::finished() const {
  return state_.generation >= config_.max_generations ||
         state_.archive.covered_count() == state_.archive.target_count();
}

const Individual& DynaMosa::tournament() {
  const auto& pop = state_.population;
  std::size_t best = uniform_index(rng_, pop.size());
  for (std::size_t k = 1; k < config_.tournament_size; ++k) {
    const std::size_t c = uniform_index(rng_, pop.size());
    if (pop[c].rank < pop[best].rank || (pop[c].rank == pop[best].rank && pop[c].crowding > pop[best].crowding)) {
      best = c;
    }
  }
  return pop[best];
}

TestCase DynaMosa::archive_parent(const PreferenceSource& preference) {
  if (!preference.tests.empty() && bernoulli(rng_, preference.probability)) {
    return *preference.tests[uniform_index(rng_, preference.tests.size())];
  }
  const auto& covered = state_.archive.covered_in_order();
  return state_.archive.entry(covered[uniform_index(rng_, covered.size())])->test;
}

std::vector<TestCase> DynaMosa::breed(const PreferenceSource& preference) {
  std::vector<TestCase> offspring;
  offspring.reserve(config_.population_size + 1);
  auto parent = [&]() -> TestCase {
    if (state_.archive.covered_count() > 0 && bernoulli(rng_, config_.archive_probability)) {
      return archive_parent(preference);
    }
    return tournament().test;
  };
  while (offspring.size() < config_.population_size) {
    TestCase a = parent();
    TestCase b = parent();
    if (bernoulli(rng_, config_.crossover_rate)) {
      auto children = factory_.crossover(a, b, rng_);
      a = std::move(children.first);
      b = std::move(children.second);
    }
    offspring.push_back(factory_.mutate(a, rng_));
    if (offspring.size() < config_.population_size) offspring.push_back(factory_.mutate(b, rng_));
  }
  return offspring;
}

void DynaMosa::survive(std::vector<Individual> pool) {
  const auto objectives = state_.active_targets();
  FitnessMatrix fitness;
  std::vector<std::size_t> lengths;
  fitness.reserve(pool.size());
  for (const auto& ind : pool) {
    fitness.push_back(ind.fitness);
    lengths.push_back(ind.test.length());
  }
  const auto fronts = preference_sort(fitness, lengths, objectives);
  std::vector<Individual> next;
  next.reserve(config_.population_size);
  for (std::size_t r = 0; r < fronts.size() && next.size() < config_.population_size; ++r) {
    // Crowding values for tournament tie-breaks, indexed by pool position.
    std::vector<std::size_t> sorted = fronts[r];
    std::sort(sorted.begin(), sorted.end());
    const auto d = crowding_distance(fitness, sorted, objectives);
    std::vector<double> by_index(pool.size(), 0.0);
    for (std::size_t k = 0; k < sorted.size(); ++k) by_index[sorted[k]] = d[k];
    for (std::size_t i : fronts[r]) {
      if (next.size() >= config_.population_size) break;
      Individual ind = std::move(pool[i]);
      ind.rank = r;
      ind.crowding = by_index[i];
      next.push_back(std::move(ind));
    }
  }
  state_.population = std::move(next);
}

void DynaMosa::evolve(const PreferenceSource& preference) {
  auto offspring = breed(preference);
  const std::size_t generation = state_.generation + 1;
  std::vector<Individual> pool = std::move(state_.population);
  pool.reserve(pool.size() + offspring.size());
  for (auto& test : offspring) {
    Individual ind = evaluate(std::move(test));
    state_.archive.update(ind.test, ind.fitness, generation);
    pool.push_back(std::move(ind));
  }
  expand_targets();
  survive(std::move(pool));
  state_.generation = generation;
}

}  // namespace readgen
