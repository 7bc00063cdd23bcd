#pragma once

// Many-objective evolutionary search with dynamic target activation and a
// coverage archive.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "readgen/interpreter.hpp"
#include "readgen/rng.hpp"
#include "readgen/test_case.hpp"

namespace readgen {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SearchConfig {
  std::size_t population_size = 50;
  std::size_t max_generations = 1000;
  double crossover_rate = 0.75;
  std::size_t tournament_size = 4;
  // Chance that a parent is drawn from an archive instead of the population.
  double archive_probability = 0.2;
  std::uint64_t step_budget = kDefaultStepBudget;
  std::size_t max_length = 40;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Preference { kFirst, kSecond, kTie };

// Lower fitness wins; equal fitness falls back to the shorter test.
Preference preference_compare(double fitness_a, std::size_t length_a, double fitness_b,
                              std::size_t length_b);

// Per-individual distances to every target of the subject.
using FitnessMatrix = std::vector<std::vector<double>>;

// True when a is no worse than b on every objective and better on one.
bool dominates(const std::vector<double>& a, const std::vector<double>& b,
               const std::vector<std::uint32_t>& objectives);

// Front 0 holds the preferred individual for each objective; the rest are
// ranked by non-dominated sorting. Each front is ordered by crowding
// distance, descending, ties by index.
std::vector<std::vector<std::size_t>> preference_sort(const FitnessMatrix& fitness,
                                                      const std::vector<std::size_t>& lengths,
                                                      const std::vector<std::uint32_t>& objectives);

std::vector<double> crowding_distance(const FitnessMatrix& fitness, const std::vector<std::size_t>& front,
                                      const std::vector<std::uint32_t>& objectives);

struct ArchiveEntry {
  TestCase test;
  std::size_t covered_at = 0;  // generation of first coverage
};

class CoverageArchive {
 public:
  CoverageArchive() = default;
  explicit CoverageArchive(std::size_t target_count);

  // Stores the test if the target is new or the test is strictly shorter.
  bool offer(std::uint32_t target, const TestCase& test, std::size_t generation);
  // Offers the test for every target it covers; returns the newly covered.
  std::vector<std::uint32_t> update(const TestCase& test, const std::vector<double>& distances,
                                    std::size_t generation);

  bool covered(std::uint32_t target) const { return entries_[target].has_value(); }
  const std::optional<ArchiveEntry>& entry(std::uint32_t target) const { return entries_[target]; }
  std::size_t target_count() const noexcept { return entries_.size(); }
  std::size_t covered_count() const noexcept { return order_.size(); }
  double coverage() const;
  // Targets in order of first coverage.
  const std::vector<std::uint32_t>& covered_in_order() const noexcept { return order_; }
  std::vector<std::uint32_t> covered_targets() const;

 private:
  std::vector<std::optional<ArchiveEntry>> entries_;
  std::vector<std::uint32_t> order_;
};

struct Individual {
  TestCase test;
  std::vector<double> fitness;
  std::size_t rank = 0;
  double crowding = 0.0;
};

// Tests drawn from the preference archive when breeding.
struct PreferenceSource {
  double probability = 0.0;
  std::vector<const TestCase*> tests;
};

struct SearchState {
  std::size_t generation = 0;
  std::vector<Individual> population;
  std::vector<std::uint8_t> active;  // per target
  CoverageArchive archive;

  std::vector<std::uint32_t> active_targets() const;
  double coverage() const { return archive.coverage(); }
};

class DynaMosa {
 public:
  DynaMosa(const SubjectClass& subject, SearchConfig config);

  // Builds and evaluates generation 0.
  void initialize();
  // One generation: breed, evaluate, archive, expand targets, survive.
  void evolve(const PreferenceSource& preference = {});
  bool finished() const;

  const SearchState& state() const noexcept { return state_; }
  SearchState& state() noexcept { return state_; }
  const SearchConfig& config() const noexcept { return config_; }
  const TestFactory& factory() const noexcept { return factory_; }
  const SubjectClass& subject() const noexcept { return subject_; }
  Rng& rng() noexcept { return rng_; }

  Individual evaluate(TestCase test) const;
  std::vector<TestCase> breed(const PreferenceSource& preference);
  void expand_targets();

 private:
  const Individual& tournament();
  TestCase archive_parent(const PreferenceSource& preference);
  void survive(std::vector<Individual> pool);

  const SubjectClass& subject_;
  SearchConfig config_;
  TestFactory factory_;
  Rng rng_;
  SearchState state_;
};

}  // namespace readgen
