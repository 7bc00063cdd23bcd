#pragma once

// Length of minimized archive tests against the generation that first
// covered their target, grouped as g0, g1-9 and g10+.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "readgen/search.hpp"
#include "readgen/stats.hpp"

namespace readgen {

enum class GenerationGroup { kG0 = 0, kG1To9 = 1, kG10Plus = 2 };

GenerationGroup group_of(std::size_t generation);
std::string_view to_string(GenerationGroup group);

struct TargetLengthRecord {
  std::uint64_t seed = 0;
  std::string target_id;
  std::size_t covered_at = 0;
  std::size_t lines = 0;
  std::size_t characters = 0;

  friend bool operator==(const TargetLengthRecord&, const TargetLengthRecord&) = default;
};

nlohmann::json to_json(const TargetLengthRecord& record);
TargetLengthRecord record_from_json(const nlohmann::json& j);

// One record per archived target, measured on its minimization without
// assertions.
std::vector<TargetLengthRecord> collect_records(const SubjectClass& subject, std::uint64_t seed,
                                                const CoverageArchive& archive,
                                                std::uint64_t step_budget = kDefaultStepBudget);

// Non-interactive search per seed (base.seed is replaced), records pooled
// in seed order. `on_seed` is called after each seed.
std::vector<TargetLengthRecord> run_experiment1(
    const SubjectClass& subject, const SearchConfig& base, std::uint64_t first_seed, std::size_t seeds,
    const std::function<void(std::uint64_t, std::size_t)>& on_seed = {});

std::array<std::vector<TargetLengthRecord>, 3> group(const std::vector<TargetLengthRecord>& records);

struct GroupSummary {
  GenerationGroup group = GenerationGroup::kG0;
  std::size_t count = 0;
  double mean_lines = 0.0;
  std::size_t min_lines = 0;
  double mean_characters = 0.0;
  std::size_t min_characters = 0;
};

struct GroupComparison {
  std::string measure;       // lines or characters
  bool applicable = false;   // both sides have data
  std::size_t n_early = 0;   // runs with g0 records
  std::size_t n_late = 0;    // runs with g1+ records
  double p_value = 1.0;
  CliffsDelta effect;
  bool significant = false;
  bool later_longer = false;
};

struct Experiment1Report {
  std::array<GroupSummary, 3> groups;
  std::array<GroupComparison, 2> comparisons;
  double alpha = 0.05;
  std::string text;

  // Minimum g10+ length in lines exceeds the minimum in g0; nullopt when
  // either group is empty.
  std::optional<bool> min_lines_grow() const;
  nlohmann::json rows() const;
};

// Comparisons use per-run mean lengths: g0 against g1-9 and g10+ joined.
Experiment1Report experiment1_report(const std::vector<TargetLengthRecord>& records, double alpha = 0.05);

}  // namespace readgen
