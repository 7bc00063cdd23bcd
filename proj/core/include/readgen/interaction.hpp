#pragma once

// Scheduling and the per-target steps of a readability interaction:
// target choice, candidate selection, preparation and score integration.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "readgen/archives.hpp"
#include "readgen/rng.hpp"
#include "readgen/search.hpp"

namespace readgen {

struct InteractionConfig {
  std::size_t revise_frequency = 0;  // 0 selects budget / 5
  std::size_t max_times = 10;
  double revise_after_percentage_coverage = 0.5;
  std::size_t max_targets_interaction_moment = 3;
  double percentage_to_revise = 0.08;
  int max_readability_score = 10;
  int readability_threshold = 3;
  double p_preference_selection = 0.2;
  std::size_t min_generation_for_interaction = 10;
  bool revisit_candidates = false;

  std::size_t frequency(std::size_t budget) const;
  void validate() const;
};

bool should_open_moment(std::size_t generation, double coverage, std::size_t interactions_done,
                        const InteractionConfig& config, std::size_t budget);

// Most recently covered target not attempted in this moment whose owning
// routine has not been addressed in it yet.
std::optional<std::uint32_t> select_target(const SubjectClass& subject, const CoverageArchive& archive,
                                           const std::set<std::uint32_t>& routines_used,
                                           const std::set<std::uint32_t>& attempted);

std::size_t candidate_budget(std::size_t population_size, double percentage_to_revise);

// The archived test plus up to budget - 1 distinct population coverers.
std::vector<TestCase> select_candidates(std::uint32_t target, const std::vector<Individual>& population,
                                        const CoverageArchive& archive, std::size_t budget, Rng& rng);

struct Candidate {
  std::string id;
  MinimizedTest test;
  std::optional<int> score;  // known score for references and the incumbent
};

struct PendingInteraction {
  std::size_t id = 0;
  std::size_t moment = 0;
  std::size_t generation = 0;
  std::uint32_t target = kNone;
  std::string target_id;
  std::string target_description;
  std::vector<Candidate> unseen;
  std::vector<Candidate> references;
  std::optional<Candidate> incumbent;
  std::size_t candidates_selected = 0;
  std::size_t distinct_minimizations = 0;
  std::size_t archive_hits = 0;
  int max_score = 10;
};

enum class PrepareAbort { kNone, kTooFewCandidates, kAllSeen };

struct PrepareResult {
  std::optional<PendingInteraction> pending;
  PrepareAbort abort = PrepareAbort::kNone;
  std::size_t distinct_minimizations = 0;
  std::size_t archive_hits = 0;
};

std::string_view to_string(PrepareAbort reason);

PrepareResult prepare_interaction(const SubjectClass& subject, std::uint32_t target,
                                  const std::vector<TestCase>& candidates,
                                  const ReadabilityArchive& readability, const PreferenceArchive& preference,
                                  const InteractionConfig& config, std::uint64_t step_budget,
                                  std::size_t assertion_cap = 4);

using ScoreMap = std::map<std::string, int>;

class ScoreValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws ScoreValidationError for missing, extra or out-of-range scores.
void validate_scores(const PendingInteraction& pending, const ScoreMap& scores);

struct ApplyOutcome {
  enum class Kind { kStored, kReplaced, kIncumbentKept, kBelowThreshold };

  Kind kind = Kind::kBelowThreshold;
  std::string winner;       // unseen candidate id with the best score
  int winner_score = 0;
  std::size_t tied = 0;     // unseen candidates sharing the best score
  bool preference_updated() const { return kind == Kind::kStored || kind == Kind::kReplaced; }
};

std::string_view to_string(ApplyOutcome::Kind kind);

ApplyOutcome apply_scores(const PendingInteraction& pending, const ScoreMap& scores,
                          const InteractionConfig& config, PreferenceArchive& preference,
                          ReadabilityArchive& readability, Rng& rng);

}  // namespace readgen
