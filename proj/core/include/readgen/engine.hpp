#pragma once

// Interaction moments on top of a running search: owns the preference and
// readability archives and talks to the scorer, one interaction at a time.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "readgen/archives.hpp"
#include "readgen/interaction.hpp"
#include "readgen/scoring.hpp"
#include "readgen/search.hpp"
#include "readgen/session.hpp"

namespace readgen {

struct InteractionSummary {
  std::size_t id = 0;
  std::size_t moment = 0;
  std::size_t generation = 0;
  std::uint32_t target = kNone;
  std::size_t unseen = 0;
  std::size_t references = 0;
  ApplyOutcome outcome;
};

struct MomentReport {
  std::size_t moment = 0;
  std::size_t generation = 0;
  std::size_t interactions = 0;
  std::size_t aborted_targets = 0;
  bool scorer_failed = false;
  std::string stop_reason;  // quota, max-times, targets-exhausted, scorer-failed
};

class InteractionEngine {
 public:
  InteractionEngine(const SubjectClass& subject, InteractionConfig config, std::uint64_t seed,
                    std::size_t population_size, std::size_t budget, std::uint64_t step_budget,
                    Session* session = nullptr, std::size_t assertion_cap = 4);

  bool should_open(const SearchState& state) const;

  // Runs one moment. Recoverable scorer failures end the moment; a closed
  // scorer channel propagates as ScorerError.
  MomentReport run_moment(const SearchState& state, Scorer& scorer);

  // Source for archive-driven breeding; points into the preference archive.
  PreferenceSource preference_source() const;

  const PreferenceArchive& preference() const noexcept { return preference_; }
  const ReadabilityArchive& readability() const noexcept { return readability_; }
  const InteractionConfig& config() const noexcept { return config_; }
  std::size_t interactions_done() const noexcept { return history_.size(); }
  std::size_t moments_done() const noexcept { return moments_; }
  const std::vector<InteractionSummary>& history() const noexcept { return history_; }

 private:
  const SubjectClass& subject_;
  InteractionConfig config_;
  std::size_t population_size_;
  std::size_t budget_;
  std::uint64_t step_budget_;
  std::size_t assertion_cap_;
  Session* session_;
  Rng rng_;
  PreferenceArchive preference_;
  ReadabilityArchive readability_;
  std::vector<InteractionSummary> history_;
  std::size_t moments_ = 0;
  std::size_t prepared_ = 0;  // interaction ids handed out
};

// JSON views shared by the session log, the server and the output files.
nlohmann::json preference_entry_json(const SubjectClass& subject, std::uint32_t target,
                                     const PreferenceEntry& entry);
nlohmann::json preference_archive_json(const SubjectClass& subject, const PreferenceArchive& archive);
nlohmann::json readability_archive_json(const SubjectClass& subject, const ReadabilityArchive& archive);
nlohmann::json pending_json(const PendingInteraction& pending);

// Text snapshot of the preference archive for the tester to consult.
std::string render_preference_archive(const SubjectClass& subject, const PreferenceArchive& archive);

}  // namespace readgen
