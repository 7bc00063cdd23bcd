#include "readgen/interaction.hpp"

#include <algorithm>
#include <cmath>

#include "readgen/minimization.hpp"

namespace readgen {

std::size_t InteractionConfig::frequency(std::size_t budget) const {
  if (revise_frequency > 0) return revise_frequency;
  return std::max<std::size_t>(1, budget / 5);
}

void InteractionConfig::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must be in [0, 1]");
  };
  fraction(revise_after_percentage_coverage, "Revise_after_percentage_coverage");
  fraction(percentage_to_revise, "Percentage_to_revise");
  fraction(p_preference_selection, "P_preference_selection");
  if (max_targets_interaction_moment < 1) throw ConfigError("Max_targets_interaction_moment must be positive");
  if (max_readability_score < 1) throw ConfigError("Max_readability_score must be positive");
  if (readability_threshold < 0 || readability_threshold > max_readability_score) {
    throw ConfigError("Readability_threshold must be in [0, Max_readability_score]");
  }
}

bool should_open_moment(std::size_t generation, double coverage, std::size_t interactions_done,
                        const InteractionConfig& config, std::size_t budget) {
  return generation % config.frequency(budget) == 0 && generation >= config.min_generation_for_interaction &&
         coverage >= config.revise_after_percentage_coverage && interactions_done < config.max_times;
}

std::optional<std::uint32_t> select_target(const SubjectClass& subject, const CoverageArchive& archive,
                                           const std::set<std::uint32_t>& routines_used,
                                           const std::set<std::uint32_t>& attempted) {
  // First-coverage order is non-decreasing in generation, so walking it
  // backwards yields the most recent targets first.
  const auto& order = archive.covered_in_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (attempted.contains(*it)) continue;
    if (routines_used.contains(subject.target(*it).routine)) continue;
    return *it;
  }
  return std::nullopt;
}

std::size_t candidate_budget(std::size_t population_size, double percentage_to_revise) {
  // The epsilon keeps exact products such as 50 x 0.08 from flooring to 3.
  const double raw = static_cast<double>(population_size) * percentage_to_revise;
  const auto nt = static_cast<std::size_t>(std::floor(raw + 1e-9));
  return std::max<std::size_t>(nt, 2);
}

std::vector<TestCase> select_candidates(std::uint32_t target, const std::vector<Individual>& population,
                                        const CoverageArchive& archive, std::size_t budget, Rng& rng) {
  std::vector<TestCase> out;
  const auto& entry = archive.entry(target);
  if (!entry) return out;
  out.push_back(entry->test);
  std::vector<std::size_t> coverers;
  for (std::size_t i = 0; i < population.size(); ++i) {
    if (population[i].fitness[target] == 0.0) coverers.push_back(i);
  }
  const std::size_t take = std::min(budget > 0 ? budget - 1 : 0, coverers.size());
  for (std::size_t k = 0; k < take; ++k) {
    const std::size_t j = k + uniform_index(rng, coverers.size() - k);
    std::swap(coverers[k], coverers[j]);
    out.push_back(population[coverers[k]].test);
  }
  return out;
}

std::string_view to_string(PrepareAbort reason) {
  switch (reason) {
    case PrepareAbort::kNone: return "none";
    case PrepareAbort::kTooFewCandidates: return "too-few-candidates";
    case PrepareAbort::kAllSeen: return "all-seen";
  }
  return "none";
}

PrepareResult prepare_interaction(const SubjectClass& subject, std::uint32_t target,
                                  const std::vector<TestCase>& candidates,
                                  const ReadabilityArchive& readability, const PreferenceArchive& preference,
                                  const InteractionConfig& config, std::uint64_t step_budget,
                                  std::size_t assertion_cap) {
  const CoverageTarget& t = subject.target(target);
  std::vector<MinimizedTest> distinct;
  std::set<std::string> keys;
  for (const auto& c : candidates) {
    MinimizedTest m = minimize_for_target(subject, c, t, step_budget);
    if (keys.insert(m.canonical_key).second) distinct.push_back(std::move(m));
  }

  PrepareResult result;
  result.distinct_minimizations = distinct.size();
  const PreferenceEntry* incumbent = preference.find(target);
  if (distinct.size() < 2 && !incumbent) {
    result.abort = PrepareAbort::kTooFewCandidates;
    return result;
  }

  PendingInteraction pending;
  pending.target = target;
  pending.target_id = t.id;
  pending.target_description = render_target_description(t, subject);
  pending.candidates_selected = candidates.size();
  pending.distinct_minimizations = distinct.size();
  pending.max_score = config.max_readability_score;
  for (auto& m : distinct) {
    const ReadabilityRecord* seen = readability.find(m.canonical_key);
    if (seen) ++result.archive_hits;
    if (seen && !config.revisit_candidates) {
      pending.references.push_back({"r" + std::to_string(pending.references.size()), std::move(m), seen->score});
    } else {
      pending.unseen.push_back({"c" + std::to_string(pending.unseen.size()), std::move(m), std::nullopt});
    }
  }
  pending.archive_hits = result.archive_hits;
  if (pending.unseen.empty()) {
    result.abort = PrepareAbort::kAllSeen;
    return result;
  }
  for (auto& c : pending.unseen) c.test = generate_assertions(subject, std::move(c.test), assertion_cap, step_budget);
  for (auto& c : pending.references) {
    c.test = generate_assertions(subject, std::move(c.test), assertion_cap, step_budget);
  }
  if (incumbent) pending.incumbent = Candidate{"incumbent", incumbent->test, incumbent->score};
  result.pending = std::move(pending);
  return result;
}

void validate_scores(const PendingInteraction& pending, const ScoreMap& scores) {
  for (const auto& c : pending.unseen) {
    const auto it = scores.find(c.id);
    if (it == scores.end()) throw ScoreValidationError("missing score for candidate " + c.id);
    if (it->second < 0 || it->second > pending.max_score) {
      throw ScoreValidationError("score " + std::to_string(it->second) + " for candidate " + c.id +
                                 " outside [0, " + std::to_string(pending.max_score) + "]");
    }
  }
  for (const auto& [id, score] : scores) {
    const bool known = std::any_of(pending.unseen.begin(), pending.unseen.end(),
                                   [&](const Candidate& c) { return c.id == id; });
    if (!known) throw ScoreValidationError("unexpected score for '" + id + "'");
  }
}

std::string_view to_string(ApplyOutcome::Kind kind) {
  switch (kind) {
    case ApplyOutcome::Kind::kStored: return "stored";
    case ApplyOutcome::Kind::kReplaced: return "replaced";
    case ApplyOutcome::Kind::kIncumbentKept: return "incumbent-kept";
    case ApplyOutcome::Kind::kBelowThreshold: return "below-threshold";
  }
  return "below-threshold";
}

ApplyOutcome apply_scores(const PendingInteraction& pending, const ScoreMap& scores,
                          const InteractionConfig& config, PreferenceArchive& preference,
                          ReadabilityArchive& readability, Rng& rng) {
  validate_scores(pending, scores);
  for (const auto& c : pending.unseen) {
    readability.record(c.test.canonical_key, scores.at(c.id), pending.id, pending.target,
                       config.revisit_candidates);
  }

  int best = -1;
  std::vector<const Candidate*> tied;
  for (const auto& c : pending.unseen) {
    const int s = scores.at(c.id);
    if (s > best) {
      best = s;
      tied.clear();
    }
    if (s == best) tied.push_back(&c);
  }
  const Candidate* winner = tied.size() == 1 ? tied.front() : tied[uniform_index(rng, tied.size())];

  ApplyOutcome outcome;
  outcome.winner = winner->id;
  outcome.winner_score = best;
  outcome.tied = tied.size();
  if (best < config.readability_threshold) {
    outcome.kind = ApplyOutcome::Kind::kBelowThreshold;
    return outcome;
  }
  const PreferenceEntry* incumbent = preference.find(pending.target);
  if (incumbent) {
    const bool better = best > incumbent->score ||
                        (best == incumbent->score && winner->test.test.length() < incumbent->test.test.length());
    if (!better) {
      outcome.kind = ApplyOutcome::Kind::kIncumbentKept;
      return outcome;
    }
    outcome.kind = ApplyOutcome::Kind::kReplaced;
  } else {
    outcome.kind = ApplyOutcome::Kind::kStored;
  }
  preference.store(pending.target, PreferenceEntry{winner->test, best, pending.id, pending.generation});
  return outcome;
}

}  // namespace readgen
