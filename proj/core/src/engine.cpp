#include "readgen/engine.hpp"

#include <chrono>
#include <cstdio>
#include <sstream>

namespace readgen {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

std::string three_digits(std::size_t n) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%03zu", n);
  return buf;
}

nlohmann::json candidate_json(const Candidate& c) {
  nlohmann::json j = {{"id", c.id},
                      {"key", c.test.canonical_key},
                      {"length", c.test.test.length()},
                      {"rendered", c.test.rendered}};
  if (c.score) j["score"] = *c.score;
  return j;
}

}  // namespace

InteractionEngine::InteractionEngine(const SubjectClass& subject, InteractionConfig config, std::uint64_t seed,
                                     std::size_t population_size, std::size_t budget,
                                     std::uint64_t step_budget, Session* session, std::size_t assertion_cap)
    : subject_(subject),
      config_(config),
      population_size_(population_size),
      budget_(budget),
      step_budget_(step_budget),
      assertion_cap_(assertion_cap),
      session_(session),
      rng_(make_rng(seed, 1)) {
  config_.validate();
}

bool InteractionEngine::should_open(const SearchState& state) const {
  return should_open_moment(state.generation, state.coverage(), history_.size(), config_, budget_);
}

PreferenceSource InteractionEngine::preference_source() const {
  return PreferenceSource{config_.p_preference_selection, preference_.tests()};
}

MomentReport InteractionEngine::run_moment(const SearchState& state, Scorer& scorer) {
  MomentReport report;
  report.moment = ++moments_;
  report.generation = state.generation;
  const nlohmann::json opened = {{"moment", report.moment},
                                 {"generation", state.generation},
                                 {"coverage", state.coverage()},
                                 {"interactions_done", history_.size()}};
  if (session_) {
    session_->record("moment-opened", opened);
    session_->event("moment-opened", opened);
  }

  std::set<std::uint32_t> routines_used;
  std::set<std::uint32_t> attempted;
  const std::size_t nt = candidate_budget(population_size_, config_.percentage_to_revise);
  report.stop_reason = "quota";
  for (;;) {
    if (report.interactions >= config_.max_targets_interaction_moment) break;
    if (history_.size() >= config_.max_times) {
      report.stop_reason = "max-times";
      break;
    }
    const auto target = select_target(subject_, state.archive, routines_used, attempted);
    if (!target) {
      report.stop_reason = "targets-exhausted";
      break;
    }
    attempted.insert(*target);
    const CoverageTarget& t = subject_.target(*target);

    const auto prep_start = std::chrono::steady_clock::now();
    const auto candidates = select_candidates(*target, state.population, state.archive, nt, rng_);
    PrepareResult prepared = prepare_interaction(subject_, *target, candidates, readability_, preference_,
                                                 config_, step_budget_, assertion_cap_);
    const double prep_ms = ms_since(prep_start);
    if (!prepared.pending) {
      ++report.aborted_targets;
      if (session_) {
        session_->record("interaction-aborted", {{"moment", report.moment},
                                                 {"generation", state.generation},
                                                 {"target_id", t.id},
                                                 {"reason", std::string(to_string(prepared.abort))},
                                                 {"candidates_selected", candidates.size()},
                                                 {"distinct_minimizations", prepared.distinct_minimizations},
                                                 {"archive_hits", prepared.archive_hits},
                                                 {"prep_ms", prep_ms}});
      }
      continue;
    }

    PendingInteraction pending = std::move(*prepared.pending);
    pending.id = ++prepared_;
    pending.moment = report.moment;
    pending.generation = state.generation;
    if (session_) {
      const std::string dir = "interactions/" + three_digits(pending.id) + "/";
      session_->write_file(dir + "target.txt", pending.target_description + "\n");
      for (const auto& c : pending.unseen) session_->write_file(dir + c.id + ".t.txt", c.test.rendered);
      for (const auto& c : pending.references) session_->write_file(dir + c.id + ".t.txt", c.test.rendered);
      if (pending.incumbent) session_->write_file(dir + "incumbent.t.txt", pending.incumbent->test.rendered);
      session_->event("interaction-ready", {{"interaction", pending_json(pending)}});
    }

    const auto score_start = std::chrono::steady_clock::now();
    ScoreMap scores;
    try {
      scores = scorer.score(pending);
      validate_scores(pending, scores);
    } catch (const ScorerError& e) {
      if (session_) {
        session_->record("scorer-failed", {{"interaction", pending.id},
                                           {"moment", report.moment},
                                           {"channel_closed", e.channel_closed()},
                                           {"message", e.what()}});
      }
      if (e.channel_closed()) throw;
      report.scorer_failed = true;
      report.stop_reason = "scorer-failed";
      break;
    } catch (const ScoreValidationError& e) {
      if (session_) {
        session_->record("scorer-failed", {{"interaction", pending.id},
                                           {"moment", report.moment},
                                           {"channel_closed", false},
                                           {"message", e.what()}});
      }
      report.scorer_failed = true;
      report.stop_reason = "scorer-failed";
      break;
    }
    const double elapsed_ms = ms_since(score_start);

    const ApplyOutcome outcome = apply_scores(pending, scores, config_, preference_, readability_, rng_);
    routines_used.insert(t.routine);
    ++report.interactions;
    history_.push_back({pending.id, pending.moment, pending.generation, *target, pending.unseen.size(),
                        pending.references.size(), outcome});

    if (session_) {
      nlohmann::json unseen = nlohmann::json::array();
      for (const auto& c : pending.unseen) {
        unseen.push_back({{"id", c.id},
                          {"key", c.test.canonical_key},
                          {"length", c.test.test.length()},
                          {"score", scores.at(c.id)}});
      }
      nlohmann::json references = nlohmann::json::array();
      for (const auto& c : pending.references) {
        references.push_back({{"id", c.id}, {"key", c.test.canonical_key}, {"score", *c.score}});
      }
      nlohmann::json incumbent = nullptr;
      if (pending.incumbent) {
        incumbent = {{"key", pending.incumbent->test.canonical_key}, {"score", *pending.incumbent->score}};
      }
      const nlohmann::json applied = {{"outcome", std::string(to_string(outcome.kind))},
                                      {"winner", outcome.winner},
                                      {"winner_score", outcome.winner_score},
                                      {"tied", outcome.tied}};
      session_->record("interaction", {{"interaction", pending.id},
                                       {"moment", pending.moment},
                                       {"generation", pending.generation},
                                       {"target_id", pending.target_id},
                                       {"candidates_selected", pending.candidates_selected},
                                       {"distinct_minimizations", pending.distinct_minimizations},
                                       {"archive_hits", pending.archive_hits},
                                       {"unseen", unseen},
                                       {"references", references},
                                       {"incumbent", incumbent},
                                       {"result", applied},
                                       {"prep_ms", prep_ms},
                                       {"elapsed_ms", elapsed_ms}});
      nlohmann::json event = {{"interaction", pending.id}, {"target_id", pending.target_id}, {"result", applied}};
      event["preference"] = outcome.preference_updated()
                                ? preference_entry_json(subject_, *target, *preference_.find(*target))
                                : nlohmann::json(nullptr);
      session_->event("scores-applied", event);
    }
  }

  if (session_) {
    session_->write_file("preference/moment-" + three_digits(report.moment) + ".txt",
                         render_preference_archive(subject_, preference_));
    const nlohmann::json closed = {{"moment", report.moment},
                                   {"generation", state.generation},
                                   {"interactions", report.interactions},
                                   {"aborted_targets", report.aborted_targets},
                                   {"stop_reason", report.stop_reason},
                                   {"interactions_done", history_.size()},
                                   {"preference_size", preference_.size()}};
    session_->record("moment-closed", closed);
    session_->event("moment-closed", closed);
  }
  return report;
}

nlohmann::json preference_entry_json(const SubjectClass& subject, std::uint32_t target,
                                     const PreferenceEntry& entry) {
  const CoverageTarget& t = subject.target(target);
  return {{"target", target},
          {"target_id", t.id},
          {"target_description", render_target_description(t, subject)},
          {"score", entry.score},
          {"interaction", entry.interaction},
          {"generation", entry.generation},
          {"key", entry.test.canonical_key},
          {"length", entry.test.test.length()},
          {"rendered", entry.test.rendered}};
}

nlohmann::json preference_archive_json(const SubjectClass& subject, const PreferenceArchive& archive) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [target, entry] : archive.entries()) out.push_back(preference_entry_json(subject, target, entry));
  return out;
}

nlohmann::json readability_archive_json(const SubjectClass& subject, const ReadabilityArchive& archive) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, r] : archive.entries()) {
    out.push_back({{"key", key},
                   {"score", r.score},
                   {"first_interaction", r.first_interaction},
                   {"last_interaction", r.last_interaction},
                   {"target_id", r.target == kNone ? std::string() : subject.target(r.target).id}});
  }
  return out;
}

nlohmann::json pending_json(const PendingInteraction& pending) {
  nlohmann::json unseen = nlohmann::json::array();
  for (const auto& c : pending.unseen) unseen.push_back(candidate_json(c));
  nlohmann::json references = nlohmann::json::array();
  for (const auto& c : pending.references) references.push_back(candidate_json(c));
  return {{"id", pending.id},
          {"moment", pending.moment},
          {"generation", pending.generation},
          {"target", pending.target},
          {"target_id", pending.target_id},
          {"target_description", pending.target_description},
          {"Max_readability_score", pending.max_score},
          {"unseen", unseen},
          {"references", references},
          {"incumbent", pending.incumbent ? candidate_json(*pending.incumbent) : nlohmann::json(nullptr)},
          {"candidates_selected", pending.candidates_selected},
          {"distinct_minimizations", pending.distinct_minimizations},
          {"archive_hits", pending.archive_hits}};
}

std::string render_preference_archive(const SubjectClass& subject, const PreferenceArchive& archive) {
  std::ostringstream out;
  out << "// preference archive: " << archive.size() << " target(s)\n";
  for (const auto& [target, entry] : archive.entries()) {
    const CoverageTarget& t = subject.target(target);
    out << "\n// " << t.id << ": score " << entry.score << " (interaction " << entry.interaction
        << ", generation " << entry.generation << ")\n";
    std::istringstream description(render_target_description(t, subject));
    for (std::string line; std::getline(description, line);) out << "// " << line << '\n';
    out << entry.test.rendered;
  }
  return out.str();
}

}  // namespace readgen
