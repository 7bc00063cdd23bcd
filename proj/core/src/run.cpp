#include "readgen/run.hpp"

#include <chrono>
#include <fstream>
#include <memory>

namespace readgen {

bool interaction_compiled_in() {
#ifdef READGEN_NO_INTERACTION
  return false;
#else
  return true;
#endif
}

namespace {

void progress(Session* session, const SearchState& state, std::size_t interactions, std::size_t moments) {
  if (!session) return;
  session->event("generation-progress", {{"generation", state.generation},
                                         {"coverage", state.coverage()},
                                         {"covered", state.archive.covered_count()},
                                         {"interactions_done", interactions},
                                         {"moments_done", moments}});
}

}  // namespace

RunResult run_search(const SubjectClass& subject, const RunOptions& options, Scorer* scorer, Session* session) {
  const auto start = std::chrono::steady_clock::now();
  options.search.validate();
  options.interaction.validate();
  RunResult result;

  DynaMosa search(subject, options.search);
#ifndef READGEN_NO_INTERACTION
  std::unique_ptr<InteractionEngine> engine;
  if (options.interaction.max_times > 0) {
    if (!scorer) throw ConfigError("a scorer is required when Max_times > 0");
    engine = std::make_unique<InteractionEngine>(subject, options.interaction, options.search.seed,
                                                 options.search.population_size, options.search.max_generations,
                                                 options.search.step_budget, session, options.assertion_cap);
  }
#else
  (void)scorer;
#endif

  if (session) {
    const nlohmann::json started = {{"subject", subject.name()},
                                    {"targets", subject.targets().size()},
                                    {"interaction_compiled", interaction_compiled_in()},
                                    {"config", to_json(RunConfigFile{options.search, options.interaction})}};
    session->record("run-started", started);
    session->event("run-started", started);
  }

  std::size_t interactions = 0;
  std::size_t moments = 0;
  auto maybe_interact = [&]() {
#ifndef READGEN_NO_INTERACTION
    if (!engine || !engine->should_open(search.state())) return;
    try {
      result.moments.push_back(engine->run_moment(search.state(), *scorer));
    } catch (const ScorerError& e) {
      result.aborted = true;
      result.abort_reason = e.what();
    }
    interactions = engine->interactions_done();
    moments = engine->moments_done();
#endif
  };

  search.initialize();
  progress(session, search.state(), interactions, moments);
  maybe_interact();
  while (!result.aborted && !search.finished()) {
#ifndef READGEN_NO_INTERACTION
    search.evolve(engine ? engine->preference_source() : PreferenceSource{});
#else
    search.evolve();
#endif
    progress(session, search.state(), interactions, moments);
    maybe_interact();
  }

  result.generations = search.state().generation;
#ifndef READGEN_NO_INTERACTION
  if (engine) {
    result.preference = engine->preference();
    result.readability = engine->readability();
    result.interactions = engine->history();
  }
#endif
  result.suite = assemble_final_suite(subject, result.preference, search.state().archive,
                                      options.search.step_budget, options.assertion_cap);
  // A minimized test can reach targets its inner test did not; the archive
  // takes them so that both report the same coverage.
  result.archive = search.state().archive;
  for (const auto& t : result.suite.tests) {
    for (auto u : t.covers) {
      if (!result.archive.covered(u)) result.suite_only_targets.push_back(u);
      result.archive.offer(u, t.test.test, result.generations);
    }
  }
  result.suite_text = render_suite(subject, result.suite);
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (session) {
    nlohmann::json finished = run_summary_json(subject, result);
    session->record("run-finished", finished);
    finished["suite"] = result.suite_text;
    session->event("run-finished", finished);
  }
  return result;
}

nlohmann::json coverage_archive_json(const SubjectClass& subject, const CoverageArchive& archive) {
  nlohmann::json out = nlohmann::json::array();
  for (std::uint32_t target : archive.covered_targets()) {
    const auto& e = *archive.entry(target);
    out.push_back({{"target_id", subject.target(target).id},
                   {"covered_at", e.covered_at},
                   {"length", e.test.length()},
                   {"key", canonical_key(subject, e.test)},
                   {"rendered", render(subject, e.test)}});
  }
  return out;
}

nlohmann::json run_summary_json(const SubjectClass& subject, const RunResult& result) {
  return {{"subject", subject.name()},
          {"generations", result.generations},
          {"targets", subject.targets().size()},
          {"covered", result.archive.covered_count()},
          {"coverage", result.archive.coverage()},
          {"interactions", result.interactions.size()},
          {"moments", result.moments.size()},
          {"preference_size", result.preference.size()},
          {"readability_size", result.readability.size()},
          {"suite_tests", result.suite.tests.size()},
          {"suite_only_targets", result.suite_only_targets.size()},
          {"aborted", result.aborted},
          {"abort_reason", result.abort_reason},
          {"seconds", result.seconds}};
}

void write_run_outputs(const std::filesystem::path& directory, const SubjectClass& subject,
                       const RunOptions& options, const RunResult& result) {
  std::filesystem::create_directories(directory);
  auto write = [&](const char* name, const std::string& content) {
    std::ofstream out(directory / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + (directory / name).string() + "'");
    out << content;
  };
  write("config.json", to_json(RunConfigFile{options.search, options.interaction}).dump(2) + "\n");
  write("run.json", run_summary_json(subject, result).dump(2) + "\n");
  write("suite.t.txt", result.suite_text);
  write("suite.json", suite_json(subject, result.suite).dump(2) + "\n");
  write("coverage-archive.json", coverage_archive_json(subject, result.archive).dump(2) + "\n");
  write("preference-archive.json", preference_archive_json(subject, result.preference).dump(2) + "\n");
  write("readability-archive.json", readability_archive_json(subject, result.readability).dump(2) + "\n");
}

}  // namespace readgen
