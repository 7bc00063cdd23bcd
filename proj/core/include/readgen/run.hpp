#pragma once

// A complete run: search, interaction moments, suite assembly and outputs.

#include <filesystem>
#include <string>
#include <vector>

#include "readgen/archives.hpp"
#include "readgen/config_io.hpp"
#include "readgen/engine.hpp"
#include "readgen/scoring.hpp"
#include "readgen/search.hpp"
#include "readgen/session.hpp"
#include "readgen/suite.hpp"

namespace readgen {

// False in builds compiled with READGEN_NO_INTERACTION.
bool interaction_compiled_in();

struct RunOptions {
  SearchConfig search;
  InteractionConfig interaction;
  std::size_t assertion_cap = 4;
};

struct RunResult {
  std::size_t generations = 0;
  bool aborted = false;  // scorer channel closed
  std::string abort_reason;
  CoverageArchive archive;
  PreferenceArchive preference;
  ReadabilityArchive readability;
  TestSuite suite;
  std::string suite_text;
  std::vector<InteractionSummary> interactions;
  std::vector<MomentReport> moments;
  // Targets first reached by a minimized suite test rather than the search.
  std::vector<std::uint32_t> suite_only_targets;
  double seconds = 0.0;
};

// The scorer may be null only when Max_times is 0.
RunResult run_search(const SubjectClass& subject, const RunOptions& options, Scorer* scorer = nullptr,
                     Session* session = nullptr);

// Writes config.json, run.json, suite.t.txt and the archive dumps.
void write_run_outputs(const std::filesystem::path& directory, const SubjectClass& subject,
                       const RunOptions& options, const RunResult& result);

nlohmann::json coverage_archive_json(const SubjectClass& subject, const CoverageArchive& archive);
nlohmann::json run_summary_json(const SubjectClass& subject, const RunResult& result);

}  // namespace readgen
