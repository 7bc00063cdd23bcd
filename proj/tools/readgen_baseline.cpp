// Runs the search from the build with interaction compiled out and dumps the
// coverage archive and final suite as JSON, for comparison with runs of the
// full build at Max_times = 0.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "readgen/run.hpp"

using namespace readgen;

int main(int argc, char** argv) {
  CLI::App app{"readgen_baseline: plain search without the interaction path"};
  std::string subject_path;
  std::string out;
  RunOptions options;
  options.interaction.max_times = 0;
  app.add_option("--subject", subject_path, "Subject source (.sub)")->required();
  app.add_option("--seed", options.search.seed, "Random seed")->required();
  app.add_option("--budget", options.search.max_generations, "Generations")->capture_default_str();
  app.add_option("--population-size", options.search.population_size, "Population size")->capture_default_str();
  app.add_option("--out", out, "Output JSON file (default stdout)");
  CLI11_PARSE(app, argc, argv);

  try {
    const SubjectClass subject = load_subject(subject_path);
    const RunResult result = run_search(subject, options);
    nlohmann::json covered = nlohmann::json::array();
    for (auto u : result.archive.covered_targets()) covered.push_back(subject.target(u).id);
    const nlohmann::json dump = {{"interaction_compiled", interaction_compiled_in()},
                                 {"generations", result.generations},
                                 {"covered", covered},
                                 {"coverage_archive", coverage_archive_json(subject, result.archive)},
                                 {"suite", result.suite_text},
                                 {"seconds", result.seconds}};
    if (out.empty()) {
      std::cout << dump.dump(2) << '\n';
    } else {
      std::ofstream file(out);
      file << dump.dump(2) << '\n';
      if (!file) throw std::runtime_error("cannot write '" + out + "'");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
