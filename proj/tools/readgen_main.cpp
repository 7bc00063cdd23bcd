// readgen command-line tool. Exit codes: 0 success, 1 runtime failure,
// 2 configuration error, 3 subject error, 4 aborted session.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "readgen/config_io.hpp"
#include "readgen/experiment.hpp"
#include "readgen/run.hpp"
#include "readgen/session_server.hpp"
#include "readgen/subject.hpp"

namespace fs = std::filesystem;
using namespace readgen;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kSubject = 3, kAborted = 4 };

std::atomic<bool> g_interrupted{false};

struct SubjectFileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Missing or unreadable subject files exit with the subject code too.
SubjectClass open_subject(const std::string& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw SubjectFileError("cannot open subject file '" + path + "'");
  return load_subject(path);
}

// Flags that override the config file only when given on the command line.
class ConfigFlags {
 public:
  void add(CLI::App& app, RunConfigFile& defaults) {
    flags_ = defaults;
#define FLAG(name, section, field, help)                                                        \
  bind(app, name, flags_.section.field,                                                        \
       [](RunConfigFile& d, const RunConfigFile& s) { d.section.field = s.section.field; }, help)
    FLAG("--population-size", search, population_size,
         "Population size");
    FLAG("--budget", search, max_generations,
         "Search budget in generations");
    FLAG("--crossover-rate", search, crossover_rate,
         "Crossover probability");
    FLAG("--tournament-size", search, tournament_size,
         "Tournament size");
    FLAG("--archive-probability", search, archive_probability,
         "Chance of breeding from an archive");
    FLAG("--step-budget", search, step_budget,
         "Interpreter steps per test execution");
    FLAG("--max-length", search, max_length,
         "Maximum statements per test");
    FLAG("--revise-frequency", interaction, revise_frequency,
         "Generations between interaction moments (0: budget / 5)");
    FLAG("--max-times", interaction, max_times,
         "Maximum single interactions (0 disables interaction)");
    FLAG("--revise-after-percentage-coverage", interaction, revise_after_percentage_coverage,
         "Coverage fraction required before interacting");
    FLAG("--max-targets-interaction-moment", interaction, max_targets_interaction_moment,
         "Single interactions per moment");
    FLAG("--percentage-to-revise", interaction, percentage_to_revise,
         "Fraction of the population offered as candidates");
    FLAG("--max-readability-score", interaction, max_readability_score,
         "Top of the score scale");
    FLAG("--readability-threshold", interaction, readability_threshold,
         "Minimum score kept in the preference archive");
    FLAG("--p-preference-selection", interaction, p_preference_selection,
         "Chance of breeding from the preference archive");
    FLAG("--min-generation-for-interaction", interaction, min_generation_for_interaction,
         "Earliest generation for an interaction moment");
#undef FLAG
    auto* revisit = app.add_flag("--revisit-candidates", flags_.interaction.revisit_candidates,
                                 "Ask again about already scored minimizations");
    bindings_.push_back({revisit, [](RunConfigFile& d, const RunConfigFile& s) {
                           d.interaction.revisit_candidates = s.interaction.revisit_candidates;
                         }});
  }

  void apply(RunConfigFile& target) const {
    for (const auto& b : bindings_) {
      if (b.option->count() > 0) b.copy(target, flags_);
    }
  }

 private:
  using Copy = std::function<void(RunConfigFile&, const RunConfigFile&)>;
  struct Binding {
    CLI::Option* option;
    Copy copy;
  };

  template <typename T>
  void bind(CLI::App& app, const std::string& name, T& field, Copy copy, const std::string& help) {
    bindings_.push_back({app.add_option(name, field, help), std::move(copy)});
  }

  RunConfigFile flags_;
  std::vector<Binding> bindings_;
};

std::string default_subject() {
#ifdef READGEN_DEFAULT_SUBJECT
  return READGEN_DEFAULT_SUBJECT;
#else
  return "array_int_list.sub";
#endif
}

fs::path output_root() {
  const char* env = std::getenv("READGEN_OUTPUT_ROOT");
  return env && *env ? fs::path(env) : fs::path("runs");
}

fs::path run_directory(const std::string& out, const SubjectClass& subject, std::uint64_t seed,
                       const std::string& suffix = "") {
  if (!out.empty()) return out;
  return output_root() / (subject.name() + "-seed" + std::to_string(seed) + suffix);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

void print_summary(const RunResult& result, const fs::path& dir) {
  std::cout << "generations " << result.generations << ", coverage " << result.archive.covered_count() << '/'
            << result.archive.target_count() << " (" << result.archive.coverage() * 100.0 << "%), interactions "
            << result.interactions.size() << " in " << result.moments.size() << " moment(s), suite "
            << result.suite.tests.size() << " test(s)\n";
  std::cout << "outputs in " << dir.string() << '\n';
}

// Closes the scorer channel when SIGINT arrives so a blocked run can end.
class InterruptWatcher {
 public:
  explicit InterruptWatcher(std::function<void()> on_interrupt) : on_interrupt_(std::move(on_interrupt)) {
    std::signal(SIGINT, [](int) { g_interrupted = true; });
    thread_ = std::thread([this] {
      while (!done_) {
        if (g_interrupted.exchange(false)) on_interrupt_();
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
      }
    });
  }
  ~InterruptWatcher() {
    done_ = true;
    thread_.join();
    std::signal(SIGINT, SIG_DFL);
  }

 private:
  std::function<void()> on_interrupt_;
  std::atomic<bool> done_{false};
  std::thread thread_;
};

int finish(const RunResult& result, const SubjectClass& subject, const RunOptions& options, const fs::path& dir) {
  write_run_outputs(dir, subject, options, result);
  print_summary(result, dir);
  if (result.aborted) {
    std::cerr << "session aborted: " << result.abort_reason << '\n';
    return kAborted;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"readgen: search-based unit test generation with readability interaction"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Generate a test suite");
  std::string subject_path = default_subject();
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::string mode = "headless";
  std::string bind_text;
  double linger = 0.0;
  RunConfigFile defaults;
  ConfigFlags run_flags;
  run->add_option("--subject", subject_path, "Subject source (.sub)")->capture_default_str();
  run->add_option("--config", config_path, "JSON config file; flags override it");
  run->add_option("--seed", seed, "Random seed")->required();
  run->add_option("--out", out_dir, "Output directory (default $READGEN_OUTPUT_ROOT/<subject>-seed<seed>)");
  run->add_option("--mode", mode, "Scorer: headless, console or server")
      ->check(CLI::IsMember({"headless", "console", "server"}))
      ->capture_default_str();
  run->add_option("--bind", bind_text, "Server address host:port (READGEN_BIND overrides the default)");
  run->add_option("--linger", linger, "Seconds to keep serving after the run ends (server mode)");
  run_flags.add(*run, defaults);

  // replay
  auto* replay = app.add_subcommand("replay", "Re-run a recorded session with its recorded scores");
  std::string log_path;
  std::string replay_subject = default_subject();
  std::string replay_out;
  std::optional<std::uint64_t> replay_seed;
  replay->add_option("--log", log_path, "session.jsonl of the recorded run")->required();
  replay->add_option("--subject", replay_subject, "Subject source (.sub)")->capture_default_str();
  replay->add_option("--seed", replay_seed, "Seed (defaults to the recorded one)");
  replay->add_option("--out", replay_out, "Output directory");

  // exp1
  auto* exp1 = app.add_subcommand("exp1", "Minimized test length by coverage generation over many seeds");
  std::string exp_subject = default_subject();
  std::size_t seeds = 30;
  std::uint64_t first_seed = 1;
  std::size_t exp_budget = 1000;
  std::size_t exp_population = 50;
  std::string exp_out;
  exp1->add_option("--subject", exp_subject, "Subject source (.sub)")->capture_default_str();
  exp1->add_option("--seeds", seeds, "Number of seeds")->capture_default_str();
  exp1->add_option("--first-seed", first_seed, "First seed")->capture_default_str();
  exp1->add_option("--budget", exp_budget, "Generations per run")->capture_default_str();
  exp1->add_option("--population-size", exp_population, "Population size")->capture_default_str();
  exp1->add_option("--out", exp_out, "Output directory (default $READGEN_OUTPUT_ROOT/exp1-<subject>)");

  // render-suite
  auto* render_cmd = app.add_subcommand("render-suite", "Parse a suite file and print it canonically");
  std::string suite_path;
  std::string render_subject = default_subject();
  bool show_coverage = false;
  render_cmd->add_option("suite", suite_path, "Suite file (.t.txt)")->required();
  render_cmd->add_option("--subject", render_subject, "Subject source (.sub)")->capture_default_str();
  render_cmd->add_flag("--coverage", show_coverage, "Report covered targets per test");

  // validate-subject
  auto* validate = app.add_subcommand("validate-subject", "Parse a subject and report its targets");
  std::string validate_path;
  bool print_source = false;
  bool list_targets = false;
  validate->add_option("subject", validate_path, "Subject source (.sub)")->required();
  validate->add_flag("--print", print_source, "Print the canonical source");
  validate->add_flag("--targets", list_targets, "List every coverage target");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*run) {
      const SubjectClass subject = open_subject(subject_path);
      RunConfigFile config = config_path.empty() ? defaults : load_config(config_path, defaults);
      run_flags.apply(config);
      config.search.seed = seed;
      RunOptions options{config.search, config.interaction};
      options.search.validate();
      options.interaction.validate();
      const fs::path dir = run_directory(out_dir, subject, seed);
      Session session(dir);

      if (mode == "server") {
        SessionServer server(session);
        const BindAddress address = bind_text.empty() ? bind_from_env(BindAddress{}) : parse_bind(bind_text);
        const int port = server.start(address);
        std::cout << "serving on http://" << address.host << ':' << port << "/api/status" << std::endl;
        RunResult result;
        {
          InterruptWatcher watcher([&] { server.close_channel(); });
          result = run_search(subject, options, &server.scorer(), &session);
        }
        const int code = finish(result, subject, options, dir);
        if (linger > 0) std::this_thread::sleep_for(std::chrono::duration<double>(linger));
        server.stop();
        return code;
      }
      std::unique_ptr<Scorer> scorer;
      if (mode == "console") {
        scorer = std::make_unique<ConsoleScorer>(std::cin, std::cout);
      } else {
        scorer = std::make_unique<HeuristicScorer>();
      }
      const RunResult result = run_search(subject, options, scorer.get(), &session);
      return finish(result, subject, options, dir);
    }

    if (*replay) {
      const auto records = read_jsonl(log_path);
      const auto started = std::find_if(records.begin(), records.end(),
                                        [](const auto& r) { return r.value("type", "") == "run-started"; });
      if (started == records.end()) throw ConfigError("log '" + log_path + "' has no run-started record");
      RunConfigFile config;
      merge_json((*started)["config"], config);
      if (replay_seed) config.search.seed = *replay_seed;
      const SubjectClass subject = open_subject(replay_subject);
      if (started->value("subject", "") != subject.name()) {
        throw ConfigError("log was recorded for subject '" + started->value("subject", "") + "', not '" +
                          subject.name() + "'");
      }
      RunOptions options{config.search, config.interaction};
      const fs::path dir = run_directory(replay_out, subject, config.search.seed, "-replay");
      Session session(dir);
      ReplayScorer scorer(records);
      const RunResult result = run_search(subject, options, &scorer, &session);
      const int code = finish(result, subject, options, dir);
      if (code == kOk && scorer.remaining() > 0) {
        std::cerr << "warning: " << scorer.remaining() << " recorded interaction(s) were not replayed\n";
      }
      return code;
    }

    if (*exp1) {
      const SubjectClass subject = open_subject(exp_subject);
      if (seeds == 0) throw ConfigError("--seeds must be positive");
      SearchConfig base;
      base.max_generations = exp_budget;
      base.population_size = exp_population;
      base.validate();
      const fs::path dir = exp_out.empty() ? output_root() / ("exp1-" + subject.name()) : fs::path(exp_out);
      const auto records = run_experiment1(subject, base, first_seed, seeds, [](std::uint64_t s, std::size_t n) {
        std::cerr << "seed " << s << ": " << n << " records\n";
      });
      std::ostringstream lines;
      for (const auto& r : records) lines << to_json(r).dump() << '\n';
      const Experiment1Report report = experiment1_report(records);
      write_text(dir / "records.jsonl", lines.str());
      write_text(dir / "report.txt", report.text);
      write_text(dir / "report.json", report.rows().dump(2) + "\n");
      std::cout << report.text << "outputs in " << dir.string() << '\n';
      return kOk;
    }

    if (*render_cmd) {
      const SubjectClass subject = open_subject(render_subject);
      std::ifstream in(suite_path);
      if (!in) throw std::runtime_error("cannot open '" + suite_path + "'");
      std::stringstream text;
      text << in.rdbuf();
      const auto tests = parse_tests(subject, text.str());
      for (std::size_t i = 0; i < tests.size(); ++i) {
        if (i > 0) std::cout << '\n';
        if (show_coverage) {
          const ExecutionTrace trace = execute(subject, tests[i].test);
          std::cout << "// covers " << covered_targets(subject, trace).size() << " target(s)\n";
        }
        std::cout << render(subject, tests[i].test, tests[i].assertions, std::nullopt,
                            RenderOptions{tests[i].name.empty() ? "test" : tests[i].name});
      }
      return kOk;
    }

    if (*validate) {
      const SubjectClass subject = open_subject(validate_path);
      std::size_t counts[4] = {0, 0, 0, 0};
      for (const auto& t : subject.targets()) ++counts[static_cast<int>(t.kind)];
      std::cout << subject.name() << ": " << subject.routines().size() << " routine(s), "
                << subject.branches().size() << " branch(es), " << subject.targets().size() << " target(s) ("
                << counts[0] << " line, " << counts[1] + counts[2] << " branch, " << counts[3] << " mutant)\n";
      if (list_targets) {
        for (const auto& t : subject.targets()) {
          std::cout << t.id << "\t" << subject.routine(t.routine).name << "\n";
        }
      }
      if (print_source) std::cout << print_subject(subject);
      return kOk;
    }
  } catch (const SubjectError& e) {
    std::cerr << "subject error: " << e.what() << '\n';
    return kSubject;
  } catch (const SubjectFileError& e) {
    std::cerr << "subject error: " << e.what() << '\n';
    return kSubject;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const TestParseError& e) {
    std::cerr << "test parse error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
