#pragma once

// Scorers answer a pending interaction with one score per unseen candidate.

#include <deque>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "readgen/interaction.hpp"

namespace readgen {

class ScorerError : public std::runtime_error {
 public:
  // A closed channel ends the run; other failures only end the moment.
  ScorerError(const std::string& message, bool channel_closed)
      : std::runtime_error(message), channel_closed_(channel_closed) {}

  bool channel_closed() const noexcept { return channel_closed_; }

 private:
  bool channel_closed_;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual ScoreMap score(const PendingInteraction& pending) = 0;
};

struct HeuristicWeights {
  std::size_t free_length = 4;    // statements allowed before the length penalty starts
  std::size_t length_step = 2;    // statements per penalty point
  int large_literal = 1;          // per literal with |v| > large_literal_bound
  std::int64_t large_literal_bound = 100;
  int repeated_statement = 1;     // per statement identical to an earlier one
  int bias = 0;                   // added before clamping
};

// Deterministic stand-in for a tester. Not a readability model.
int heuristic_score(const TestCase& test, int max_score, const HeuristicWeights& weights = {});

class HeuristicScorer : public Scorer {
 public:
  explicit HeuristicScorer(HeuristicWeights weights = {}) : weights_(weights) {}
  ScoreMap score(const PendingInteraction& pending) override;

 private:
  HeuristicWeights weights_;
};

// Delegates to a callback; tests use it to force engine paths.
class ScriptedScorer : public Scorer {
 public:
  using Script = std::function<ScoreMap(const PendingInteraction&)>;

  explicit ScriptedScorer(Script script) : script_(std::move(script)) {}
  // Each request consumes the next list, assigned to unseen candidates in
  // order. Running out closes the channel.
  explicit ScriptedScorer(std::vector<std::vector<int>> sequence);

  ScoreMap score(const PendingInteraction& pending) override;
  std::size_t calls() const noexcept { return calls_; }

 private:
  Script script_;
  std::size_t calls_ = 0;
};

// Line-oriented prompts; re-prompts until each score is a valid integer.
class ConsoleScorer : public Scorer {
 public:
  ConsoleScorer(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  ScoreMap score(const PendingInteraction& pending) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

// Replays the scores recorded in a session log, checking that the engine
// presents the same minimizations in the same order. Recoverable scorer
// failures in the log are replayed as failures.
class ReplayScorer : public Scorer {
 public:
  explicit ReplayScorer(const std::vector<nlohmann::json>& session_records);
  ScoreMap score(const PendingInteraction& pending) override;
  std::size_t remaining() const noexcept { return pending_.size(); }

 private:
  struct Recorded {
    std::size_t interaction = 0;
    bool failed = false;  // recoverable failure recorded in place of scores
    std::vector<std::pair<std::string, int>> scores;  // canonical key, score
  };
  std::deque<Recorded> pending_;
};

// Human-facing text for a pending interaction: target, references,
// incumbent and the candidates awaiting scores.
std::string render_pending(const PendingInteraction& pending);

}  // namespace readgen
