#include "readgen/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace readgen {

int heuristic_score(const TestCase& test, int max_score, const HeuristicWeights& weights) {
  const std::size_t length = test.length();
  long penalty = 0;
  if (length > weights.free_length && weights.length_step > 0) {
    penalty += static_cast<long>((length - weights.free_length) / weights.length_step);
  }
  auto large = [&](std::int64_t v) { return v > weights.large_literal_bound || v < -weights.large_literal_bound; };
  for (std::size_t i = 0; i < length; ++i) {
    const Statement& s = test.statements[i];
    if (s.kind == Statement::Kind::kPrimitive && s.primitive_type == ValueType::kInt && large(s.int_value)) {
      penalty += weights.large_literal;
    }
    for (std::int32_t v : s.array) {
      if (large(v)) penalty += weights.large_literal;
    }
    for (const auto& a : s.args) {
      if (a.kind == Argument::Kind::kInt && large(a.int_value)) penalty += weights.large_literal;
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (test.statements[j] == s) {
        penalty += weights.repeated_statement;
        break;
      }
    }
  }
  const long score = static_cast<long>(max_score) + weights.bias - penalty;
  return static_cast<int>(std::clamp<long>(score, 0, max_score));
}

ScoreMap HeuristicScorer::score(const PendingInteraction& pending) {
  ScoreMap out;
  for (const auto& c : pending.unseen) out[c.id] = heuristic_score(c.test.test, pending.max_score, weights_);
  return out;
}

ScriptedScorer::ScriptedScorer(std::vector<std::vector<int>> sequence) {
  auto queue = std::make_shared<std::deque<std::vector<int>>>(sequence.begin(), sequence.end());
  script_ = [queue](const PendingInteraction& pending) {
    if (queue->empty()) throw ScorerError("scripted scores exhausted", true);
    const auto scores = queue->front();
    queue->pop_front();
    ScoreMap out;
    for (std::size_t i = 0; i < pending.unseen.size(); ++i) {
      out[pending.unseen[i].id] = i < scores.size() ? scores[i] : scores.empty() ? 0 : scores.back();
    }
    return out;
  };
}

ScoreMap ScriptedScorer::score(const PendingInteraction& pending) {
  ++calls_;
  return script_(pending);
}

std::string render_pending(const PendingInteraction& pending) {
  std::ostringstream out;
  out << "Interaction " << pending.id << " (generation " << pending.generation << ")\n";
  out << pending.target_description;
  for (const auto& r : pending.references) {
    out << "\nAlready scored " << *r.score << " [" << r.id << "]:\n" << r.test.rendered;
  }
  if (pending.incumbent) {
    out << "\nCurrent preferred test, score " << *pending.incumbent->score << ":\n"
        << pending.incumbent->test.rendered;
  }
  for (const auto& c : pending.unseen) {
    out << "\nCandidate " << c.id << " (" << c.test.test.length() << " statements):\n" << c.test.rendered;
  }
  return out.str();
}

ScoreMap ConsoleScorer::score(const PendingInteraction& pending) {
  out_ << '\n' << render_pending(pending) << '\n';
  ScoreMap scores;
  for (const auto& c : pending.unseen) {
    for (;;) {
      out_ << "Score for " << c.id << " [0-" << pending.max_score << "]: " << std::flush;
      std::string line;
      if (!std::getline(in_, line)) throw ScorerError("console input closed", true);
      line.erase(0, line.find_first_not_of(" \t\r"));
      line.erase(line.find_last_not_of(" \t\r") + 1);
      int value = -1;
      const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value);
      if (ec == std::errc() && ptr == line.data() + line.size() && value >= 0 && value <= pending.max_score) {
        scores[c.id] = value;
        break;
      }
      out_ << "Please enter an integer between 0 and " << pending.max_score << ".\n";
    }
  }
  return scores;
}

ReplayScorer::ReplayScorer(const std::vector<nlohmann::json>& session_records) {
  for (const auto& r : session_records) {
    const std::string type = r.value("type", "");
    Recorded rec;
    if (type == "scorer-failed" && !r.value("channel_closed", true)) {
      rec.interaction = r.at("interaction").get<std::size_t>();
      rec.failed = true;
      pending_.push_back(std::move(rec));
      continue;
    }
    if (type != "interaction") continue;
    rec.interaction = r.at("interaction").get<std::size_t>();
    for (const auto& c : r.at("unseen")) {
      rec.scores.emplace_back(c.at("key").get<std::string>(), c.at("score").get<int>());
    }
    pending_.push_back(std::move(rec));
  }
}

ScoreMap ReplayScorer::score(const PendingInteraction& pending) {
  if (pending_.empty()) {
    throw ScorerError("replay log exhausted at interaction " + std::to_string(pending.id), true);
  }
  const Recorded rec = pending_.front();
  pending_.pop_front();
  if (rec.failed) throw ScorerError("recorded scorer failure at interaction " + std::to_string(rec.interaction), false);
  if (rec.scores.size() != pending.unseen.size()) {
    throw ScorerError("replay mismatch at interaction " + std::to_string(pending.id) + ": recorded " +
                          std::to_string(rec.scores.size()) + " candidates, presented " +
                          std::to_string(pending.unseen.size()),
                      true);
  }
  ScoreMap out;
  for (std::size_t i = 0; i < rec.scores.size(); ++i) {
    const auto& c = pending.unseen[i];
    if (c.test.canonical_key != rec.scores[i].first) {
      throw ScorerError("replay mismatch at interaction " + std::to_string(pending.id) + ": candidate " + c.id +
                            " has key " + c.test.canonical_key + ", recorded " + rec.scores[i].first,
                        true);
    }
    out[c.id] = rec.scores[i].second;
  }
  return out;
}

}  // namespace readgen
