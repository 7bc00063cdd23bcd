#include "readgen/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "readgen/minimization.hpp"

namespace readgen {

GenerationGroup group_of(std::size_t generation) {
  if (generation == 0) return GenerationGroup::kG0;
  if (generation <= 9) return GenerationGroup::kG1To9;
  return GenerationGroup::kG10Plus;
}

std::string_view to_string(GenerationGroup group) {
  switch (group) {
    case GenerationGroup::kG0: return "g0";
    case GenerationGroup::kG1To9: return "g1-9";
    case GenerationGroup::kG10Plus: return "g10+";
  }
  return "g0";
}

nlohmann::json to_json(const TargetLengthRecord& r) {
  return {{"seed", r.seed},
          {"target_id", r.target_id},
          {"covered_at", r.covered_at},
          {"group", std::string(to_string(group_of(r.covered_at)))},
          {"lines", r.lines},
          {"characters", r.characters}};
}

TargetLengthRecord record_from_json(const nlohmann::json& j) {
  return {j.at("seed").get<std::uint64_t>(), j.at("target_id").get<std::string>(),
          j.at("covered_at").get<std::size_t>(), j.at("lines").get<std::size_t>(),
          j.at("characters").get<std::size_t>()};
}

std::vector<TargetLengthRecord> collect_records(const SubjectClass& subject, std::uint64_t seed,
                                                const CoverageArchive& archive, std::uint64_t step_budget) {
  std::vector<TargetLengthRecord> out;
  for (std::uint32_t target : archive.covered_targets()) {
    const auto& entry = *archive.entry(target);
    const MinimizedTest m = minimize_for_target(subject, entry.test, subject.target(target), step_budget);
    const BodyMetrics size = measure_body(subject, m.test);
    out.push_back({seed, subject.target(target).id, entry.covered_at, size.lines, size.characters});
  }
  return out;
}

std::vector<TargetLengthRecord> run_experiment1(const SubjectClass& subject, const SearchConfig& base,
                                                std::uint64_t first_seed, std::size_t seeds,
                                                const std::function<void(std::uint64_t, std::size_t)>& on_seed) {
  std::vector<TargetLengthRecord> out;
  for (std::size_t i = 0; i < seeds; ++i) {
    SearchConfig config = base;
    config.seed = first_seed + i;
    DynaMosa search(subject, config);
    search.initialize();
    while (!search.finished()) search.evolve();
    auto records = collect_records(subject, config.seed, search.state().archive, config.step_budget);
    if (on_seed) on_seed(config.seed, records.size());
    out.insert(out.end(), records.begin(), records.end());
  }
  return out;
}

std::array<std::vector<TargetLengthRecord>, 3> group(const std::vector<TargetLengthRecord>& records) {
  std::array<std::vector<TargetLengthRecord>, 3> out;
  for (const auto& r : records) out[static_cast<std::size_t>(group_of(r.covered_at))].push_back(r);
  return out;
}

std::optional<bool> Experiment1Report::min_lines_grow() const {
  const auto& g0 = groups[0];
  const auto& late = groups[2];
  if (g0.count == 0 || late.count == 0) return std::nullopt;
  return late.min_lines > g0.min_lines;
}

nlohmann::json Experiment1Report::rows() const {
  nlohmann::json out = {{"alpha", alpha}, {"groups", nlohmann::json::array()}, {"comparisons", nlohmann::json::array()}};
  for (const auto& g : groups) {
    out["groups"].push_back({{"group", std::string(to_string(g.group))},
                             {"count", g.count},
                             {"mean_lines", g.mean_lines},
                             {"min_lines", g.min_lines},
                             {"mean_characters", g.mean_characters},
                             {"min_characters", g.min_characters}});
  }
  for (const auto& c : comparisons) {
    nlohmann::json row = {{"measure", c.measure}, {"applicable", c.applicable}};
    if (c.applicable) {
      row.update({{"n_g0", c.n_early},
                  {"n_g1plus", c.n_late},
                  {"p_value", c.p_value},
                  {"cliffs_delta", c.effect.delta},
                  {"magnitude", std::string(to_string(c.effect.magnitude))},
                  {"significant", c.significant},
                  {"later_longer", c.later_longer}});
    }
    out["comparisons"].push_back(row);
  }
  const auto grow = min_lines_grow();
  out["min_lines_grow"] = grow ? nlohmann::json(*grow) : nlohmann::json(nullptr);
  return out;
}

Experiment1Report experiment1_report(const std::vector<TargetLengthRecord>& records, double alpha) {
  Experiment1Report report;
  report.alpha = alpha;
  const auto groups = group(records);
  for (std::size_t g = 0; g < 3; ++g) {
    GroupSummary& s = report.groups[g];
    s.group = static_cast<GenerationGroup>(g);
    s.count = groups[g].size();
    if (s.count == 0) continue;
    double lines = 0;
    double chars = 0;
    s.min_lines = groups[g].front().lines;
    s.min_characters = groups[g].front().characters;
    for (const auto& r : groups[g]) {
      lines += static_cast<double>(r.lines);
      chars += static_cast<double>(r.characters);
      s.min_lines = std::min(s.min_lines, r.lines);
      s.min_characters = std::min(s.min_characters, r.characters);
    }
    s.mean_lines = lines / static_cast<double>(s.count);
    s.mean_characters = chars / static_cast<double>(s.count);
  }

  // Per-run means: seed -> (sum, count) for the early and late sides.
  struct Acc {
    double lines = 0, chars = 0;
    std::size_t n = 0;
  };
  std::map<std::uint64_t, Acc> early;
  std::map<std::uint64_t, Acc> late;
  for (const auto& r : records) {
    Acc& a = (group_of(r.covered_at) == GenerationGroup::kG0 ? early : late)[r.seed];
    a.lines += static_cast<double>(r.lines);
    a.chars += static_cast<double>(r.characters);
    ++a.n;
  }
  for (std::size_t m = 0; m < 2; ++m) {
    GroupComparison& c = report.comparisons[m];
    c.measure = m == 0 ? "lines" : "characters";
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [seed, a] : early) xs.push_back((m == 0 ? a.lines : a.chars) / static_cast<double>(a.n));
    for (const auto& [seed, a] : late) ys.push_back((m == 0 ? a.lines : a.chars) / static_cast<double>(a.n));
    c.n_early = xs.size();
    c.n_late = ys.size();
    c.applicable = !xs.empty() && !ys.empty();
    if (!c.applicable) continue;
    c.p_value = wilcoxon_rank_sum(xs, ys);
    c.effect = cliffs_delta(xs, ys);
    c.significant = c.p_value < alpha;
    c.later_longer = c.effect.delta < 0.0;
  }

  std::ostringstream text;
  char line[160];
  std::snprintf(line, sizeof line, "%-6s %7s %11s %10s %11s %10s\n", "group", "records", "mean_lines", "min_lines",
                "mean_chars", "min_chars");
  text << line;
  for (const auto& s : report.groups) {
    if (s.count == 0) {
      std::snprintf(line, sizeof line, "%-6s %7zu %11s %10s %11s %10s\n", std::string(to_string(s.group)).c_str(),
                    s.count, "-", "-", "-", "-");
    } else {
      std::snprintf(line, sizeof line, "%-6s %7zu %11.2f %10zu %11.2f %10zu\n",
                    std::string(to_string(s.group)).c_str(), s.count, s.mean_lines, s.min_lines, s.mean_characters,
                    s.min_characters);
    }
    text << line;
  }
  text << "\ng0 vs g1+ (per-run mean length, rank-sum, alpha " << alpha << ")\n";
  for (const auto& c : report.comparisons) {
    if (!c.applicable) {
      text << c.measure << ": not applicable (a group is empty)\n";
      continue;
    }
    std::snprintf(line, sizeof line, "%-10s n=%zu/%zu  p=%.4g  delta=%+.3f (%s)  ", c.measure.c_str(), c.n_early,
                  c.n_late, c.p_value, c.effect.delta, std::string(to_string(c.effect.magnitude)).c_str());
    text << line;
    if (!c.significant) {
      text << "NOT SIGNIFICANT\n";
    } else {
      text << (c.later_longer ? "significant, later tests longer\n" : "significant, later tests shorter\n");
    }
  }
  const auto grow = report.min_lines_grow();
  text << "min lines g10+ > g0: " << (grow ? (*grow ? "yes" : "no") : "n/a") << '\n';
  report.text = text.str();
  return report;
}

}  // namespace readgen
