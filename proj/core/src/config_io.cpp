#include "readgen/config_io.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>

namespace readgen {

namespace {

using Setter = std::function<void(const nlohmann::json&)>;

template <typename T>
Setter set(T& field, const char* name) {
  return [&field, name](const nlohmann::json& v) {
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) throw ConfigError("");
      } else {
        if (!v.is_number_integer()) throw ConfigError("");
      }
      field = v.get<T>();
    } catch (const ConfigError&) {
      throw ConfigError(std::string("config key '") + name + "' has the wrong type: " + v.dump());
    }
  };
}

void apply(const nlohmann::json& j, const std::map<std::string, Setter>& setters, const char* section) {
  if (!j.is_object()) throw ConfigError(std::string("config section '") + section + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto s = setters.find(it.key());
    if (s == setters.end()) {
      throw ConfigError(std::string("unknown key '") + it.key() + "' in config section '" + section + "'");
    }
    s->second(it.value());
  }
}

}  // namespace

nlohmann::json to_json(const SearchConfig& c) {
  return {{"population_size", c.population_size}, {"max_generations", c.max_generations},
          {"crossover_rate", c.crossover_rate},   {"tournament_size", c.tournament_size},
          {"archive_probability", c.archive_probability}, {"step_budget", c.step_budget},
          {"max_length", c.max_length},           {"seed", c.seed}};
}

nlohmann::json to_json(const InteractionConfig& c) {
  return {{"Revise_frequency", c.revise_frequency == 0 ? nlohmann::json(nullptr) : nlohmann::json(c.revise_frequency)},
          {"Max_times", c.max_times},
          {"Revise_after_percentage_coverage", c.revise_after_percentage_coverage},
          {"Max_targets_interaction_moment", c.max_targets_interaction_moment},
          {"Percentage_to_revise", c.percentage_to_revise},
          {"Max_readability_score", c.max_readability_score},
          {"Readability_threshold", c.readability_threshold},
          {"P_preference_selection", c.p_preference_selection},
          {"Min_generation_for_interaction", c.min_generation_for_interaction},
          {"revisit_candidates", c.revisit_candidates}};
}

void merge_json(const nlohmann::json& j, SearchConfig& c) {
  apply(j,
        {{"population_size", set(c.population_size, "population_size")},
         {"max_generations", set(c.max_generations, "max_generations")},
         {"crossover_rate", set(c.crossover_rate, "crossover_rate")},
         {"tournament_size", set(c.tournament_size, "tournament_size")},
         {"archive_probability", set(c.archive_probability, "archive_probability")},
         {"step_budget", set(c.step_budget, "step_budget")},
         {"max_length", set(c.max_length, "max_length")},
         {"seed", set(c.seed, "seed")}},
        "search");
}

void merge_json(const nlohmann::json& j, InteractionConfig& c) {
  auto frequency = set(c.revise_frequency, "Revise_frequency");
  apply(j,
        {{"Revise_frequency",
          [&](const nlohmann::json& v) {
            if (v.is_null()) {
              c.revise_frequency = 0;
            } else {
              frequency(v);
            }
          }},
         {"Max_times", set(c.max_times, "Max_times")},
         {"Revise_after_percentage_coverage",
          set(c.revise_after_percentage_coverage, "Revise_after_percentage_coverage")},
         {"Max_targets_interaction_moment", set(c.max_targets_interaction_moment, "Max_targets_interaction_moment")},
         {"Percentage_to_revise", set(c.percentage_to_revise, "Percentage_to_revise")},
         {"Max_readability_score", set(c.max_readability_score, "Max_readability_score")},
         {"Readability_threshold", set(c.readability_threshold, "Readability_threshold")},
         {"P_preference_selection", set(c.p_preference_selection, "P_preference_selection")},
         {"Min_generation_for_interaction", set(c.min_generation_for_interaction, "Min_generation_for_interaction")},
         {"revisit_candidates", set(c.revisit_candidates, "revisit_candidates")}},
        "interaction");
}

nlohmann::json to_json(const RunConfigFile& c) {
  return {{"search", to_json(c.search)}, {"interaction", to_json(c.interaction)}};
}

void merge_json(const nlohmann::json& j, RunConfigFile& c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "search") {
      merge_json(it.value(), c.search);
    } else if (it.key() == "interaction") {
      merge_json(it.value(), c.interaction);
    } else {
      throw ConfigError("unknown config section '" + it.key() + "' (expected 'search' or 'interaction')");
    }
  }
}

RunConfigFile load_config(const std::filesystem::path& path, RunConfigFile base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  merge_json(j, base);
  return base;
}

}  // namespace readgen
