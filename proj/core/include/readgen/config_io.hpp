#pragma once

// JSON form of the run configuration. Interaction parameters keep their
// published names (Revise_frequency, Max_times, ...).

#include <filesystem>

#include <nlohmann/json.hpp>

#include "readgen/interaction.hpp"
#include "readgen/search.hpp"

namespace readgen {

nlohmann::json to_json(const SearchConfig& config);
nlohmann::json to_json(const InteractionConfig& config);

// Overlays the keys present in `j` onto `config`. Unknown keys and wrong
// types raise ConfigError.
void merge_json(const nlohmann::json& j, SearchConfig& config);
void merge_json(const nlohmann::json& j, InteractionConfig& config);

struct RunConfigFile {
  SearchConfig search;
  InteractionConfig interaction;
};

nlohmann::json to_json(const RunConfigFile& config);
void merge_json(const nlohmann::json& j, RunConfigFile& config);
RunConfigFile load_config(const std::filesystem::path& path, RunConfigFile base = {});

}  // namespace readgen
