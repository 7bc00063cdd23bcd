#include "readgen/archives.hpp"

#include <stdexcept>

namespace readgen {

const PreferenceEntry* PreferenceArchive::find(std::uint32_t target) const {
  const auto it = entries_.find(target);
  return it == entries_.end() ? nullptr : &it->second;
}

void PreferenceArchive::store(std::uint32_t target, PreferenceEntry entry) {
  auto it = entries_.find(target);
  if (it != entries_.end() && entry.score < it->second.score) {
    throw std::logic_error("preference score for a target cannot decrease");
  }
  entries_.insert_or_assign(target, std::move(entry));
}

std::vector<const TestCase*> PreferenceArchive::tests() const {
  std::vector<const TestCase*> out;
  out.reserve(entries_.size());
  for (const auto& [target, entry] : entries_) out.push_back(&entry.test.test);
  return out;
}

const ReadabilityRecord* ReadabilityArchive::find(const std::string& key) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

bool ReadabilityArchive::record(const std::string& key, int score, std::size_t interaction, std::uint32_t target,
                                bool overwrite) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    entries_.emplace(key, ReadabilityRecord{score, interaction, interaction, target});
    return true;
  }
  if (!overwrite) return false;
  it->second.score = score;
  it->second.last_interaction = interaction;
  return true;
}

}  // namespace readgen
