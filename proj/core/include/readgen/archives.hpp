#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "readgen/test_case.hpp"

namespace readgen {

struct PreferenceEntry {
  MinimizedTest test;
  int score = 0;
  std::size_t interaction = 0;
  std::size_t generation = 0;
};

// Best human-scored minimized test per interacted target.
class PreferenceArchive {
 public:
  const PreferenceEntry* find(std::uint32_t target) const;
  // Rejects an entry whose score is lower than the stored one.
  void store(std::uint32_t target, PreferenceEntry entry);

  const std::map<std::uint32_t, PreferenceEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::vector<const TestCase*> tests() const;

 private:
  std::map<std::uint32_t, PreferenceEntry> entries_;
};

struct ReadabilityRecord {
  int score = 0;
  std::size_t first_interaction = 0;
  std::size_t last_interaction = 0;
  std::uint32_t target = kNone;  // target of the first interaction
};

// Every scored minimization, keyed by canonical key.
class ReadabilityArchive {
 public:
  const ReadabilityRecord* find(const std::string& key) const;
  // Write-once unless `overwrite` is set.
  bool record(const std::string& key, int score, std::size_t interaction, std::uint32_t target,
              bool overwrite);

  const std::map<std::string, ReadabilityRecord>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, ReadabilityRecord> entries_;
};

}  // namespace readgen
