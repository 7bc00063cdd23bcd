#pragma once

// Append-only session log and the ordered event feed. Both are line-delimited
// JSON; every line carries "schema", "seq" and "type".

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace readgen {

inline constexpr const char* kSessionSchema = "readgen.session/1";
inline constexpr const char* kEventSchema = "readgen.events/1";

// Fields that vary between otherwise identical runs.
inline constexpr const char* kVolatileFields[] = {"ts", "elapsed_ms", "prep_ms", "seconds"};

// Copy of a record with the volatile fields removed, recursively.
nlohmann::json strip_volatile(const nlohmann::json& record);

class Session {
 public:
  using Sink = std::function<void(const nlohmann::json&)>;

  // Without a directory, records and events are only kept in memory.
  explicit Session(std::optional<std::filesystem::path> directory = std::nullopt);

  void record(const std::string& type, nlohmann::json payload);
  void event(const std::string& type, nlohmann::json payload);
  void subscribe(Sink sink);

  const std::optional<std::filesystem::path>& directory() const noexcept { return directory_; }
  // Writes a file relative to the session directory; no-op without one.
  void write_file(const std::filesystem::path& relative, const std::string& content) const;

  std::vector<nlohmann::json> records() const;
  std::vector<nlohmann::json> events() const;

  bool keep_progress_events = true;

 private:
  std::optional<std::filesystem::path> directory_;
  std::ofstream log_;
  std::ofstream events_file_;
  std::vector<nlohmann::json> records_;
  std::vector<nlohmann::json> events_;
  std::vector<Sink> sinks_;
  std::uint64_t record_seq_ = 0;
  std::uint64_t event_seq_ = 0;
  mutable std::mutex mutex_;
};

std::string timestamp_now();

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path);

}  // namespace readgen
