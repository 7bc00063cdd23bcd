#include "readgen/session.hpp"

#include <ctime>
#include <stdexcept>

namespace readgen {

nlohmann::json strip_volatile(const nlohmann::json& record) {
  if (record.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = record.begin(); it != record.end(); ++it) {
      bool drop = false;
      for (const char* field : kVolatileFields) drop = drop || it.key() == field;
      if (!drop) out[it.key()] = strip_volatile(it.value());
    }
    return out;
  }
  if (record.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : record) out.push_back(strip_volatile(v));
    return out;
  }
  return record;
}

std::string timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

Session::Session(std::optional<std::filesystem::path> directory) : directory_(std::move(directory)) {
  if (!directory_) return;
  std::filesystem::create_directories(*directory_);
  log_.open(*directory_ / "session.jsonl", std::ios::trunc);
  events_file_.open(*directory_ / "events.jsonl", std::ios::trunc);
  if (!log_ || !events_file_) {
    throw std::runtime_error("cannot write session files in '" + directory_->string() + "'");
  }
}

void Session::record(const std::string& type, nlohmann::json payload) {
  std::lock_guard lock(mutex_);
  nlohmann::json line = {{"schema", kSessionSchema}, {"seq", record_seq_++}, {"type", type}, {"ts", timestamp_now()}};
  if (!payload.is_null()) line.update(payload);
  if (log_.is_open()) log_ << line.dump() << '\n' << std::flush;
  records_.push_back(std::move(line));
}

void Session::event(const std::string& type, nlohmann::json payload) {
  std::vector<Sink> sinks;
  nlohmann::json line;
  {
    std::lock_guard lock(mutex_);
    line = {{"schema", kEventSchema}, {"seq", event_seq_++}, {"type", type}, {"ts", timestamp_now()}};
    if (!payload.is_null()) line.update(payload);
    if (events_file_.is_open()) events_file_ << line.dump() << '\n';
    if (type != "generation-progress" || keep_progress_events) events_.push_back(line);
    sinks = sinks_;
  }
  for (const auto& sink : sinks) sink(line);
}

void Session::subscribe(Sink sink) {
  std::lock_guard lock(mutex_);
  sinks_.push_back(std::move(sink));
}

void Session::write_file(const std::filesystem::path& relative, const std::string& content) const {
  if (!directory_) return;
  const auto path = *directory_ / relative;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

std::vector<nlohmann::json> Session::records() const {
  std::lock_guard lock(mutex_);
  return records_;
}

std::vector<nlohmann::json> Session::events() const {
  std::lock_guard lock(mutex_);
  return events_;
}

std::vector<nlohmann::json> read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace readgen
