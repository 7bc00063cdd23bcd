#pragma once

// Local HTTP service in front of a blocked run: exposes the pending
// interaction, accepts score submissions and streams session events (SSE).
//
//   GET  /api/status                      snapshot
//   GET  /api/pending                     pending interaction or null
//   POST /api/interactions/{id}/scores    {"scores": {"c0": 7, ...}}
//   GET  /api/preference-archive          current preference entries
//   GET  /api/suite                       final suite text once finished
//   GET  /api/events?since=N              event stream, resumable by seq

#include <memory>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "readgen/scoring.hpp"
#include "readgen/session.hpp"

namespace readgen {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 8765;
};

// "host:port", ":port" or "port".
BindAddress parse_bind(const std::string& text);
// READGEN_BIND when set, else `fallback`.
BindAddress bind_from_env(const BindAddress& fallback);

class SessionServer {
 public:
  // Subscribes to the session's event feed.
  explicit SessionServer(Session& session);
  ~SessionServer();
  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  // Binds and serves on a background thread; returns the bound port
  // (useful with port 0). Throws std::runtime_error when binding fails.
  int start(const BindAddress& address);
  void stop();

  // Blocks in score() until a valid submission for the pending id arrives
  // or the server closes the channel.
  Scorer& scorer();
  void close_channel();

  nlohmann::json status() const;
  nlohmann::json pending() const;

  // Result of a submission as returned over HTTP.
  struct Reply {
    int status = 200;
    nlohmann::json body;
  };
  Reply submit(std::size_t interaction, const nlohmann::json& body);

 private:
  struct State;
  class HttpScorer;
  std::shared_ptr<State> state_;
  std::unique_ptr<HttpScorer> scorer_;
};

}  // namespace readgen
