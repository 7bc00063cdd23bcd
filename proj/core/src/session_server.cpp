#include "readgen/session_server.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include <httplib.h>

#include "readgen/engine.hpp"

namespace readgen {

BindAddress parse_bind(const std::string& text) {
  BindAddress out;
  std::string port = text;
  const auto colon = text.rfind(':');
  if (colon != std::string::npos) {
    if (colon > 0) out.host = text.substr(0, colon);
    port = text.substr(colon + 1);
  }
  try {
    std::size_t used = 0;
    out.port = std::stoi(port, &used);
    if (used != port.size() || out.port < 0 || out.port > 65535) throw std::invalid_argument(port);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid bind address '" + text + "' (expected host:port)");
  }
  return out;
}

BindAddress bind_from_env(const BindAddress& fallback) {
  const char* env = std::getenv("READGEN_BIND");
  if (env == nullptr || *env == '\0') return fallback;
  return parse_bind(env);
}

struct SessionServer::State {
  std::mutex mutex;
  std::condition_variable changed;

  std::string subject;
  std::string run_state = "starting";  // searching, waiting, finished, aborted
  std::size_t generation = 0;
  double coverage = 0.0;
  std::size_t covered = 0;
  std::size_t interactions_done = 0;
  std::size_t moments_done = 0;
  nlohmann::json max_times = nullptr;
  std::map<std::string, nlohmann::json> preference;  // by target id
  std::optional<std::string> suite;

  std::optional<PendingInteraction> pending;
  std::optional<ScoreMap> delivery;
  std::map<std::size_t, ScoreMap> accepted;
  bool closed = false;
  bool stopping = false;

  std::vector<nlohmann::json> events;  // index == seq

  httplib::Server server;
  std::thread thread;

  void on_event(const nlohmann::json& e);
};

void SessionServer::State::on_event(const nlohmann::json& e) {
  {
    std::lock_guard lock(mutex);
    const std::string type = e.value("type", "");
    if (type == "run-started") {
      subject = e.value("subject", "");
      max_times = e["config"]["interaction"]["Max_times"];
      run_state = "searching";
    } else if (type == "generation-progress") {
      generation = e.value("generation", std::size_t{0});
      coverage = e.value("coverage", 0.0);
      covered = e.value("covered", std::size_t{0});
      moments_done = std::max(moments_done, e.value("moments_done", std::size_t{0}));
    } else if (type == "moment-opened") {
      moments_done = e.value("moment", moments_done);
    } else if (type == "scores-applied") {
      ++interactions_done;
      if (!e["preference"].is_null()) preference[e["preference"]["target_id"].get<std::string>()] = e["preference"];
    } else if (type == "moment-closed") {
      interactions_done = e.value("interactions_done", interactions_done);
    } else if (type == "run-finished") {
      suite = e.value("suite", "");
      run_state = e.value("aborted", false) ? "aborted" : "finished";
    }
    events.push_back(e);
  }
  changed.notify_all();
}

class SessionServer::HttpScorer : public Scorer {
 public:
  explicit HttpScorer(std::shared_ptr<State> state) : state_(std::move(state)) {}

  ScoreMap score(const PendingInteraction& pending) override {
    std::unique_lock lock(state_->mutex);
    if (state_->closed) throw ScorerError("score channel closed", true);
    state_->pending = pending;
    state_->delivery.reset();
    state_->run_state = "waiting";
    state_->changed.notify_all();
    state_->changed.wait(lock, [&] { return state_->delivery.has_value() || state_->closed; });
    if (!state_->delivery) {
      state_->pending.reset();
      throw ScorerError("score channel closed", true);
    }
    ScoreMap scores = std::move(*state_->delivery);
    state_->delivery.reset();
    return scores;
  }

 private:
  std::shared_ptr<State> state_;
};

SessionServer::SessionServer(Session& session)
    : state_(std::make_shared<State>()), scorer_(std::make_unique<HttpScorer>(state_)) {
  std::weak_ptr<State> weak = state_;
  session.subscribe([weak](const nlohmann::json& e) {
    if (auto state = weak.lock()) state->on_event(e);
  });

  auto& server = state_->server;
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  auto json_reply = [](httplib::Response& res, int status, const nlohmann::json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };

  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Last-Event-ID");
    res.status = 204;
  });
  server.Get("/api/status", [this, json_reply](const httplib::Request&, httplib::Response& res) {
    json_reply(res, 200, status());
  });
  server.Get("/api/pending", [this, json_reply](const httplib::Request&, httplib::Response& res) {
    json_reply(res, 200, pending());
  });
  server.Get("/api/preference-archive", [this, json_reply](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(state_->mutex);
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& [id, entry] : state_->preference) entries.push_back(entry);
    json_reply(res, 200, {{"entries", entries}});
  });
  server.Get("/api/suite", [this, json_reply](const httplib::Request&, httplib::Response& res) {
    std::lock_guard lock(state_->mutex);
    if (!state_->suite) {
      json_reply(res, 404, {{"error", "run has not finished"}});
      return;
    }
    res.set_content(*state_->suite, "text/plain; charset=utf-8");
  });
  server.Post(R"(/api/interactions/(\d+)/scores)",
              [this, json_reply](const httplib::Request& req, httplib::Response& res) {
                nlohmann::json body;
                try {
                  body = nlohmann::json::parse(req.body);
                } catch (const nlohmann::json::parse_error&) {
                  json_reply(res, 400, {{"error", "body is not valid JSON"}});
                  return;
                }
                const Reply reply = submit(std::stoull(req.matches[1].str()), body);
                json_reply(res, reply.status, reply.body);
              });
  server.Get("/api/events", [this](const httplib::Request& req, httplib::Response& res) {
    std::size_t next = 0;
    if (req.has_param("since")) {
      next = std::stoull(req.get_param_value("since"));
    } else if (req.has_header("Last-Event-ID")) {
      next = std::stoull(req.get_header_value("Last-Event-ID")) + 1;
    }
    res.set_header("Cache-Control", "no-cache");
    auto state = state_;
    res.set_chunked_content_provider("text/event-stream", [state, next](std::size_t, httplib::DataSink& sink) mutable {
      std::vector<nlohmann::json> batch;
      {
        std::unique_lock lock(state->mutex);
        state->changed.wait_for(lock, std::chrono::milliseconds(250),
                                [&] { return next < state->events.size() || state->stopping; });
        if (state->stopping && next >= state->events.size()) {
          sink.done();
          return true;
        }
        batch.assign(state->events.begin() + static_cast<std::ptrdiff_t>(next), state->events.end());
      }
      for (const auto& e : batch) {
        const std::string frame = "id: " + std::to_string(e.value("seq", next)) + "\nevent: " +
                                  e.value("type", "message") + "\ndata: " + e.dump() + "\n\n";
        if (!sink.is_writable() || !sink.write(frame.data(), frame.size())) return false;
        ++next;
        if (e.value("type", "") == "run-finished") {
          sink.done();
          return true;
        }
      }
      return true;
    });
  });
}

SessionServer::~SessionServer() {
  close_channel();
  stop();
}

int SessionServer::start(const BindAddress& address) {
  int port = address.port;
  if (port == 0) {
    port = state_->server.bind_to_any_port(address.host);
    if (port < 0) throw std::runtime_error("cannot bind " + address.host + ":0");
  } else if (!state_->server.bind_to_port(address.host, port)) {
    throw std::runtime_error("cannot bind " + address.host + ":" + std::to_string(port));
  }
  state_->thread = std::thread([state = state_] { state->server.listen_after_bind(); });
  return port;
}

void SessionServer::stop() {
  {
    std::lock_guard lock(state_->mutex);
    state_->stopping = true;
  }
  state_->changed.notify_all();
  state_->server.stop();
  if (state_->thread.joinable()) state_->thread.join();
}

Scorer& SessionServer::scorer() { return *scorer_; }

void SessionServer::close_channel() {
  {
    std::lock_guard lock(state_->mutex);
    state_->closed = true;
  }
  state_->changed.notify_all();
}

nlohmann::json SessionServer::status() const {
  std::lock_guard lock(state_->mutex);
  return {{"subject", state_->subject},
          {"state", state_->run_state},
          {"generation", state_->generation},
          {"coverage", state_->coverage},
          {"covered", state_->covered},
          {"interactions_done", state_->interactions_done},
          {"Max_times", state_->max_times},
          {"moments_done", state_->moments_done},
          {"pending", state_->pending ? nlohmann::json(state_->pending->id) : nlohmann::json(nullptr)},
          {"events", state_->events.size()}};
}

nlohmann::json SessionServer::pending() const {
  std::lock_guard lock(state_->mutex);
  return {{"state", state_->run_state},
          {"pending", state_->pending ? pending_json(*state_->pending) : nlohmann::json(nullptr)}};
}

SessionServer::Reply SessionServer::submit(std::size_t interaction, const nlohmann::json& body) {
  if (!body.is_object() || !body.contains("scores") || !body["scores"].is_object()) {
    return {400, {{"error", "expected {\"scores\": {candidate id: integer}}"}}};
  }
  ScoreMap scores;
  for (auto it = body["scores"].begin(); it != body["scores"].end(); ++it) {
    if (!it.value().is_number_integer()) {
      return {400, {{"error", "score for '" + it.key() + "' is not an integer"}}};
    }
    const auto v = it.value().get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      return {400, {{"error", "score for '" + it.key() + "' is out of range"}}};
    }
    scores[it.key()] = static_cast<int>(v);
  }

  std::unique_lock lock(state_->mutex);
  if (const auto done = state_->accepted.find(interaction); done != state_->accepted.end()) {
    if (done->second == scores) return {200, {{"status", "duplicate"}, {"interaction", interaction}}};
    return {409, {{"error", "interaction " + std::to_string(interaction) + " was already scored differently"}}};
  }
  if (!state_->pending || state_->pending->id != interaction) {
    return {409, {{"error", "interaction " + std::to_string(interaction) + " is not pending"}}};
  }
  try {
    validate_scores(*state_->pending, scores);
  } catch (const ScoreValidationError& e) {
    return {400, {{"error", e.what()}}};
  }
  state_->accepted[interaction] = scores;
  state_->delivery = std::move(scores);
  state_->pending.reset();
  state_->run_state = "searching";
  lock.unlock();
  state_->changed.notify_all();
  return {200, {{"status", "accepted"}, {"interaction", interaction}}};
}

}  // namespace readgen
