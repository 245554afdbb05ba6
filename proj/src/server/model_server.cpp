#include "sleec/server/model_server.hpp"

#include <atomic>
#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include "sleec/analysis/analysis.hpp"
#include "sleec/engine/json_codec.hpp"
#include "sleec/syntax/parser.hpp"

namespace sleec::server {

using nlohmann::json;

struct ModelServer::Session {
  std::mutex mutex;  // serializes steps within the session
  engine::RuleMachine machine;
  std::string status = "loaded";  // loaded | running | stopped
  std::uint64_t steps = 0;
};

class ModelServer::Impl {
 public:
  explicit Impl(Options options) : options_(std::move(options)) { route(); }

  ~Impl() { shutdown(); }

  int start() {
    int port = options_.port;
    if (port == 0) {
      port = http_.bind_to_any_port(options_.host);
      if (port < 0) throw std::runtime_error("model server failed to bind");
    } else if (!http_.bind_to_port(options_.host, port)) {
      throw std::runtime_error("model server failed to bind to port " + std::to_string(port));
    }
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    http_.wait_until_ready();
    return port;
  }

  void shutdown() {
    if (thread_.joinable()) {
      http_.stop();
      thread_.join();
    }
  }

  const Options& options() const { return options_; }

 private:
  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void reply_error(httplib::Response& res, int status, const std::string& code,
                          const std::string& message, json detail = {}) {
    json err{{"code", code}, {"message", message}};
    if (!detail.empty()) err["detail"] = std::move(detail);
    reply(res, status, json{{"error", std::move(err)}});
  }

  std::shared_ptr<Session> find_session(const std::string& id) {
    std::lock_guard lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  void log_request(const std::string& path, int status, const std::string& session,
                   std::int64_t step, double server_us) {
    if (!options_.request_log) return;
    json line{{"path", path}, {"status", status}};
    if (!session.empty()) line["session"] = session;
    if (step >= 0) line["step"] = step;
    if (server_us >= 0) line["server_us"] = server_us;
    std::lock_guard lock(log_mutex_);
    *options_.request_log << line.dump() << "\n";
  }

  void route() {
    http_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, json{{"ok", true}});
    });

    http_.Post("/upload-model", [this](const httplib::Request& req, httplib::Response& res) {
      handle_upload(req, res);
    });

    http_.Post(R"(/sessions/([^/]+)/start)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 handle_lifecycle(req, res, "running");
               });
    http_.Post(R"(/sessions/([^/]+)/stop)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 handle_lifecycle(req, res, "stopped");
               });
    http_.Post(R"(/sessions/([^/]+)/step)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 handle_step(req, res);
               });
  }

  void handle_upload(const httplib::Request& req, httplib::Response& res) {
    engine::RuleMachine machine;
    std::size_t rule_count = 0;
    try {
      auto rs = syntax::parse_ruleset_unchecked(req.body);
      machine = engine::compile(rs);
      rule_count = rs.rules.size();
    } catch (const LexError& e) {
      reply_error(res, 400, "PARSE_ERROR", e.what(),
                  json{{"line", e.pos().line}, {"col", e.pos().col}});
      log_request("/upload-model", 400, "", -1, -1);
      return;
    } catch (const SyntaxError& e) {
      reply_error(res, 400, "PARSE_ERROR", e.what(),
                  json{{"line", e.pos().line}, {"col", e.pos().col}});
      log_request("/upload-model", 400, "", -1, -1);
      return;
    } catch (const CompileError& e) {
      json diags = json::array();
      for (const auto& d : e.diagnostics())
        if (d.severity == Severity::Error) diags.push_back(d.to_json());
      reply_error(res, 400, "COMPILE_ERROR", e.what(), std::move(diags));
      log_request("/upload-model", 400, "", -1, -1);
      return;
    }

    std::string id = req.has_param("session") ? req.get_param_value("session") : "";
    bool created = false;
    std::shared_ptr<Session> session;
    {
      std::lock_guard lock(sessions_mutex_);
      if (id.empty()) id = "sess-" + std::to_string(++session_counter_);
      auto it = sessions_.find(id);
      if (it == sessions_.end()) {
        session = std::make_shared<Session>();
        sessions_.emplace(id, session);
        created = true;
      } else {
        session = it->second;
      }
    }
    {
      // hot-swap: replace the machine, reset the counter, keep the status
      std::lock_guard lock(session->mutex);
      session->machine = std::move(machine);
      session->steps = 0;
      if (created) session->status = "loaded";
      const int status = created ? 201 : 200;
      reply(res, status,
            json{{"session", id}, {"status", session->status}, {"rules", rule_count}});
      log_request("/upload-model", status, id, -1, -1);
    }
  }

  void handle_lifecycle(const httplib::Request& req, httplib::Response& res,
                        const std::string& target) {
    const std::string id = req.matches[1];
    auto session = find_session(id);
    if (!session) {
      reply_error(res, 404, "UNKNOWN_SESSION", "no session '" + id + "'");
      log_request(req.path, 404, id, -1, -1);
      return;
    }
    std::lock_guard lock(session->mutex);
    session->status = target;  // idempotent transitions
    reply(res, 200, json{{"session", id}, {"status", session->status}});
    log_request(req.path, 200, id, -1, -1);
  }

  void handle_step(const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    auto session = find_session(id);
    if (!session) {
      reply_error(res, 404, "UNKNOWN_SESSION", "no session '" + id + "'");
      log_request(req.path, 404, id, -1, -1);
      return;
    }

    json snapshot_json;
    try {
      snapshot_json = json::parse(req.body);
    } catch (const json::parse_error& e) {
      reply_error(res, 400, "BAD_SNAPSHOT", e.what());
      log_request(req.path, 400, id, -1, -1);
      return;
    }

    std::lock_guard lock(session->mutex);
    if (session->status != "running") {
      reply_error(res, 409, "NOT_RUNNING",
                  "session is " + session->status + "; step needs a running session");
      log_request(req.path, 409, id, -1, -1);
      return;
    }

    engine::ConditionSnapshot snap;
    try {
      snap = engine::snapshot_from_json(snapshot_json);
    } catch (const std::invalid_argument& e) {
      reply_error(res, 400, "BAD_SNAPSHOT", e.what());
      log_request(req.path, 400, id, -1, -1);
      return;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto result = session->machine.step(snap, options_.snapshot_mode);
      const double us =
          std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0)
              .count();
      const std::uint64_t step_index = ++session->steps;
      reply(res, 200,
            json{{"result", engine::obligation_set_to_json(result)},
                 {"server_us", us},
                 {"step", step_index}});
      log_request(req.path, 200, id, static_cast<std::int64_t>(step_index), us);
    } catch (const StepError& e) {
      reply_error(res, 422, step_error_code_name(e.code()), e.what(), e.detail());
      log_request(req.path, 422, id, -1, -1);
    }
  }

  Options options_;
  httplib::Server http_;
  std::thread thread_;
  std::mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t session_counter_ = 0;
  std::mutex log_mutex_;
};

ModelServer::ModelServer(Options options) : impl_(std::make_unique<Impl>(std::move(options))) {}

ModelServer::~ModelServer() = default;

int ModelServer::start() {
  port_ = impl_->start();
  return port_;
}

void ModelServer::stop() { impl_->shutdown(); }

std::string ModelServer::base_url() const {
  return "http://" + impl_->options().host + ":" + std::to_string(port_);
}

}  // namespace sleec::server
