#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <httplib.h>

#include <set>
#include <sstream>
#include <thread>

#include "sleec/bench/generators.hpp"
#include "sleec/bench/scenario.hpp"
#include "sleec/engine/json_codec.hpp"
#include "sleec/engine/machine.hpp"
#include "sleec/server/model_server.hpp"

using namespace sleec;
using nlohmann::json;

namespace {

struct ServerFixture {
  server::ModelServer srv;
  httplib::Client client;

  ServerFixture() : srv(), client(make()) {}

  explicit ServerFixture(server::ModelServer::Options opts)
      : srv(std::move(opts)), client(make()) {}

  std::string make() {
    const int port = srv.start();
    return "http://127.0.0.1:" + std::to_string(port);
  }

  json post(const std::string& path, const std::string& body, int expect_status) {
    auto res = client.Post(path, body, "application/json");
    REQUIRE(res);
    CHECK(res->status == expect_status);
    return json::parse(res->body);
  }
};

std::string upload_and_start(ServerFixture& f, const std::string& source,
                             const std::string& session = "") {
  const std::string path =
      session.empty() ? "/upload-model" : "/upload-model?session=" + session;
  auto res = f.client.Post(path, source, "text/plain");
  REQUIRE(res);
  REQUIRE((res->status == 200 || res->status == 201));
  const std::string id = json::parse(res->body)["session"];
  f.post("/sessions/" + id + "/start", "", 200);
  return id;
}

}  // namespace

TEST_CASE("server: upload returns 201 and a session id") {
  ServerFixture f;
  auto res = f.client.Post("/upload-model", bench::scenario_source(), "text/plain");
  REQUIRE(res);
  CHECK(res->status == 201);
  const auto body = json::parse(res->body);
  CHECK(body["status"] == "loaded");
  CHECK(body["rules"] == 9);
  CHECK_FALSE(body["session"].get<std::string>().empty());
}

TEST_CASE("server: parse failures yield 400 with positions") {
  ServerFixture f;
  auto res = f.client.Post("/upload-model", "RULE r1", "text/plain");
  REQUIRE(res);
  CHECK(res->status == 400);
  const auto body = json::parse(res->body);
  CHECK(body["error"]["code"] == "PARSE_ERROR");
  CHECK(body["error"]["detail"]["line"] == 1);

  auto res2 = f.client.Post("/upload-model",
                            "MONITORED a : BOOLEAN\nRULE r IF a THEN ghost", "text/plain");
  REQUIRE(res2);
  CHECK(res2->status == 400);
  CHECK(json::parse(res2->body)["error"]["code"] == "COMPILE_ERROR");
}

TEST_CASE("server: lifecycle transitions and errors") {
  ServerFixture f;
  const std::string id = upload_and_start(f, bench::scenario_source());

  // stop twice is idempotent
  CHECK(f.post("/sessions/" + id + "/stop", "", 200)["status"] == "stopped");
  CHECK(f.post("/sessions/" + id + "/stop", "", 200)["status"] == "stopped");

  // step on a stopped session is a conflict
  const auto snap = engine::snapshot_to_json(
      bench::generate_test_cases(bench::load_scenario(), 1, 3)[0].snapshot);
  CHECK(f.post("/sessions/" + id + "/step", snap.dump(), 409)["error"]["code"] ==
        "NOT_RUNNING");

  CHECK(f.post("/sessions/" + id + "/start", "", 200)["status"] == "running");
  f.post("/sessions/" + id + "/step", snap.dump(), 200);

  CHECK(f.post("/sessions/ghost/start", "", 404)["error"]["code"] == "UNKNOWN_SESSION");
  CHECK(f.post("/sessions/ghost/step", snap.dump(), 404)["error"]["code"] ==
        "UNKNOWN_SESSION");
}

TEST_CASE("server: step responses carry result, server_us, and step counter") {
  ServerFixture f;
  const std::string id = upload_and_start(f, bench::scenario_source());
  const auto rs = bench::load_scenario();
  const auto cases = bench::generate_test_cases(rs, 5, 11);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto body =
        f.post("/sessions/" + id + "/step",
               engine::snapshot_to_json(cases[i].snapshot).dump(), 200);
    CHECK(body["step"] == i + 1);
    CHECK(body["server_us"].get<double>() >= 0.0);
    CHECK(body["result"] == engine::obligation_set_to_json(cases[i].expected));
  }
}

TEST_CASE("server: malformed snapshots and step errors map to 400/422") {
  ServerFixture f;
  const std::string id = upload_and_start(f, bench::scenario_source());
  CHECK(f.post("/sessions/" + id + "/step", "{not json", 400)["error"]["code"] ==
        "BAD_SNAPSHOT");
  CHECK(f.post("/sessions/" + id + "/step", R"({"values":7})", 400)["error"]["code"] ==
        "BAD_SNAPSHOT");
  CHECK(f.post("/sessions/" + id + "/step", R"({"values":{}})", 422)["error"]["code"] ==
        "MISSING_BINDING");

  const char* conflicting = R"(
MONITORED a : BOOLEAN
CAPABILITY openDoor
CAPABILITY closeDoor
INVARIANT inv_1 NOT (ENFORCED(openDoor) AND ENFORCED(closeDoor))
RULE r1 IF a THEN openDoor
RULE r2 IF a THEN closeDoor
)";
  const std::string id2 = upload_and_start(f, conflicting);
  const auto body =
      f.post("/sessions/" + id2 + "/step", R"({"values":{"a":true}})", 422);
  CHECK(body["error"]["code"] == "INVARIANT_VIOLATION");
  CHECK(body["error"]["detail"]["invariant"] == "inv_1");
}

TEST_CASE("server: re-upload to a session hot-swaps and resets the counter") {
  ServerFixture f;
  const std::string id = upload_and_start(f, bench::scenario_source(), "main");
  CHECK(id == "main");
  const auto rs = bench::load_scenario();
  const auto snap = engine::snapshot_to_json(bench::generate_test_cases(rs, 1, 3)[0].snapshot);
  CHECK(f.post("/sessions/main/step", snap.dump(), 200)["step"] == 1);
  CHECK(f.post("/sessions/main/step", snap.dump(), 200)["step"] == 2);

  // replace the model; same id, counter back to zero, still running
  auto res = f.client.Post("/upload-model?session=main", bench::scenario_source(),
                           "text/plain");
  REQUIRE(res);
  CHECK(res->status == 200);
  CHECK(json::parse(res->body)["status"] == "running");
  CHECK(f.post("/sessions/main/step", snap.dump(), 200)["step"] == 1);
}

TEST_CASE("server: http step output is byte-identical to in-process evaluation") {
  ServerFixture f;
  const std::string id = upload_and_start(f, bench::scenario_source());
  const auto rs = bench::load_scenario();
  const auto machine = engine::compile(rs);
  const auto cases = bench::generate_test_cases(rs, 100, 20260810);
  for (const auto& tc : cases) {
    const auto body = f.post("/sessions/" + id + "/step",
                             engine::snapshot_to_json(tc.snapshot).dump(), 200);
    const std::string local = engine::obligation_set_to_json(machine.step(tc.snapshot)).dump();
    CHECK(body["result"].dump() == local);
  }
}

TEST_CASE("server: concurrent steps on one session serialize") {
  ServerFixture f;
  const std::string id = upload_and_start(f, bench::scenario_source());
  const auto rs = bench::load_scenario();
  const auto cases = bench::generate_test_cases(rs, 8, 5);

  constexpr int kThreads = 4;
  constexpr int kSteps = 25;
  std::vector<std::thread> workers;
  std::vector<std::vector<std::uint64_t>> seen(kThreads);
  for (int w = 0; w < kThreads; ++w) {
    workers.emplace_back([&, w] {
      httplib::Client client("http://127.0.0.1:" + std::to_string(f.srv.port()));
      for (int s = 0; s < kSteps; ++s) {
        auto res = client.Post("/sessions/" + id + "/step",
                               engine::snapshot_to_json(cases[(w + s) % cases.size()].snapshot)
                                   .dump(),
                               "application/json");
        if (res && res->status == 200)
          seen[w].push_back(json::parse(res->body)["step"].get<std::uint64_t>());
      }
    });
  }
  for (auto& t : workers) t.join();

  std::set<std::uint64_t> all;
  for (const auto& per_thread : seen)
    for (auto v : per_thread) all.insert(v);
  // every response carries a unique index and nothing was lost or duplicated
  REQUIRE(all.size() == kThreads * kSteps);
  CHECK(*all.begin() == 1);
  CHECK(*all.rbegin() == kThreads * kSteps);
}

TEST_CASE("server: request log emits one JSON line per request") {
  std::ostringstream log;
  server::ModelServer::Options opts;
  opts.request_log = &log;
  ServerFixture f(std::move(opts));
  const std::string id = upload_and_start(f, bench::scenario_source());
  const auto snap = engine::snapshot_to_json(
      bench::generate_test_cases(bench::load_scenario(), 1, 3)[0].snapshot);
  f.post("/sessions/" + id + "/step", snap.dump(), 200);

  std::istringstream lines(log.str());
  std::string line;
  std::size_t count = 0;
  bool saw_step = false;
  while (std::getline(lines, line)) {
    const auto entry = json::parse(line);  // every line is valid JSON
    ++count;
    if (entry["path"].get<std::string>().find("/step") != std::string::npos) {
      saw_step = true;
      CHECK(entry["step"] == 1);
      CHECK(entry["server_us"].get<double>() >= 0.0);
      CHECK(entry["session"] == id);
    }
  }
  CHECK(count == 3);  // upload, start, step
  CHECK(saw_step);
}
