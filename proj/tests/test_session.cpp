#include <doctest.h>
#include <httplib.h>

#include <sstream>
#include <thread>

#include "oblot/session.hpp"

using namespace oblot;

namespace {

const char* kGather3 = R"({
  "robots": [[0,0],[2,0],[1,3]], "pattern": [[0,0]], "algorithm": "seq-gathering", "weak_detection": true,
  "frames": "random", "seed": 4, "movement": {"kind": "interactive", "delta": 0.2}})";

Json body(const Reply& r) { return Json::parse(r.body); }

std::string create(SessionStore& store, const std::string& doc = kGather3) {
  Reply r = store.create(doc);
  REQUIRE(r.status == 201);
  return body(r)["id"];
}

Reply step(SessionStore& store, const std::string& id, RobotId robot, double f) {
  return store.step(id, Json{{"robot", robot}, {"stop_fraction", f}}.dump());
}

}  // namespace

TEST_CASE("session: create") {
  SessionStore store;
  Reply r = store.create(kGather3);
  CHECK(r.status == 201);
  Json s = body(r);
  CHECK(s["round"] == 0);
  CHECK(s["epoch"] == 0);
  CHECK(s["robots"].size() == 3);
  CHECK(s["census"].size() == 3);
  CHECK(s["stage"] == "gathering");
  CHECK(s["sec"]["radius"].get<double>() > 0);

  CHECK(store.create("{").status == 400);
  CHECK(store.create(R"({"robots": [[0,0]], "movement": {"kind": "rigid", "delta": 1}})").status == 400);
  Reply few = store.create(R"({"robots": [[0,0]], "pattern": [[0,0],[1,0]], "movement": {"kind": "rigid", "delta": 1}})");
  CHECK(few.status == 422);
  CHECK(body(few)["error"].get<std::string>().find("trivial assumption") != std::string::npos);
  CHECK(store.size() == 1);
}

TEST_CASE("session: state for a pattern run shows lambda and the placed pattern") {
  SessionStore store;
  Json doc = Json::parse(R"({"robots": [[0,0],[4,0],[4,4],[0,4],[1,2],[2.5,1],[3,2.2]],
      "pattern": [[1,0],[0.309017,0.951057],[-0.809017,0.587785],[-0.809017,-0.587785],[0.309017,-0.951057]],
      "movement": {"kind": "rigid", "delta": 0.1}})");
  Json s = body(store.create(doc.dump()));
  CHECK(s["algorithm"] == "seq-pf");
  CHECK(s["lambda"].is_object());
  REQUIRE(s["pattern_placed"].is_array());
  CHECK(s["pattern_placed"].size() == 5);
}

TEST_CASE("session: what-if previews are pure and match the step") {
  SessionStore store;
  std::string id = create(store, R"({"robots": [[0,0],[3,0]], "pattern": [[0,0]], "algorithm": "rendezvous",
                                     "movement": {"kind": "interactive", "delta": 1}})");
  Json w = body(store.what_if(id, "0"));
  CHECK(w["destination"] == Json::array({3.0, 0.0}));
  CHECK(w["interval"] == Json::array({1.0, 3.0}));
  CHECK(body(store.what_if(id, "0")) == w);
  CHECK(body(store.state(id))["round"] == 0);

  Json st = body(step(store, id, 0, 0.0));
  CHECK(st["event"]["robots"][0]["intended"] == w["destination"]);
  CHECK(st["event"]["robots"][0]["actual"] == Json::array({1.0, 0.0}));
  CHECK(st["state"]["round"] == 1);

  CHECK(store.what_if(id, "7").status == 404);
  CHECK(store.what_if(id, "x").status == 404);
  CHECK(store.what_if("nope", "0").status == 404);

  // full move gathers; the run is then formed and further steps conflict
  Json done = body(step(store, id, 1, 1.0));
  CHECK(done["state"]["formed"] == true);
  CHECK(done["state"]["quiescent"] == true);
  Json stay = body(store.what_if(id, "0"));
  CHECK(stay["interval"] == Json::array({0.0, 0.0}));
  CHECK(stay["destination"] == stay["start"]);
  CHECK(step(store, id, 0, 1.0).status == 409);
}

TEST_CASE("session: step errors and fairness") {
  SessionStore store;
  Json doc = Json::parse(kGather3);
  std::string id = create(store);
  CHECK(step(store, "nope", 0, 1).status == 404);
  CHECK(step(store, id, 9, 1).status == 404);
  CHECK(store.step(id, R"({"robot": 0, "stop_fraction": 2})").status == 400);
  CHECK(store.step(id, R"({"robot": -1})").status == 400);
  CHECK(store.step(id, R"({"robot": 0, "speed": 1})").status == 400);

  // window 150 for three robots; robot 2 is starved first
  Reply last;
  int rounds = 0;
  for (; rounds < 400; ++rounds) {
    last = step(store, id, rounds % 2, 0.0);
    if (last.status != 200) break;
  }
  REQUIRE(last.status == 423);
  CHECK(body(last)["forced"] == 2);
  CHECK(body(store.state(id))["forced"] == 2);
  CHECK(step(store, id, 2, 0.0).status == 200);
}

TEST_CASE("session: epochs, trace, delete") {
  SessionStore store;
  std::string id = create(store);
  for (RobotId r = 0; r < 3; ++r) step(store, id, r, 0.5);
  CHECK(body(store.state(id))["epoch"] == 1);
  for (RobotId r = 0; r < 2; ++r) step(store, id, r, 0.5);
  Reply t = store.trace(id);
  CHECK(t.content_type == "application/x-ndjson");
  std::istringstream in(t.body);
  TraceFile tf = read_trace(in);
  CHECK(tf.rounds == 5);
  CHECK(store.remove(id).status == 200);
  CHECK(store.state(id).status == 404);
  CHECK(store.trace(id).status == 404);
  CHECK(store.remove(id).status == 404);
}

TEST_CASE("session: API run and cli-style replay hash alike") {
  SessionStore store;
  std::string id = create(store);
  const double fractions[] = {0.0, 0.3, 1.0, 0.7};
  Json state;
  std::size_t i = 0;
  for (; i < 2000; ++i) {
    Reply r = step(store, id, i % 3, fractions[i % 4]);
    REQUIRE(r.status == 200);
    state = body(r)["state"];
    if (state["quiescent"] == true) break;
  }
  REQUIRE(state["quiescent"] == true);
  std::istringstream in(store.trace(id).body);
  TraceFile tf = read_trace(in);
  CHECK(tf.formed);
  CHECK(tf.scenario.activation.kind == ActivationKind::Scripted);
  Engine cli(tf.scenario);
  const Trace& t = cli.run();
  CHECK(t.formed_at == i + 1);
  CHECK(hex64(trace_hash(t)) == tf.trace_hash);
}

TEST_CASE("session: ttl expiry") {
  SessionStore store(std::chrono::seconds(60));
  create(store);
  create(store);
  CHECK(store.expire(SessionStore::Clock::now()) == 0);
  CHECK(store.expire(SessionStore::Clock::now() + std::chrono::seconds(61)) == 2);
  CHECK(store.size() == 0);
}

TEST_CASE("session: http routes") {
  httplib::Server server;
  SessionStore store;
  mount(server, store);
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client cli("127.0.0.1", port);
  auto created = cli.Post("/sessions", kGather3, "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  std::string id = Json::parse(created->body)["id"];
  auto got = cli.Get("/sessions/" + id);
  REQUIRE(got);
  CHECK(got->status == 200);
  auto w = cli.Get("/sessions/" + id + "/what-if/1");
  REQUIRE(w);
  CHECK(w->status == 200);
  auto s = cli.Post("/sessions/" + id + "/step", R"({"robot": 1, "stop_fraction": 1})", "application/json");
  REQUIRE(s);
  CHECK(s->status == 200);
  CHECK(Json::parse(s->body)["event"]["robots"][0]["intended"] == Json::parse(w->body)["destination"]);
  auto tr = cli.Get("/sessions/" + id + "/trace");
  REQUIRE(tr);
  CHECK(tr->get_header_value("Content-Type") == "application/x-ndjson");
  auto del = cli.Delete("/sessions/" + id);
  REQUIRE(del);
  CHECK(del->status == 200);
  auto gone = cli.Get("/sessions/" + id);
  REQUIRE(gone);
  CHECK(gone->status == 404);

  // the port is now taken
  httplib::Server other;
  mount(other, store);
  CHECK_FALSE(other.bind_to_port("127.0.0.1", port));

  server.stop();
  th.join();
}
