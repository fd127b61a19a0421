#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "oblot/io.hpp"

using namespace oblot;

namespace {

Json pentagon_doc() {
  return Json::parse(R"({
    "robots": [[0,0],[1,0],[2,1],[0.5,2],[3,3],[1,1],[1,1]],
    "pattern": [[1,0],[0.309017,0.951057],[-0.809017,0.587785],[-0.809017,-0.587785],[0.309017,-0.951057]],
    "frames": "random",
    "activation": {"kind": "seq-random"},
    "movement": {"kind": "random", "delta": 0.1},
    "seed": 3
  })");
}

std::string schema_error(const Json& doc) {
  try {
    scenario_from_json(doc);
  } catch (const SchemaError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("scenario json: defaults and derived seeds") {
  Scenario s = scenario_from_json(pentagon_doc());
  CHECK(s.robots.size() == 7);
  CHECK(s.pattern.size() == 5);
  CHECK(s.frames.size() == 7);
  CHECK(s.activation.kind == ActivationKind::SeqRandom);
  CHECK(s.movement.kind == MovementKind::Random);
  CHECK(s.algorithm == AlgorithmKind::Auto);
  CHECK(s.eps == 1e-9);
  CHECK(s.activation.seed != s.movement.seed);
  Scenario again = scenario_from_json(pentagon_doc());
  CHECK(again.frames[3].rotation == s.frames[3].rotation);
  CHECK(again.movement.seed == s.movement.seed);
}

TEST_CASE("scenario json: round trip is exact") {
  Scenario s = scenario_from_json(pentagon_doc());
  s.activation.script = {0, 2, 1};
  s.activation.window = 40;
  s.movement.script = {0.25, 1.0};
  s.max_rounds = 77;
  Scenario t = scenario_from_json(Json::parse(scenario_to_json(s).dump()));
  CHECK(t.robots == s.robots);
  CHECK(t.pattern == s.pattern);
  for (std::size_t i = 0; i < s.frames.size(); ++i) {
    CHECK(t.frames[i].rotation == s.frames[i].rotation);
    CHECK(t.frames[i].unit == s.frames[i].unit);
    CHECK(t.frames[i].handedness == s.frames[i].handedness);
  }
  CHECK(t.activation.script == s.activation.script);
  CHECK(t.activation.window == 40);
  CHECK(t.activation.seed == s.activation.seed);
  CHECK(t.movement.script == s.movement.script);
  CHECK(t.movement.seed == s.movement.seed);
  CHECK(t.max_rounds == 77);
  CHECK(t.seed == 3);
}

TEST_CASE("scenario json: errors name the key path") {
  Json d = pentagon_doc();
  d["movement"]["speed"] = 1;
  CHECK(schema_error(d).rfind("movement.speed: unknown key", 0) == 0);

  d = pentagon_doc();
  d["colour"] = "red";
  CHECK(schema_error(d).rfind("colour: unknown key", 0) == 0);

  d = pentagon_doc();
  d.erase("pattern");
  CHECK(schema_error(d).rfind("pattern: missing required key", 0) == 0);

  d = pentagon_doc();
  d["frames"] = Json::array();
  for (int i = 0; i < 7; ++i) d["frames"].push_back({{"rotation", 0}, {"handedness", 1}, {"unit", 1}});
  d["frames"][4].erase("unit");
  CHECK(schema_error(d).rfind("frames[4].unit: missing required key", 0) == 0);
  d["frames"][4]["unit"] = 2;
  d["frames"][4]["handedness"] = 0;
  CHECK(schema_error(d).rfind("frames[4].handedness", 0) == 0);

  d = pentagon_doc();
  d["robots"][2] = Json::array({1});
  CHECK(schema_error(d).rfind("robots[2]: expected [x, y]", 0) == 0);

  d = pentagon_doc();
  d["activation"]["kind"] = "sometimes";
  CHECK(schema_error(d).rfind("activation.kind: unknown value", 0) == 0);

  d = pentagon_doc();
  d["movement"]["script"] = {0.5, 1.5};
  CHECK(schema_error(d).rfind("movement.script[1]", 0) == 0);

  d = pentagon_doc();
  d["seed"] = -4;
  CHECK(schema_error(d).rfind("seed:", 0) == 0);

  // model violations are not schema errors
  d = pentagon_doc();
  d["robots"] = {{0, 0}, {1, 1}};
  CHECK_NOTHROW(scenario_from_json(d));
  CHECK_THROWS_AS(Engine(scenario_from_json(d)), UsageError);
}

TEST_CASE("OBLOT_SEED overrides every seed") {
  const std::string path = "io_test_scenario.json";
  std::ofstream(path) << pentagon_doc().dump();
  unsetenv("OBLOT_SEED");
  Scenario plain = load_scenario(path);
  setenv("OBLOT_SEED", "12345", 1);
  Scenario a = load_scenario(path);
  Scenario b = load_scenario(path);
  unsetenv("OBLOT_SEED");
  CHECK(a.seed == 12345);
  CHECK(a.activation.seed != plain.activation.seed);
  CHECK(a.movement.seed != plain.movement.seed);
  CHECK(a.frames[0].rotation != plain.frames[0].rotation);
  CHECK(a.activation.seed == b.activation.seed);
  std::remove(path.c_str());

  Json with_sub = pentagon_doc();
  with_sub["activation"]["seed"] = 9;
  override_seed(with_sub, 5);
  CHECK_FALSE(with_sub["activation"].contains("seed"));
  CHECK(with_sub["seed"] == 5);
}

TEST_CASE("trace file: records, summary, round trip") {
  Scenario s = scenario_from_json(pentagon_doc());
  Engine e(s);
  e.run();
  std::stringstream out;
  write_trace(out, e);
  std::vector<Json> lines;
  std::string line;
  while (std::getline(out, line)) lines.push_back(Json::parse(line));
  REQUIRE(lines.size() == e.round() + 2);
  CHECK(lines.front()["type"] == "scenario");
  CHECK(lines[1]["type"] == "round");
  CHECK(lines[1]["round"] == 1);
  CHECK(lines[1]["robots"][0].contains("intended"));
  const Json& sum = lines.back();
  CHECK(sum["type"] == "summary");
  CHECK(sum["formed"] == true);
  CHECK(sum["formed_at"] == e.trace().formed_at.value());
  CHECK(sum["epochs"] == e.epochs());
  CHECK(sum["bounds"].size() == 5);
  CHECK(sum["trace_hash"] == hex64(trace_hash(e.trace())));

  std::stringstream in(out.str());
  TraceFile tf = read_trace(in);
  CHECK(tf.rounds == e.round());
  Engine replay(tf.scenario);
  replay.run();
  CHECK(hex64(trace_hash(replay.trace())) == tf.trace_hash);
}

TEST_CASE("trace hash sees every recorded field") {
  Scenario s = scenario_from_json(pentagon_doc());
  s.max_rounds = 30;
  Engine e(s);
  e.run();
  Trace t = e.trace();
  const auto h = trace_hash(t);
  t.events[7].robots[0].outcome.actual.x += 1e-15;
  CHECK(trace_hash(t) != h);
  t = e.trace();
  t.events[3].epoch_end = !t.events[3].epoch_end;
  CHECK(trace_hash(t) != h);
  t = e.trace();
  t.events[3].warnings.push_back("note");
  CHECK(trace_hash(t) == h);
}

TEST_CASE("hex64") {
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(0xdeadbeefULL) == "00000000deadbeef");
}
