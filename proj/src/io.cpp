#include "oblot/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "oblot/hash.hpp"

namespace oblot {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw SchemaError(path + ": " + what); }

void only_keys(const Json& j, const std::string& path, const std::set<std::string>& keys) {
  if (!j.is_object()) fail(path.empty() ? "(root)" : path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!keys.count(it.key())) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

std::string sub(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

std::uint64_t unsigned_int(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    fail(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

bool boolean(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const Json& need(const Json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(sub(path, key), "missing required key");
  return j.at(key);
}

Point point(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) fail(path, "expected [x, y]");
  return {number(j[0], at(path, 0)), number(j[1], at(path, 1))};
}

std::vector<Point> points(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list of [x, y]");
  std::vector<Point> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(point(j[i], at(path, i)));
  return out;
}

template <class F>
auto named(const Json& j, const std::string& path, F from) {
  std::string s = text(j, path);
  try {
    return from(s);
  } catch (const std::exception&) {
    fail(path, "unknown value \"" + s + "\"");
  }
}

std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) { return Rng(seed ^ salt).next(); }

constexpr std::uint64_t kFrameSalt = 0x6672616d6573ULL;
constexpr std::uint64_t kActivationSalt = 0x616374ULL;
constexpr std::uint64_t kMovementSalt = 0x6d6f7665ULL;

Json pt(Point p) { return Json::array({p.x, p.y}); }

Json pts(const std::vector<Point>& v) {
  Json a = Json::array();
  for (Point p : v) a.push_back(pt(p));
  return a;
}

}  // namespace

Scenario scenario_from_json(const Json& j) {
  only_keys(j, "", {"robots", "frames", "pattern", "algorithm", "activation", "movement", "weak_detection", "eps",
                    "max_rounds", "seed"});
  Scenario s;
  s.robots = points(need(j, "", "robots"), "robots");
  s.pattern = points(need(j, "", "pattern"), "pattern");
  if (j.contains("seed")) s.seed = unsigned_int(j["seed"], "seed");
  if (j.contains("algorithm")) s.algorithm = named(j["algorithm"], "algorithm", algorithm_kind_from);
  if (j.contains("weak_detection")) s.weak_detection = boolean(j["weak_detection"], "weak_detection");
  if (j.contains("eps")) s.eps = number(j["eps"], "eps");
  if (j.contains("max_rounds")) s.max_rounds = unsigned_int(j["max_rounds"], "max_rounds");

  if (j.contains("frames")) {
    const Json& f = j["frames"];
    if (f.is_string()) {
      if (f.get<std::string>() != "random") fail("frames", "expected a list of frames or \"random\"");
      s.frames = random_frames(s.robots.size(), derive(s.seed, kFrameSalt));
    } else if (f.is_array()) {
      for (std::size_t i = 0; i < f.size(); ++i) {
        const std::string p = at("frames", i);
        only_keys(f[i], p, {"rotation", "handedness", "unit"});
        LocalFrame lf;
        lf.rotation = number(need(f[i], p, "rotation"), sub(p, "rotation"));
        double h = number(need(f[i], p, "handedness"), sub(p, "handedness"));
        if (h != 1.0 && h != -1.0) fail(sub(p, "handedness"), "expected 1 or -1");
        lf.handedness = static_cast<int>(h);
        lf.unit = number(need(f[i], p, "unit"), sub(p, "unit"));
        s.frames.push_back(lf);
      }
    } else {
      fail("frames", "expected a list of frames or \"random\"");
    }
  }

  s.activation.seed = derive(s.seed, kActivationSalt);
  if (j.contains("activation")) {
    const Json& a = j["activation"];
    only_keys(a, "activation", {"kind", "seed", "script", "window"});
    s.activation.kind = named(need(a, "activation", "kind"), "activation.kind", activation_kind_from);
    if (a.contains("seed")) s.activation.seed = unsigned_int(a["seed"], "activation.seed");
    if (a.contains("window")) s.activation.window = unsigned_int(a["window"], "activation.window");
    if (a.contains("script")) {
      if (!a["script"].is_array()) fail("activation.script", "expected a list of robot ids");
      for (std::size_t i = 0; i < a["script"].size(); ++i)
        s.activation.script.push_back(unsigned_int(a["script"][i], at("activation.script", i)));
    }
  }

  const Json& m = need(j, "", "movement");
  only_keys(m, "movement", {"kind", "delta", "seed", "script"});
  s.movement.kind = named(need(m, "movement", "kind"), "movement.kind", movement_kind_from);
  s.movement.delta = number(need(m, "movement", "delta"), "movement.delta");
  s.movement.seed = m.contains("seed") ? unsigned_int(m["seed"], "movement.seed") : derive(s.seed, kMovementSalt);
  if (m.contains("script")) {
    if (!m["script"].is_array()) fail("movement.script", "expected a list of stop fractions");
    for (std::size_t i = 0; i < m["script"].size(); ++i) {
      double f = number(m["script"][i], at("movement.script", i));
      if (!(f >= 0.0 && f <= 1.0)) fail(at("movement.script", i), "stop fraction outside [0, 1]");
      s.movement.script.push_back(f);
    }
  }
  return s;
}

Json scenario_to_json(const Scenario& s) {
  Json j;
  j["robots"] = pts(s.robots);
  if (!s.frames.empty()) {
    Json f = Json::array();
    for (const auto& lf : s.frames) f.push_back({{"rotation", lf.rotation}, {"handedness", lf.handedness}, {"unit", lf.unit}});
    j["frames"] = f;
  }
  j["pattern"] = pts(s.pattern);
  j["algorithm"] = to_string(s.algorithm);
  Json a = {{"kind", to_string(s.activation.kind)}, {"seed", s.activation.seed}};
  if (!s.activation.script.empty()) a["script"] = s.activation.script;
  if (s.activation.window) a["window"] = s.activation.window;
  j["activation"] = a;
  Json m = {{"kind", to_string(s.movement.kind)}, {"delta", s.movement.delta}, {"seed", s.movement.seed}};
  if (!s.movement.script.empty()) m["script"] = s.movement.script;
  j["movement"] = m;
  j["weak_detection"] = s.weak_detection;
  j["eps"] = s.eps;
  j["max_rounds"] = s.max_rounds;
  j["seed"] = s.seed;
  return j;
}

void override_seed(Json& doc, std::uint64_t seed) {
  if (!doc.is_object()) return;
  doc["seed"] = seed;
  if (doc.contains("activation") && doc["activation"].is_object()) doc["activation"].erase("seed");
  if (doc.contains("movement") && doc["movement"].is_object()) doc["movement"].erase("seed");
}

std::optional<std::uint64_t> env_seed() {
  const char* v = std::getenv("OBLOT_SEED");
  if (!v || !*v) return std::nullopt;
  char* end = nullptr;
  unsigned long long x = std::strtoull(v, &end, 10);
  if (*end) return std::nullopt;
  return static_cast<std::uint64_t>(x);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open scenario file " + path);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("(root): invalid JSON: ") + e.what());
  }
  if (auto s = env_seed()) override_seed(doc, *s);
  return scenario_from_json(doc);
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t trace_hash(const Trace& t) {
  std::uint64_t h = kFnvOffset;
  auto word = [&](std::uint64_t x) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(x >> (8 * i));
    h = fnv1a(b, 8, h);
  };
  auto point = [&](Point p) {
    h = fnv1a_double(p.x, h);
    h = fnv1a_double(p.y, h);
  };
  for (const auto& ev : t.events) {
    word(ev.round);
    word(ev.active.size());
    for (const auto& r : ev.robots) {
      word(r.robot);
      word(r.snapshot_digest);
      point(r.intended);
      point(r.outcome.actual);
      word(r.outcome.truncated);
      h = fnv1a(to_string(r.stage), h);
    }
    word(ev.q_count);
    word(ev.epoch_end);
  }
  return h;
}

Json round_to_json(const RoundEvent& ev) {
  Json robots = Json::array();
  for (const auto& r : ev.robots)
    robots.push_back({{"robot", r.robot},
                      {"snapshot", hex64(r.snapshot_digest)},
                      {"local_destination", pt(r.local_destination)},
                      {"start", pt(r.outcome.start)},
                      {"intended", pt(r.intended)},
                      {"actual", pt(r.outcome.actual)},
                      {"truncated", r.outcome.truncated},
                      {"stage", to_string(r.stage)}});
  Json j = {{"type", "round"},     {"round", ev.round},       {"active", ev.active},     {"robots", robots},
            {"stage", to_string(ev.stage)}, {"q_count", ev.q_count}, {"epoch_end", ev.epoch_end}};
  if (!ev.warnings.empty()) j["warnings"] = ev.warnings;
  return j;
}

Json summary_to_json(const Trace& t, std::size_t rounds, std::size_t epochs) {
  Json bounds = Json::array();
  for (const auto& b : verify_bounds(t)) {
    Json x = {{"name", b.name},         {"n", b.n},         {"rho", b.rho},   {"delta", b.delta},
              {"observed", b.observed}, {"pass", b.pass}, {"conclusive", b.conclusive}};
    x["bound"] = std::isfinite(b.bound) ? Json(b.bound) : Json(nullptr);
    if (t.algorithm == AlgorithmKind::SeqPFSmall) x["max_pair"] = b.max_pair;
    bounds.push_back(x);
  }
  std::size_t warnings = 0;
  for (const auto& ev : t.events) warnings += ev.warnings.size();
  return {{"type", "summary"},
          {"formed", t.formed_at.has_value()},
          {"formed_at", t.formed_at ? Json(*t.formed_at) : Json(nullptr)},
          {"stop_reason", t.stop_reason},
          {"rounds", rounds},
          {"epochs", epochs},
          {"algorithm", to_string(t.algorithm)},
          {"final_positions", pts(t.final_positions)},
          {"warnings", warnings},
          {"bounds", bounds},
          {"trace_hash", hex64(trace_hash(t))}};
}

Json summary_to_json(const Engine& e) { return summary_to_json(e.trace(), e.round(), e.epochs()); }

void write_demo_trace(std::ostream& out, const std::string& name, const DemoResult& d) {
  out << Json{{"type", "demo"},          {"name", name},          {"verdict", d.verdict}, {"held", d.held},
              {"action", d.action},      {"initial_q", d.initial_q}, {"min_q", d.min_q},  {"max_q", d.max_q}}
             .dump()
      << '\n';
  for (const auto& ev : d.trace.events) out << round_to_json(ev).dump() << '\n';
  out << summary_to_json(d.trace, d.rounds, d.trace.epoch_marks.size()).dump() << '\n';
}

void write_trace(std::ostream& out, const Scenario& embedded, const Engine& e) {
  out << Json{{"type", "scenario"}, {"scenario", scenario_to_json(embedded)}}.dump() << '\n';
  for (const auto& ev : e.trace().events) out << round_to_json(ev).dump() << '\n';
  out << summary_to_json(e).dump() << '\n';
}

void write_trace(std::ostream& out, const Engine& e) { write_trace(out, e.scenario(), e); }

TraceFile read_trace(std::istream& in) {
  TraceFile tf;
  bool have_scenario = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw SchemaError("line " + std::to_string(lineno) + ": invalid JSON");
    }
    const std::string type = j.value("type", "");
    if (type == "scenario") {
      tf.scenario = scenario_from_json(j.at("scenario"));
      have_scenario = true;
    } else if (type == "round") {
      ++tf.rounds;
    } else if (type == "summary") {
      tf.trace_hash = j.at("trace_hash").get<std::string>();
      tf.formed = j.at("formed").get<bool>();
    } else {
      throw SchemaError("line " + std::to_string(lineno) + ".type: unknown record type");
    }
  }
  if (!have_scenario) throw SchemaError("trace: no scenario record");
  return tf;
}

}  // namespace oblot
