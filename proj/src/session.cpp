#include "oblot/session.hpp"

#include <httplib.h>

#include <random>

#include "oblot/algorithms.hpp"

namespace oblot {

namespace {

Reply json_reply(int status, const Json& j) { return {status, j.dump(), "application/json"}; }
Reply error_reply(int status, const std::string& msg) { return json_reply(status, {{"error", msg}}); }

Json pt(Point p) { return Json::array({p.x, p.y}); }

/// Robots the fairness ledger accepts next round; empty means any.
std::vector<RobotId> allowed(const Engine& e) {
  const auto& ledger = e.ledger();
  auto urgent = ledger.starved(e.round() + 1);
  if (urgent.empty()) return {};
  if (ledger.last_activation[urgent.front()] + ledger.window <= e.round() + 1) return {urgent.front()};
  return urgent;
}

}  // namespace

Scenario replay_scenario(const Scenario& base, const std::vector<RobotId>& robots, const std::vector<double>& fractions) {
  Scenario s = base;
  s.activation.kind = ActivationKind::Scripted;
  s.activation.script = robots;
  s.movement.kind = MovementKind::Scripted;
  s.movement.script = fractions;
  if (!robots.empty()) s.max_rounds = robots.size();
  return s;
}

SessionStore::SessionStore(std::chrono::seconds ttl) : ttl_(ttl), id_rng_(std::random_device{}()) {}

std::string SessionStore::fresh_id() {
  std::lock_guard lock(mu_);
  return hex64(id_rng_.next() ^ ++counter_);
}

std::size_t SessionStore::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

std::size_t SessionStore::expire(Clock::time_point now) {
  std::lock_guard lock(mu_);
  std::size_t gone = 0;
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    bool idle;
    {
      std::unique_lock s(it->second->mu, std::try_to_lock);
      idle = s.owns_lock() && now - it->second->touched > ttl_;
    }
    if (idle) {
      it = sessions_.erase(it);
      ++gone;
    } else {
      ++it;
    }
  }
  return gone;
}

std::shared_ptr<SessionStore::Session> SessionStore::find(const std::string& id) {
  expire();
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Json SessionStore::state_json(const Session& s) {
  const Engine& e = s.engine;
  const Configuration& c = e.config();
  Json robots = Json::array();
  for (Point p : c.positions()) robots.push_back(pt(p));
  Json census = Json::array();
  for (std::size_t i = 0; i < c.q_points().size(); ++i)
    census.push_back({{"point", pt(c.q_points()[i])}, {"count", c.counts()[i]}});

  const Tolerance tol = e.tolerance();
  Circle sec = smallest_enclosing_circle(c.q_points(), tol);
  const double r = sec.radius > 0.0 ? sec.radius : 1.0;
  auto global = [&](Point n) { return sec.center + n * r; };
  std::vector<Point> qn;
  for (Point q : c.q_points()) qn.push_back((q - sec.center) / r);

  Json lambda = nullptr;
  if (auto lam = leader_angular_sequence(qn, nullptr, Circle{{0, 0}, 1.0}, tol))
    lambda = {{"boundary_point", pt(global(lam->boundary_point))},
              {"inner_point", pt(global(lam->inner_point))},
              {"theta1", lam->theta1},
              {"orientation", lam->orientation == Chirality::Clockwise ? "clockwise" : "counterclockwise"}};
  Json placed = nullptr;
  if (const auto& m = e.algorithm().model())
    if (auto g = overlap(qn, *m, tol)) {
      placed = Json::array();
      for (Point p : g->pattern) placed.push_back(pt(global(p)));
    }

  Stage stage = e.trace().events.empty() ? e.compute(0).stage : e.trace().events.back().stage;
  auto ok = allowed(e);
  const bool formed = e.formed();
  return {{"id", s.id},
          {"round", e.round()},
          {"epoch", e.epochs()},
          {"formed", formed},
          {"quiescent", formed && e.formed_and_quiescent()},
          {"stage", to_string(stage)},
          {"algorithm", to_string(e.algorithm().kind())},
          {"delta", e.scenario().movement.delta},
          {"robots", robots},
          {"census", census},
          {"sec", {{"center", pt(sec.center)}, {"radius", sec.radius}}},
          {"lambda", lambda},
          {"pattern_placed", placed},
          {"window", e.ledger().window},
          {"forced", ok.empty() ? Json(nullptr) : Json(ok.front())},
          {"allowed", ok}};
}

Reply SessionStore::create(const std::string& body) {
  expire();
  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::parse_error&) {
    return error_reply(400, "(root): invalid JSON");
  }
  Scenario sc;
  try {
    sc = scenario_from_json(doc);
  } catch (const SchemaError& e) {
    return error_reply(400, e.what());
  }
  sc.activation.kind = ActivationKind::Interactive;
  sc.activation.script.clear();
  sc.movement.kind = MovementKind::Interactive;
  sc.movement.script.clear();
  std::shared_ptr<Session> s;
  try {
    s = std::make_shared<Session>(fresh_id(), std::move(sc));
  } catch (const std::exception& e) {
    return error_reply(422, e.what());
  }
  std::lock_guard lock(mu_);
  sessions_[s->id] = s;
  return json_reply(201, state_json(*s));
}

Reply SessionStore::state(const std::string& id) {
  auto s = find(id);
  if (!s) return error_reply(404, "unknown session " + id);
  std::lock_guard lock(s->mu);
  s->touched = Clock::now();
  return json_reply(200, state_json(*s));
}

Reply SessionStore::step(const std::string& id, const std::string& body) {
  auto s = find(id);
  if (!s) return error_reply(404, "unknown session " + id);
  Json doc;
  try {
    doc = Json::parse(body);
  } catch (const Json::parse_error&) {
    return error_reply(400, "(root): invalid JSON");
  }
  if (!doc.is_object()) return error_reply(400, "(root): expected an object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "robot" && it.key() != "stop_fraction") return error_reply(400, it.key() + ": unknown key");
  if (!doc.contains("robot") || !doc["robot"].is_number_unsigned()) return error_reply(400, "robot: expected a robot id");
  const double f = doc.value("stop_fraction", 1.0);
  if (doc.contains("stop_fraction") && !doc["stop_fraction"].is_number())
    return error_reply(400, "stop_fraction: expected a number");
  if (!(f >= 0.0 && f <= 1.0)) return error_reply(400, "stop_fraction: must lie in [0, 1]");

  std::lock_guard lock(s->mu);
  s->touched = Clock::now();
  Engine& e = s->engine;
  const RobotId r = doc["robot"].get<RobotId>();
  if (r >= e.config().size()) return error_reply(404, "unknown robot " + std::to_string(r));
  if (e.formed_and_quiescent()) return error_reply(409, "pattern already formed");
  auto ok = allowed(e);
  if (!ok.empty() && std::find(ok.begin(), ok.end(), r) == ok.end())
    return json_reply(423, {{"error", "fairness forces robot " + std::to_string(ok.front())}, {"forced", ok.front()}});
  const RoundEvent& ev = e.step_manual(r, f);
  s->script.push_back(r);
  s->fractions.push_back(f);
  return json_reply(200, {{"state", state_json(*s)}, {"event", round_to_json(ev)}});
}

Reply SessionStore::what_if(const std::string& id, const std::string& robot) {
  auto s = find(id);
  if (!s) return error_reply(404, "unknown session " + id);
  std::lock_guard lock(s->mu);
  s->touched = Clock::now();
  const Engine& e = s->engine;
  RobotId r = 0;
  try {
    std::size_t used = 0;
    r = std::stoull(robot, &used);
    if (used != robot.size()) throw std::invalid_argument(robot);
  } catch (const std::exception&) {
    return error_reply(404, "unknown robot " + robot);
  }
  if (r >= e.config().size()) return error_reply(404, "unknown robot " + robot);
  Point dest;
  Decision d = e.compute(r, &dest);
  const Point start = e.config().position(r);
  const double dist = distance(start, dest);
  const double lo = std::min(e.scenario().movement.delta, dist);
  return json_reply(200, {{"robot", r},
                          {"start", pt(start)},
                          {"destination", pt(dest)},
                          {"distance", dist},
                          {"interval", {lo, dist}},
                          {"stage", to_string(d.stage)}});
}

Reply SessionStore::trace(const std::string& id) {
  auto s = find(id);
  if (!s) return error_reply(404, "unknown session " + id);
  std::lock_guard lock(s->mu);
  s->touched = Clock::now();
  std::ostringstream out;
  write_trace(out, replay_scenario(s->engine.scenario(), s->script, s->fractions), s->engine);
  return {200, out.str(), "application/x-ndjson"};
}

Reply SessionStore::remove(const std::string& id) {
  std::lock_guard lock(mu_);
  if (!sessions_.erase(id)) return error_reply(404, "unknown session " + id);
  return json_reply(200, {{"deleted", id}});
}

void mount(httplib::Server& server, SessionStore& store, const std::string& static_dir) {
  // no SO_REUSEPORT, so a second server on a taken port fails to bind
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Post("/sessions", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.create(req.body));
  });
  server.Get(R"(/sessions/([^/]+))", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.state(req.matches[1]));
  });
  server.Delete(R"(/sessions/([^/]+))", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.remove(req.matches[1]));
  });
  server.Post(R"(/sessions/([^/]+)/step)", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.step(req.matches[1], req.body));
  });
  server.Get(R"(/sessions/([^/]+)/what-if/([^/]+))", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.what_if(req.matches[1], req.matches[2]));
  });
  server.Get(R"(/sessions/([^/]+)/trace)", [&store, send](const httplib::Request& req, httplib::Response& res) {
    send(res, store.trace(req.matches[1]));
  });
  if (!static_dir.empty()) server.set_mount_point("/", static_dir);
}

}  // namespace oblot
