#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "oblot/engine.hpp"
#include "oblot/io.hpp"

namespace httplib {
class Server;
}

namespace oblot {

struct Reply {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

/// Interactive runs where the caller plays the sequential scheduler and the movement adversary.
class SessionStore {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionStore(std::chrono::seconds ttl = std::chrono::hours(1));

  Reply create(const std::string& body);
  Reply state(const std::string& id);
  Reply step(const std::string& id, const std::string& body);
  Reply what_if(const std::string& id, const std::string& robot);
  Reply trace(const std::string& id);
  Reply remove(const std::string& id);

  /// Drops sessions idle longer than the TTL; returns how many went.
  std::size_t expire(Clock::time_point now = Clock::now());
  std::size_t size() const;

 private:
  struct Session {
    std::mutex mu;
    std::string id;
    Engine engine;
    std::vector<RobotId> script;
    std::vector<double> fractions;
    Clock::time_point touched;

    Session(std::string i, Scenario s) : id(std::move(i)), engine(std::move(s)), touched(Clock::now()) {}
  };

  std::shared_ptr<Session> find(const std::string& id);
  static Json state_json(const Session& s);
  std::string fresh_id();

  std::chrono::seconds ttl_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
  Rng id_rng_;
};

/// The scenario a session's trace embeds: scripted activation and movement that replay its steps.
Scenario replay_scenario(const Scenario& base, const std::vector<RobotId>& robots, const std::vector<double>& fractions);

/// Routes for the six session endpoints, plus static files when static_dir is non-empty.
void mount(httplib::Server& server, SessionStore& store, const std::string& static_dir = "");

}  // namespace oblot
