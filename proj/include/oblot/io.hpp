#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "oblot/engine.hpp"
#include "oblot/errors.hpp"

namespace oblot {

using Json = nlohmann::json;

/// Malformed scenario document. The message starts with the offending key path.
class SchemaError : public UsageError {
 public:
  using UsageError::UsageError;
};

/// Strict: unknown keys and wrong types throw SchemaError. "random" frames are drawn from the seed.
/// Model checks (robots vs pattern, delta vs eps) are left to validate().
Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& s);

/// Replaces every seed with one derived from seed (frames are redrawn only when the file asked for random frames).
void override_seed(Json& doc, std::uint64_t seed);
/// OBLOT_SEED, when set and numeric.
std::optional<std::uint64_t> env_seed();

/// Reads, applies OBLOT_SEED and parses. Throws SchemaError on bad JSON.
Scenario load_scenario(const std::string& path);

std::string hex64(std::uint64_t v);

/// FNV-1a over the round records only, so it ignores how activations were chosen.
std::uint64_t trace_hash(const Trace& t);

Json round_to_json(const RoundEvent& ev);
Json summary_to_json(const Trace& t, std::size_t rounds, std::size_t epochs);
Json summary_to_json(const Engine& e);

/// Scenario block, one record per round, summary.
void write_trace(std::ostream& out, const Engine& e);
void write_trace(std::ostream& out, const Scenario& embedded, const Engine& e);

/// Demo header record instead of a scenario block; not replayable.
void write_demo_trace(std::ostream& out, const std::string& name, const DemoResult& d);

struct TraceFile {
  Scenario scenario;
  std::size_t rounds = 0;
  std::string trace_hash;
  bool formed = false;
};
TraceFile read_trace(std::istream& in);

}  // namespace oblot
