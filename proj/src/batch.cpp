#include "oblot/batch.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "oblot/generator.hpp"

namespace oblot {

namespace {

std::pair<std::size_t, std::size_t> range(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return {j.get<std::size_t>(), j.get<std::size_t>()};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() || !j[1].is_number_unsigned())
    throw SchemaError(path + ": expected an integer or [lo, hi]");
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

std::vector<BatchItem> from_generator(const Json& g, const std::string& path) {
  static const std::set<std::string> keys{"algorithm", "count", "n", "k", "activation", "movement",
                                          "delta_over_rho", "multiplicities", "seed", "max_rounds"};
  if (!g.is_object()) throw SchemaError(path + ": expected an object");
  for (auto it = g.begin(); it != g.end(); ++it)
    if (!keys.count(it.key())) throw SchemaError(path + "." + it.key() + ": unknown key");
  GeneratorSpec spec;
  std::size_t max_rounds = 0;
  try {
    if (g.contains("algorithm")) spec.base.algorithm = algorithm_kind_from(g["algorithm"].get<std::string>());
    if (g.contains("activation")) spec.base.activation = activation_kind_from(g["activation"].get<std::string>());
    if (g.contains("movement")) spec.base.movement = movement_kind_from(g["movement"].get<std::string>());
    if (g.contains("delta_over_rho")) spec.base.delta_over_rho = g["delta_over_rho"].get<double>();
    if (g.contains("multiplicities")) spec.base.multiplicities = g["multiplicities"].get<bool>();
    if (g.contains("seed")) spec.base.seed = g["seed"].get<std::uint64_t>();
    if (g.contains("max_rounds")) max_rounds = g["max_rounds"].get<std::size_t>();
    spec.count = g.at("count").get<std::size_t>();
  } catch (const SchemaError&) {
    throw;
  } catch (const std::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  if (auto s = env_seed()) spec.base.seed = *s;
  if (g.contains("n")) spec.n = range(g["n"], path + ".n");
  if (g.contains("k")) spec.k = range(g["k"], path + ".k");
  std::vector<BatchItem> out;
  std::size_t i = 0;
  for (const auto& r : expand(spec)) {
    Scenario s = random_scenario(r);
    s.max_rounds = max_rounds;
    out.push_back({path + "#" + std::to_string(i++), std::move(s)});
  }
  return out;
}

}  // namespace

std::vector<BatchItem> batch_items(const Json& spec, const std::string& base_dir) {
  if (!spec.is_object()) throw SchemaError("(root): expected an object");
  for (auto it = spec.begin(); it != spec.end(); ++it)
    if (it.key() != "generators" && it.key() != "scenarios") throw SchemaError(it.key() + ": unknown key");
  std::vector<BatchItem> out;
  if (spec.contains("generators")) {
    const Json& gs = spec["generators"];
    if (!gs.is_array()) throw SchemaError("generators: expected a list");
    for (std::size_t i = 0; i < gs.size(); ++i) {
      auto more = from_generator(gs[i], "generators[" + std::to_string(i) + "]");
      out.insert(out.end(), more.begin(), more.end());
    }
  }
  if (spec.contains("scenarios")) {
    const Json& ss = spec["scenarios"];
    if (!ss.is_array()) throw SchemaError("scenarios: expected a list");
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const std::string path = "scenarios[" + std::to_string(i) + "]";
      if (ss[i].is_string()) {
        const std::string file = ss[i].get<std::string>();
        out.push_back({file, load_scenario((std::filesystem::path(base_dir) / file).string())});
        continue;
      }
      Json doc = ss[i];
      if (auto s = env_seed()) override_seed(doc, *s);
      try {
        out.push_back({path, scenario_from_json(doc)});
      } catch (const SchemaError& e) {
        throw SchemaError(path + "." + e.what());
      }
    }
  }
  return out;
}

BatchResult run_one(const BatchItem& item, const std::string& trace_path) {
  BatchResult r;
  r.label = item.label;
  r.n = item.scenario.robots.size();
  r.k = item.scenario.pattern.size();
  r.bound = std::numeric_limits<double>::infinity();
  try {
    Engine e(item.scenario);
    const Trace& t = e.run();
    r.formed = t.formed_at.has_value();
    r.rounds = e.round();
    auto reports = verify_bounds(t);
    r.within_bounds = r.formed;
    for (const auto& b : reports) r.within_bounds = r.within_bounds && b.pass;
    if (!reports.empty()) {
      r.bound = reports.back().bound;
      r.epochs = reports.back().observed;
    }
    r.margin = r.bound - static_cast<double>(r.epochs);
    r.hash = trace_hash(t);
    if (!trace_path.empty()) {
      std::ofstream out(trace_path);
      write_trace(out, e);
    }
  } catch (const std::exception& ex) {
    r.error = ex.what();
    r.within_bounds = false;
  }
  return r;
}

namespace {

std::string trace_path(const std::string& dir, std::size_t i) {
  if (dir.empty()) return "";
  char name[32];
  std::snprintf(name, sizeof name, "run-%05zu.jsonl", i);
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

std::vector<BatchResult> run_batch(const std::vector<BatchItem>& items, int jobs, const std::string& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::vector<BatchResult> out(items.size());
  const long n = static_cast<long>(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (long i = 0; i < n; ++i) out[i] = run_one(items[i], trace_path(out_dir, i));
  return out;
}

std::vector<BatchResult> run_batch_serial(const std::vector<BatchItem>& items, const std::string& out_dir) {
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  std::vector<BatchResult> out;
  for (std::size_t i = 0; i < items.size(); ++i) out.push_back(run_one(items[i], trace_path(out_dir, i)));
  return out;
}

std::string format_table(const std::vector<BatchResult>& results) {
  std::string s = "label\tn\tk\tformed\trounds\tepochs\tbound\tmargin\twithin\thash\terror\n";
  char buf[512];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%s\t%zu\t%zu\t%s\t%zu\t%zu\t%.0f\t%.0f\t%s\t%s\t", r.label.c_str(), r.n, r.k,
                  r.formed ? "yes" : "no", r.rounds, r.epochs, r.bound, r.margin, r.within_bounds ? "yes" : "no",
                  hex64(r.hash).c_str());
    s += buf;
    s += r.error + "\n";
  }
  return s;
}

bool all_within_bounds(const std::vector<BatchResult>& results) {
  for (const auto& r : results)
    if (!r.within_bounds) return false;
  return true;
}

}  // namespace oblot
