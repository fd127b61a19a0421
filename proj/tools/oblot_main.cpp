#include <CLI11.hpp>
#include <httplib.h>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "oblot/batch.hpp"
#include "oblot/engine.hpp"
#include "oblot/io.hpp"
#include "oblot/session.hpp"

using namespace oblot;

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_path) {
  Scenario s = load_scenario(scenario_path);
  Engine e(s);
  const Trace& t = e.run();
  if (out_path.empty() || out_path == "-") {
    write_trace(std::cout, e);
  } else {
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write " + out_path);
    write_trace(out, e);
  }
  std::cerr << (t.formed_at ? "formed at round " + std::to_string(*t.formed_at) : "not formed after " + std::to_string(e.round()) + " rounds")
            << ", trace hash " << hex64(trace_hash(t)) << "\n";
  return t.formed_at ? 0 : 2;
}

int cmd_batch(const std::string& spec_path, int jobs, const std::string& out_dir) {
  std::ifstream in(spec_path);
  if (!in) throw UsageError("cannot open batch spec " + spec_path);
  Json spec;
  try {
    spec = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("(root): invalid JSON: ") + e.what());
  }
  auto items = batch_items(spec, std::filesystem::path(spec_path).parent_path().string());
  auto results = run_batch(items, jobs, out_dir);
  std::string table = format_table(results);
  std::cout << table;
  if (!out_dir.empty()) std::ofstream(std::filesystem::path(out_dir) / "table.tsv") << table;
  std::size_t ok = 0;
  for (const auto& r : results) ok += r.within_bounds;
  std::cerr << ok << "/" << results.size() << " formed within bounds\n";
  return all_within_bounds(results) ? 0 : 2;
}

int cmd_demo(const std::string& name, const std::string& candidate, bool grant_bits, std::size_t rounds,
             const std::string& algorithm, const std::string& out_path) {
  DemoResult d;
  if (name == "fsync-trap") {
    std::vector<Point> pattern;
    for (int i = 0; i < 5; ++i) pattern.push_back(polar(1.0, kTwoPi * i / 5));
    std::vector<Point> start{{0, 0}, {0, 0}, {1, 0}, {1, 0}, {0.3, 0.8}};
    AlgorithmKind kind = algorithm_kind_from(algorithm);
    if (kind == AlgorithmKind::GoToCenterSEC) {
      pattern.pop_back();
      start.pop_back();
    }
    d = demo_fsync_trap(kind, pattern, start, rounds);
  } else if (name == "mirror-gathering") {
    d = demo_mirror_gathering(mirror_candidate_from(candidate), grant_bits, rounds);
  } else {
    throw UsageError("unknown demo " + name + " (expected fsync-trap or mirror-gathering)");
  }
  std::string path = out_path.empty() ? name + ".jsonl" : out_path;
  std::ofstream out(path);
  write_demo_trace(out, name, d);
  std::cout << "verdict: " << d.verdict << "\n";
  std::cout << "|Q| initial " << d.initial_q << ", min " << d.min_q << ", max " << d.max_q << ", rounds " << d.rounds << "\n";
  std::cout << "trace: " << path << "\n";
  return 0;
}

int cmd_serve(int port, const std::string& static_dir) {
  if (!static_dir.empty() && !std::filesystem::is_directory(static_dir))
    throw UsageError("static directory " + static_dir + " does not exist");
  httplib::Server server;
  SessionStore store;
  mount(server, store, static_dir);
  if (!server.bind_to_port("0.0.0.0", port)) {
    std::cerr << "error: cannot bind port " << port << "\n";
    return 1;
  }
  std::cerr << "listening on port " << port << (static_dir.empty() ? " (API only)" : "") << "\n";
  server.listen_after_bind();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OBLOT mobile robot simulator"};
  app.require_subcommand(1);

  std::string scenario, out;
  auto* run = app.add_subcommand("run", "run one scenario and write its trace");
  run->add_option("--scenario", scenario, "scenario JSON")->required();
  run->add_option("--out", out, "trace output (JSONL); stdout when omitted");

  std::string spec, out_dir;
  int jobs = 0;
  auto* batch = app.add_subcommand("batch", "run a batch of scenarios");
  batch->add_option("--spec", spec, "batch spec JSON")->required();
  batch->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  batch->add_option("--out-dir", out_dir, "directory for traces and table.tsv");

  std::string demo_name, candidate = "go-to-other", algorithm = "seq-pf";
  bool grant_bits = false;
  std::size_t rounds = 10000;
  auto* demo = app.add_subcommand("demo", "impossibility demos");
  demo->add_option("name", demo_name, "fsync-trap | mirror-gathering")->required();
  demo->add_option("--candidate", candidate, "stay | go-to-other | go-to-midpoint | seq-gathering");
  demo->add_flag("--grant-bits", grant_bits, "give the candidate multiplicity bits");
  demo->add_option("--rounds", rounds, "horizon");
  demo->add_option("--algorithm", algorithm, "fsync-trap algorithm: seq-pf | go-to-center-sec");
  demo->add_option("--out", out, "trace output (default <name>.jsonl)");

  int port = 8080;
  std::string static_dir;
  auto* serve = app.add_subcommand("serve", "host the session API");
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--static", static_dir, "UI assets to serve at /");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(scenario, out);
    if (*batch) return cmd_batch(spec, jobs, out_dir);
    if (*demo) return cmd_demo(demo_name, candidate, grant_bits, rounds, algorithm, out);
    if (*serve) return cmd_serve(port, static_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
