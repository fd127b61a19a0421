#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oblot/engine.hpp"
#include "oblot/io.hpp"

namespace oblot {

struct BatchItem {
  std::string label;
  Scenario scenario;
};

struct BatchResult {
  std::string label;
  std::size_t n = 0;
  std::size_t k = 0;
  bool formed = false;
  bool within_bounds = false;
  std::size_t rounds = 0;
  std::size_t epochs = 0;  // epochs used up to formation
  double bound = 0.0;      // total-epoch bound, infinite when none applies
  double margin = 0.0;     // bound - epochs
  std::uint64_t hash = 0;
  std::string error;
};

/// {"generators": [...], "scenarios": [...]}; see README for the fields.
/// Scenario file paths are taken relative to base_dir.
std::vector<BatchItem> batch_items(const Json& spec, const std::string& base_dir = "");

BatchResult run_one(const BatchItem& item, const std::string& trace_path = "");

/// One engine per scenario across an OpenMP team of jobs threads; results keep input order.
/// An empty out_dir writes no traces.
std::vector<BatchResult> run_batch(const std::vector<BatchItem>& items, int jobs, const std::string& out_dir = "");
/// Same work on the calling thread.
std::vector<BatchResult> run_batch_serial(const std::vector<BatchItem>& items, const std::string& out_dir = "");

std::string format_table(const std::vector<BatchResult>& results);
bool all_within_bounds(const std::vector<BatchResult>& results);

}  // namespace oblot
