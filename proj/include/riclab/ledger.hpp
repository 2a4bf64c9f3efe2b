#pragma once

// Append-only JSON-lines ledger of optimization runs.

#include "riclab/optimize.hpp"

#include <filesystem>
#include <string>

namespace riclab {

struct LedgerRecord {
  std::string run_id;
  std::string timestamp;  // UTC, ISO 8601
  std::string config;     // JSON object text
  double best_value = 0.0;
  bool converged = false;
  std::uint64_t seed = 0;
  std::string device_file_path;
};

/// JSON object describing an optimization config.
std::string config_to_json(const OptConfig& config);

std::string record_to_json(const LedgerRecord& record);

/// $RICLAB_RESULTS_DIR, or "results" when unset.
std::filesystem::path results_dir();

/// Appends one line to <dir>/ledger.jsonl, creating the directory if needed.
void append_ledger(const LedgerRecord& record, const std::filesystem::path& dir = results_dir());

/// Run id derived from the config text and seed (stable across runs).
std::string make_run_id(const std::string& config_json, std::uint64_t seed);

std::string utc_timestamp();

}  // namespace riclab
