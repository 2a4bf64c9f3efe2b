#include "riclab/ledger.hpp"

#include "riclab/device_io.hpp"
#include "riclab/error.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace riclab {

std::string config_to_json(const OptConfig& c) {
  std::ostringstream os;
  os << "{\"p\": \"" << c.p.str() << "\", \"dim\": " << c.dim << ", \"n\": " << c.count()
     << ", \"unbiased\": " << (c.constraints.unbiased ? "true" : "false") << ", \"rank\": \""
     << to_string(c.constraints.rank) << "\", \"post_states\": \"" << to_string(c.constraints.post_states)
     << "\", \"restarts\": " << c.restarts << ", \"seed\": " << c.seed << ", \"max_iters\": " << c.max_iters
     << ", \"max_outer\": " << c.max_outer << ", \"tol_constraint\": " << format_double(c.tol_constraint)
     << ", \"tol_objective\": " << format_double(c.tol_objective) << "}";
  return os.str();
}

std::string record_to_json(const LedgerRecord& r) {
  std::ostringstream os;
  os << "{\"run_id\": " << nlohmann::json(r.run_id).dump() << ", \"timestamp\": " << nlohmann::json(r.timestamp).dump()
     << ", \"config\": " << r.config << ", \"best_value\": " << format_double(r.best_value)
     << ", \"converged\": " << (r.converged ? "true" : "false") << ", \"seed\": " << r.seed
     << ", \"device_file_path\": " << nlohmann::json(r.device_file_path).dump() << "}";
  return os.str();
}

std::filesystem::path results_dir() {
  const char* env = std::getenv("RICLAB_RESULTS_DIR");
  return env != nullptr && *env != '\0' ? std::filesystem::path(env) : std::filesystem::path("results");
}

void append_ledger(const LedgerRecord& record, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create results directory " + dir.string() + ": " + ec.message());
  std::ofstream out(dir / "ledger.jsonl", std::ios::app);
  if (!out) throw Error(ErrorKind::Io, "cannot open ledger in " + dir.string());
  out << record_to_json(record) << '\n';
}

std::string make_run_id(const std::string& config_json, std::uint64_t seed) {
  const std::size_t h = std::hash<std::string>{}(config_json + "#" + std::to_string(seed));
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016zx", h);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace riclab
