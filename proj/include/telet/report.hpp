// Trace files, run manifests and JSON summaries.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "telet/solver.hpp"

namespace telet {

inline constexpr const char* kToolVersion = "0.1.0";

struct TraceColumns {
  bool squarem = false;                // adds alpha,backtracks
  std::optional<std::string> variant;  // adds variant (baselines)
  bool timing = true;                  // false writes wall_ms as 0
};

/// `iter,mu,objective,inner_iters,wall_ms[,alpha,backtracks][,variant]`.
void write_trace_csv(const ConvergenceTrace& trace, const TraceColumns& columns, std::ostream& out);

nlohmann::json solver_config_json(const SolverConfig& config);

/// Sidecar for a trace: the config it was produced with, the seed, the
/// terminal status and the best coherence reached.
nlohmann::json trace_sidecar(const ConvergenceTrace& trace, const nlohmann::json& config, std::uint64_t seed);

/// Current UTC time as ISO 8601.
std::string utc_timestamp();

struct RunManifest {
  std::string subcommand;
  nlohmann::json config;           // every option, defaults included
  std::vector<std::string> argv;   // resolved argument list for a rerun
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string started_at;
  std::optional<std::string> finished_at;
  std::optional<int> exit_code;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

void write_json(const nlohmann::json& j, const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace telet
