#include "telet/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>

namespace telet {

void write_trace_csv(const ConvergenceTrace& trace, const TraceColumns& columns, std::ostream& out) {
  out << "iter,mu,objective,inner_iters,wall_ms";
  if (columns.squarem) out << ",alpha,backtracks";
  if (columns.variant) out << ",variant";
  out << '\n';
  char buf[256];
  for (const auto& r : trace.records) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%lld,%.3f", static_cast<long long>(r.iter), r.mu, r.objective,
                  static_cast<long long>(r.inner_iters), columns.timing ? r.wall_ms : 0.0);
    out << buf;
    if (columns.squarem) {
      std::snprintf(buf, sizeof buf, ",%.17g,%d", r.alpha, r.backtracks);
      out << buf;
    }
    if (columns.variant) out << ',' << *columns.variant;
    out << '\n';
  }
}

nlohmann::json solver_config_json(const SolverConfig& c) {
  return {{"max_outer_iters", c.max_outer_iters}, {"inner_iters", c.inner_iters},
          {"mda_eta", c.mda_eta},                 {"mda_sign", c.mda_sign},
          {"stop_tol", c.stop_tol},               {"rng_seed", c.rng_seed},
          {"acceleration", to_string(c.acceleration)}, {"trace_every", c.trace_every},
          {"max_backtracks", c.max_backtracks},   {"eta_retries", c.eta_retries},
          {"eta_retry_factor", c.eta_retry_factor}};
}

nlohmann::json trace_sidecar(const ConvergenceTrace& trace, const nlohmann::json& config, std::uint64_t seed) {
  return {{"config", config},
          {"seed", seed},
          {"status", to_string(trace.status)},
          {"iterations", trace.iterations},
          {"best_mu", trace.best_mu},
          {"best_iter", trace.best_iter},
          {"bound", trace.bound},
          {"rejected_steps", trace.rejected_steps},
          {"degenerate_events", trace.degenerate_events},
          {"tool_version", kToolVersion}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j{{"subcommand", subcommand}, {"config", config},   {"argv", argv},
                   {"seed", seed},             {"tool_version", kToolVersion},
                   {"inputs", inputs},         {"outputs", outputs}, {"started_at", started_at}};
  j["finished_at"] = finished_at ? nlohmann::json(*finished_at) : nlohmann::json(nullptr);
  j["exit_code"] = exit_code ? nlohmann::json(*exit_code) : nlohmann::json(nullptr);
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  try {
    m.subcommand = j.at("subcommand").get<std::string>();
    m.config = j.at("config");
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.inputs = j.value("inputs", std::vector<std::string>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.started_at = j.value("started_at", std::string{});
    if (j.contains("finished_at") && !j["finished_at"].is_null()) m.finished_at = j["finished_at"].get<std::string>();
    if (j.contains("exit_code") && !j["exit_code"].is_null()) m.exit_code = j["exit_code"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("manifest: ") + e.what());
  }
  return m;
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("invalid JSON in '" + path.string() + "': " + e.what());
  }
}

}  // namespace telet
