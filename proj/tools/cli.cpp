#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "telet/baselines.hpp"
#include "telet/bounds.hpp"
#include "telet/cs.hpp"
#include "telet/frame_io.hpp"
#include "telet/init.hpp"
#include "telet/report.hpp"
#include "telet/rng.hpp"

namespace telet::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("TELET_LOG");
  if (!env) return LogLevel::info;
  const std::string v = env;
  if (v == "quiet" || v == "0" || v == "off") return LogLevel::quiet;
  if (v == "debug" || v == "2") return LogLevel::debug;
  return LogLevel::info;
}

struct Logger {
  std::ostream& err;
  LogLevel level = log_level();
  void info(const std::string& msg) const {
    if (level >= LogLevel::info) err << "[telet] " << msg << '\n';
  }
  void debug(const std::string& msg) const {
    if (level >= LogLevel::debug) err << "[telet:debug] " << msg << '\n';
  }
};

std::string fmt(double v, int digits = 17) {
  std::ostringstream s;
  s << std::setprecision(digits) << v;
  return s.str();
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

struct Common {
  std::uint64_t seed = 0;
  std::string out = ".";
  int threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Run seed; all randomness derives from it")->capture_default_str();
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker cap")->check(CLI::PositiveNumber)->capture_default_str();
}

struct DesignArgs {
  Eigen::Index d = 0;
  Eigen::Index n = 0;
  std::string field = "complex";
  std::int64_t max_iters = -1;
  std::int64_t inner_iters = 100;
  double eta = 1.0;
  double tol = 1e-5;
  std::string accel = "squarem";
  std::int64_t trace_every = 1;
  double oversample = 4.0;
  bool no_timing = false;
};

struct BaselineArgs {
  Eigen::Index d = 0;
  Eigen::Index n = 0;
  std::string field = "complex";
  std::int64_t max_iters = -1;
  std::string variant = "tropp";
  std::string table = "standard";
  std::string alpha_rule = "default";
  std::int64_t trace_every = 1;
  bool no_timing = false;
};

std::int64_t default_max_iters(Eigen::Index n) { return n <= 100 ? 10000 : 1000; }

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoFailure("cannot create output directory '" + dir.string() + "'");
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw IoFailure("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw IoFailure("write failed for '" + path.string() + "'");
}

void write_json_file(const json& j, const fs::path& path) {
  try {
    write_json(j, path);
  } catch (const std::runtime_error& e) {
    throw IoFailure(e.what());
  }
}

// Manifest written up front and finalized with the outcome.
class ManifestWriter {
 public:
  ManifestWriter(RunManifest manifest, fs::path dir) : m_(std::move(manifest)), path_(std::move(dir) / "manifest.json") {
    m_.started_at = utc_timestamp();
    write_json_file(m_.to_json(), path_);
  }
  void finish(int code) {
    m_.finished_at = utc_timestamp();
    m_.exit_code = code;
    write_json_file(m_.to_json(), path_);
  }
  RunManifest& manifest() { return m_; }

 private:
  RunManifest m_;
  fs::path path_;
};

std::vector<std::string> common_argv(const Common& c) {
  return {"--seed", std::to_string(c.seed), "--out", c.out, "--threads", std::to_string(c.threads)};
}

void apply_threads(int threads) { Eigen::setNbThreads(threads); }

json frame_summary(const std::string& kind, const std::string& method, const Frame& frame, std::uint64_t seed,
                   const ConvergenceTrace& trace, bool timing, double wall_ms) {
  const double mu = max_coherence(frame.matrix());
  return {{"kind", kind},
          {"method", method},
          {"d", frame.dim()},
          {"N", frame.size()},
          {"field", to_string(frame.field())},
          {"seed", seed},
          {"mu", mu},
          {"mu_cb", trace.bound},
          {"welch", welch_bound(frame.dim(), frame.size()).value},
          {"gap", mu - trace.bound},
          {"iterations", trace.iterations},
          {"best_iter", trace.best_iter},
          {"status", to_string(trace.status)},
          {"rejected_steps", trace.rejected_steps},
          {"degenerate_events", trace.degenerate_events},
          {"wall_ms", timing ? wall_ms : 0.0}};
}

void check_shape(Eigen::Index d, Eigen::Index n, Field field) {
  if (d < 1) throw InvalidInput("--d must be at least 1");
  if (n < d) throw InvalidInput("--N must be at least --d");
  if (n < 2) throw InvalidInput("--N must be at least 2 (coherence needs a pair)");
  if (field == Field::complex && d == 1) throw InvalidInput("complex frames need d >= 2 (composite bound undefined)");
}

int cmd_design(const DesignArgs& a, const Common& c, Logger& log, std::ostream& out) {
  const Field field = parse_field(a.field);
  check_shape(a.d, a.n, field);
  SolverConfig config;
  config.max_outer_iters = a.max_iters > 0 ? a.max_iters : default_max_iters(a.n);
  config.inner_iters = a.inner_iters;
  config.mda_eta = a.eta;
  config.stop_tol = a.tol;
  config.acceleration = parse_acceleration(a.accel);
  config.trace_every = a.trace_every;
  config.rng_seed = derive_seed(c.seed, "solver");
  config.validate();
  InitOptions init;
  init.oversample_factor = a.oversample;
  init.seed = derive_seed(c.seed, "init");
  apply_threads(c.threads);

  const fs::path dir = c.out;
  ensure_dir(dir);
  RunManifest m;
  m.subcommand = "design";
  m.seed = c.seed;
  m.config = {{"d", a.d},          {"N", a.n},        {"field", a.field},       {"solver", solver_config_json(config)},
              {"oversample_factor", a.oversample}, {"complex_jitter", init.complex_jitter},
              {"init_seed", init.seed}, {"threads", c.threads}, {"timing", !a.no_timing}};
  m.argv = {"design", "--d", std::to_string(a.d), "--N", std::to_string(a.n), "--field", a.field,
            "--max-iters", std::to_string(config.max_outer_iters), "--inner-iters", std::to_string(a.inner_iters),
            "--eta", fmt(a.eta), "--tol", fmt(a.tol), "--accel", a.accel, "--trace-every", std::to_string(a.trace_every),
            "--oversample", fmt(a.oversample)};
  for (auto& s : common_argv(c)) m.argv.push_back(s);
  if (a.no_timing) m.argv.push_back("--no-timing");
  m.outputs = {"frame.txt", "trace.csv", "trace.json", "summary.json"};
  ManifestWriter manifest(std::move(m), dir);

  log.info("design " + to_string(field) + " (" + std::to_string(a.d) + "," + std::to_string(a.n) + "), " +
           std::to_string(config.max_outer_iters) + " iterations max");
  const Frame x0 = init_frame(a.d, a.n, field, init);
  log.debug("initial mu " + fmt(max_coherence(x0.matrix()), 8));
  const SolveResult result = solve(x0, config);
  const double wall = result.trace.records.empty() ? 0.0 : result.trace.records.back().wall_ms;

  try {
    write_frame(result.frame, dir / "frame.txt");
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
  std::ostringstream csv;
  write_trace_csv(result.trace, {config.acceleration == Acceleration::squarem, std::nullopt, !a.no_timing}, csv);
  write_text(dir / "trace.csv", csv.str());
  write_json_file(trace_sidecar(result.trace, manifest.manifest().config, c.seed), dir / "trace.json");
  const json summary = frame_summary("design", "telet", result.frame, c.seed, result.trace, !a.no_timing, wall);
  write_json_file(summary, dir / "summary.json");

  out << "mu=" << fixed(summary["mu"].get<double>(), 6) << " mu_cb=" << fixed(result.trace.bound, 6)
      << " iterations=" << result.trace.iterations << " status=" << to_string(result.trace.status) << '\n';
  const int code = result.trace.status == TerminalStatus::stalled ? kStalled : kOk;
  if (code == kStalled) log.info("run stalled at a fixed point of the MM map; outputs written");
  manifest.finish(code);
  return code;
}

int cmd_baseline(const BaselineArgs& a, const Common& c, Logger& log, std::ostream& out) {
  const Field field = parse_field(a.field);
  check_shape(a.d, a.n, field);
  APVariant variant = APVariant::make(parse_variant(a.variant), a.d, a.n, parse_variant_table(a.table));
  if (a.alpha_rule != "default") variant.alpha_rule = parse_alpha_rule(a.alpha_rule);
  BaselineConfig config;
  config.max_iters = a.max_iters > 0 ? a.max_iters : default_max_iters(a.n);
  config.seed = derive_seed(c.seed, "init");
  config.trace_every = a.trace_every;
  if (config.trace_every < 1) throw InvalidInput("--trace-every must be positive");
  apply_threads(c.threads);

  const fs::path dir = c.out;
  ensure_dir(dir);
  RunManifest m;
  m.subcommand = "baseline";
  m.seed = c.seed;
  const json cfg = {{"d", a.d},
                    {"N", a.n},
                    {"field", a.field},
                    {"variant", a.variant},
                    {"table", a.table},
                    {"eta", variant.eta},
                    {"alpha_rule", to_string(variant.alpha_rule)},
                    {"max_iters", config.max_iters},
                    {"trace_every", config.trace_every},
                    {"init_seed", config.seed},
                    {"threads", c.threads},
                    {"timing", !a.no_timing}};
  m.config = cfg;
  m.argv = {"baseline", "--d", std::to_string(a.d), "--N", std::to_string(a.n), "--field", a.field,
            "--variant", a.variant, "--table", a.table, "--alpha-rule", a.alpha_rule,
            "--max-iters", std::to_string(config.max_iters), "--trace-every", std::to_string(a.trace_every)};
  for (auto& s : common_argv(c)) m.argv.push_back(s);
  if (a.no_timing) m.argv.push_back("--no-timing");
  m.outputs = {"frame.txt", "trace.csv", "trace.json", "summary.json"};
  ManifestWriter manifest(std::move(m), dir);

  log.info("baseline " + a.variant + " " + to_string(field) + " (" + std::to_string(a.d) + "," +
           std::to_string(a.n) + ")");
  const BaselineResult result = alternating_projection(a.d, a.n, field, variant, config);
  const double wall = result.trace.records.empty() ? 0.0 : result.trace.records.back().wall_ms;
  try {
    write_frame(result.frame, dir / "frame.txt");
  } catch (const std::exception& e) {
    throw IoFailure(e.what());
  }
  std::ostringstream csv;
  write_trace_csv(result.trace, {false, a.variant, !a.no_timing}, csv);
  write_text(dir / "trace.csv", csv.str());
  write_json_file(trace_sidecar(result.trace, cfg, c.seed), dir / "trace.json");
  const json summary = frame_summary("baseline", a.variant, result.frame, c.seed, result.trace, !a.no_timing, wall);
  write_json_file(summary, dir / "summary.json");
  out << "mu=" << fixed(summary["mu"].get<double>(), 6) << " mu_cb=" << fixed(result.trace.bound, 6)
      << " iterations=" << result.trace.iterations << " status=" << to_string(result.trace.status) << '\n';
  manifest.finish(kOk);
  return kOk;
}

int cmd_bounds(const std::vector<Eigen::Index>& ds, const std::vector<Eigen::Index>& ns, const std::string& field_text,
               int digits, const Common& c, std::ostream& out) {
  const Field field = parse_field(field_text);
  if (digits < 1 || digits > 17) throw InvalidInput("--digits must lie in [1, 17]");
  std::ostringstream csv;
  csv << "d,N,field,welch,composite\n";
  for (auto d : ds) {
    for (auto n : ns) {
      check_shape(d, n, field);
      csv << d << ',' << n << ',' << field_text << ',' << fixed(welch_bound(d, n).value, digits) << ','
          << fixed(composite_bound(d, n, field), digits) << '\n';
    }
  }
  const fs::path dir = c.out;
  ensure_dir(dir);
  RunManifest m;
  m.subcommand = "bounds";
  m.seed = c.seed;
  m.config = {{"d", ds}, {"N", ns}, {"field", field_text}, {"digits", digits}};
  m.argv = {"bounds", "--d"};
  for (auto d : ds) m.argv.push_back(std::to_string(d));
  m.argv.push_back("--N");
  for (auto n : ns) m.argv.push_back(std::to_string(n));
  for (const std::string& s : {std::string("--field"), field_text, std::string("--digits"), std::to_string(digits)}) {
    m.argv.push_back(s);
  }
  for (auto& s : common_argv(c)) m.argv.push_back(s);
  m.outputs = {"bounds.csv"};
  ManifestWriter manifest(std::move(m), dir);
  write_text(dir / "bounds.csv", csv.str());
  out << csv.str();
  manifest.finish(kOk);
  return kOk;
}

int cmd_cs(const std::string& spec_path, const Common& c, Logger& log, std::ostream& out) {
  if (spec_path.empty()) throw InvalidInput("cs needs --spec <json>");
  const ExperimentSpec spec = load_experiment_spec(spec_path);
  apply_threads(c.threads);
  const fs::path dir = c.out;
  ensure_dir(dir);
  RunManifest m;
  m.subcommand = "cs";
  m.seed = c.seed;
  m.config = json::parse(experiment_spec_to_json(spec));
  m.config["threads"] = c.threads;
  m.argv = {"cs", "--spec", fs::absolute(spec_path).string()};
  for (auto& s : common_argv(c)) m.argv.push_back(s);
  m.inputs = {fs::absolute(spec_path).string()};
  m.outputs = {"results.csv"};
  ManifestWriter manifest(std::move(m), dir);

  log.info("cs experiment: " + std::to_string(spec.d_list.size() * spec.k_list.size() * spec.seeds.size() *
                                              spec.methods.size()) + " runs");
  const auto rows = run_synthetic_experiment(spec);
  std::ostringstream csv;
  write_results_csv(rows, csv);
  write_text(dir / "results.csv", csv.str());
  out << csv.str();
  manifest.finish(kOk);
  return kOk;
}

const std::vector<std::string> kMethodOrder{"telet", "tropp", "xiong", "katsaggelos"};

int cmd_table(const std::string& input, const Common& c, std::ostream& out) {
  if (!fs::is_directory(input)) throw InvalidInput("table: '" + input + "' is not a directory");
  struct Row {
    double mu_cb = 0.0;
    std::map<std::string, double> mu;
  };
  std::map<std::tuple<Eigen::Index, Eigen::Index, std::string>, Row> rows;
  std::vector<std::string> methods;
  std::vector<std::string> inputs;
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(input)) {
    if (entry.is_regular_file() && entry.path().filename() == "summary.json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    const json s = read_json(path);
    try {
      const auto key = std::make_tuple(s.at("d").get<Eigen::Index>(), s.at("N").get<Eigen::Index>(),
                                       s.at("field").get<std::string>());
      const std::string method = s.at("method").get<std::string>();
      Row& row = rows[key];
      row.mu_cb = s.at("mu_cb").get<double>();
      auto it = row.mu.find(method);
      const double mu = s.at("mu").get<double>();
      row.mu[method] = it == row.mu.end() ? mu : std::min(it->second, mu);
      if (std::find(methods.begin(), methods.end(), method) == methods.end()) methods.push_back(method);
    } catch (const json::exception& e) {
      throw InvalidInput("table: malformed summary '" + path.string() + "': " + e.what());
    }
    inputs.push_back(fs::absolute(path).string());
  }
  if (rows.empty()) throw InvalidInput("table: no summary.json files under '" + input + "'");
  std::sort(methods.begin(), methods.end(), [](const std::string& a, const std::string& b) {
    auto rank = [](const std::string& m) {
      auto it = std::find(kMethodOrder.begin(), kMethodOrder.end(), m);
      return it - kMethodOrder.begin();
    };
    return rank(a) != rank(b) ? rank(a) < rank(b) : a < b;
  });

  std::ostringstream md, csv;
  md << "| (d,N) | field | mu_CB |";
  csv << "d,N,field,mu_CB";
  for (const auto& m : methods) {
    md << ' ' << m << " |";
    csv << ',' << m;
  }
  md << "\n|---|---|---|";
  for (std::size_t i = 0; i < methods.size(); ++i) md << "---|";
  md << '\n';
  csv << '\n';
  for (const auto& [key, row] : rows) {
    const auto& [d, n, field] = key;
    md << "| (" << d << ',' << n << ") | " << field << " | " << fixed(row.mu_cb, 4) << " |";
    csv << d << ',' << n << ',' << field << ',' << fmt(row.mu_cb);
    for (const auto& m : methods) {
      auto it = row.mu.find(m);
      md << ' ' << (it == row.mu.end() ? "-" : fixed(it->second, 4)) << " |";
      csv << ',' << (it == row.mu.end() ? "" : fmt(it->second));
    }
    md << '\n';
    csv << '\n';
  }
  const fs::path dir = c.out;
  ensure_dir(dir);
  RunManifest m;
  m.subcommand = "table";
  m.seed = c.seed;
  m.config = {{"input", fs::absolute(input).string()}};
  m.argv = {"table", fs::absolute(input).string()};
  for (auto& s : common_argv(c)) m.argv.push_back(s);
  m.inputs = inputs;
  m.outputs = {"table.md", "table.csv"};
  ManifestWriter manifest(std::move(m), dir);
  write_text(dir / "table.md", md.str());
  write_text(dir / "table.csv", csv.str());
  out << md.str();
  manifest.finish(kOk);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Logger log{err};
  CLI::App app{"Low-coherence frame design and sensing-matrix experiments", "telet"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  Common common;
  DesignArgs design;
  auto* design_cmd = app.add_subcommand("design", "Design a frame with the MM solver");
  design_cmd->add_option("--d", design.d, "Vector dimension")->required();
  design_cmd->add_option("--N", design.n, "Number of vectors")->required();
  design_cmd->add_option("--field", design.field, "Scalar field")->check(CLI::IsMember({"real", "complex"}))->capture_default_str();
  design_cmd->add_option("--max-iters", design.max_iters, "Outer iterations (default 1e4 for N <= 100, else 1e3)");
  design_cmd->add_option("--inner-iters", design.inner_iters, "Mirror-ascent iterations")->capture_default_str();
  design_cmd->add_option("--eta", design.eta, "Mirror-ascent step constant")->capture_default_str();
  design_cmd->add_option("--tol", design.tol, "Stop when |mu - bound| < tol")->capture_default_str();
  design_cmd->add_option("--accel", design.accel, "Acceleration")->check(CLI::IsMember({"none", "squarem"}))->capture_default_str();
  design_cmd->add_option("--trace-every", design.trace_every, "Trace stride")->capture_default_str();
  design_cmd->add_option("--oversample", design.oversample, "Initialization oversampling factor")->capture_default_str();
  design_cmd->add_flag("--no-timing", design.no_timing, "Write wall times as 0 for byte-identical reruns");
  add_common(design_cmd, common);

  BaselineArgs base;
  auto* base_cmd = app.add_subcommand("baseline", "Alternating-projection baseline");
  base_cmd->add_option("--d", base.d, "Vector dimension")->required();
  base_cmd->add_option("--N", base.n, "Number of vectors")->required();
  base_cmd->add_option("--field", base.field, "Scalar field")->check(CLI::IsMember({"real", "complex"}))->capture_default_str();
  base_cmd->add_option("--max-iters", base.max_iters, "Iterations (default 1e4 for N <= 100, else 1e3)");
  base_cmd->add_option("--variant", base.variant, "Variant")->check(CLI::IsMember({"tropp", "xiong", "katsaggelos"}))->capture_default_str();
  base_cmd->add_option("--table", base.table, "Parameter table")->check(CLI::IsMember({"standard", "literal"}))->capture_default_str();
  base_cmd->add_option("--alpha-rule", base.alpha_rule, "Override the tightness constant")
      ->check(CLI::IsMember({"default", "sqrt_N_over_d", "N_over_d", "mean_top_d_eigs"}))
      ->capture_default_str();
  base_cmd->add_option("--trace-every", base.trace_every, "Trace stride")->capture_default_str();
  base_cmd->add_flag("--no-timing", base.no_timing, "Write wall times as 0 for byte-identical reruns");
  add_common(base_cmd, common);

  std::vector<Eigen::Index> bound_d, bound_n;
  std::string bound_field = "complex";
  int digits = 4;
  auto* bounds_cmd = app.add_subcommand("bounds", "Welch and composite bounds over a (d, N) grid");
  bounds_cmd->add_option("--d", bound_d, "Dimensions")->required();
  bounds_cmd->add_option("--N", bound_n, "Frame sizes")->required();
  bounds_cmd->add_option("--field", bound_field, "Scalar field")->check(CLI::IsMember({"real", "complex"}))->capture_default_str();
  bounds_cmd->add_option("--digits", digits, "Decimals printed")->capture_default_str();
  add_common(bounds_cmd, common);

  std::string spec_path;
  auto* cs_cmd = app.add_subcommand("cs", "Synthetic compressed-sensing experiment from a JSON spec");
  cs_cmd->add_option("--spec", spec_path, "Experiment spec (JSON)")->required();
  add_common(cs_cmd, common);

  std::string table_input;
  auto* table_cmd = app.add_subcommand("table", "Tabulate summary.json files found under a directory");
  table_cmd->add_option("input", table_input, "Directory to scan")->required();
  add_common(table_cmd, common);

  std::string manifest_path;
  std::string rerun_out;
  auto* rerun_cmd = app.add_subcommand("rerun", "Repeat a run from its manifest.json");
  rerun_cmd->add_option("manifest", manifest_path, "Manifest file")->required();
  rerun_cmd->add_option("--out", rerun_out, "Output directory (default: the original one)");

  // CLI11 wants argv order reversed when given a vector.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*design_cmd) return cmd_design(design, common, log, out);
    if (*base_cmd) return cmd_baseline(base, common, log, out);
    if (*bounds_cmd) return cmd_bounds(bound_d, bound_n, bound_field, digits, common, out);
    if (*cs_cmd) return cmd_cs(spec_path, common, log, out);
    if (*table_cmd) return cmd_table(table_input, common, out);
    if (*rerun_cmd) {
      RunManifest m = RunManifest::from_json(read_json(manifest_path));
      std::vector<std::string> again = m.argv;
      if (!rerun_out.empty()) {
        auto it = std::find(again.begin(), again.end(), "--out");
        if (it != again.end() && it + 1 != again.end()) {
          *(it + 1) = rerun_out;
        } else {
          again.push_back("--out");
          again.push_back(rerun_out);
        }
      }
      if (!again.empty() && again.front() == "rerun") throw InvalidInput("manifest cannot describe a rerun");
      log.info("rerun of '" + m.subcommand + "' from " + manifest_path);
      return run(again, out, err);
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DegenerateInput& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const FrameFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace telet::cli
