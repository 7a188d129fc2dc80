// hydrofel command-line driver.

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hydrofel/config.hpp"
#include "hydrofel/params.hpp"
#include "hydrofel/report_io.hpp"
#include "hydrofel/simulation.hpp"
#include "hydrofel/sweep.hpp"
#include "hydrofel/verify.hpp"

namespace fs = std::filesystem;
using namespace hydrofel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDiverged = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "text";
  bool quick = false;
  bool histogram = false;
  std::vector<std::string> perturb;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path output_dir(const Options& o, const char* sub) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("HYDROFEL_OUT_DIR"); env && *env) return fs::path(env) / sub;
  return fs::path("hydrofel-out") / sub;
}

RunConfig load_config(const Options& o, bool require_sweep) {
  RunConfig cfg = o.config.empty() ? default_run_config() : load_run_config_file(o.config, require_sweep);
  if (o.seed) cfg.sim.seed = *o.seed;
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

json manifest(const RunConfig& cfg, const std::string& command, const std::string& started,
              const std::string& status, const std::string& detail = {}) {
  json m;
  m["tool"] = "hydrofel";
  m["version"] = HYDROFEL_VERSION;
  m["command"] = command;
  m["seed"] = cfg.sim.seed;
  m["config"] = to_ini(cfg);
  m["config_file"] = "config.ini";
  m["started_utc"] = started;
  m["finished_utc"] = utc_now();
  m["status"] = status;
  if (!detail.empty()) m["detail"] = detail;
  return m;
}

int cmd_constants(const Options& o) {
  const RunConfig cfg = load_config(o, false);
  const auto d = derive(cfg.medium);
  const auto entries = constants_report(d.params);
  if (o.format == "json") {
    std::cout << report_json(entries, d.warnings).dump(2) << '\n';
  } else if (o.format == "csv") {
    write_report_csv(std::cout, entries);
  } else {
    write_report_text(std::cout, entries, d.warnings);
  }
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_file(fs::path(o.out) / "constants.json", report_json(entries, d.warnings).dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = load_config(o, false);
  const auto d = derive(cfg.medium);
  validate(cfg.sim);
  const fs::path dir = output_dir(o, "simulate");
  fs::create_directories(dir);
  write_file(dir / "config.ini", to_ini(cfg));
  const std::string started = utc_now();

  RunResult run;
  try {
    run = run_scaled(cfg.sim);
  } catch (const IntegrationDivergedError& e) {
    auto f = open_out(dir / "trace.csv");
    write_trace_csv(f, e.trace());
    write_file(dir / "manifest.json",
               manifest(cfg, "simulate", started, "diverged", e.what()).dump(2) + "\n");
    std::cerr << "hydrofel: integration diverged: " << e.what() << '\n';
    return kExitDiverged;
  }
  {
    auto f = open_out(dir / "trace.csv");
    write_trace_csv(f, run.trace);
  }
  json summary = summary_json(run.summary, &d.params);
  summary["warnings"] = d.warnings;
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  if (o.histogram) {
    auto f = open_out(dir / "phase_space.dat");
    write_phase_space_histogram(f, run.final_state);
  }
  write_file(dir / "manifest.json", manifest(cfg, "simulate", started, "ok").dump(2) + "\n");

  if (o.format == "json") {
    std::cout << summary.dump(2) << '\n';
  } else {
    auto show = [](const std::optional<double>& v) { return v ? format_number(*v) : "n/a"; };
    std::cout << "growth_rate_scaled      = " << show(run.summary.growth_rate) << '\n'
              << "tau_sat_scaled          = " << show(run.summary.tau_saturation) << '\n'
              << "A_peak_scaled           = " << show(run.summary.peak_amplitude) << '\n'
              << "conservation_drift      = " << format_number(run.summary.conservation_drift) << '\n'
              << "output                  = " << dir.string() << '\n';
    for (const auto& n : run.summary.notes) std::cout << "note: " << n << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  if (o.config.empty()) throw ConfigError("sweep needs --config with a [sweep] section");
  const RunConfig cfg = load_config(o, true);
  SweepSpec spec;
  spec.axis = cfg.sweep->axis;
  spec.values = cfg.sweep->values;
  spec.observable = cfg.sweep->observable;
  spec.mode = cfg.sweep->mode;
  spec.threads = cfg.sweep->threads;
  spec.base = cfg.medium;
  spec.sim = cfg.sim;
  try {
    validate(spec);
  } catch (const DomainError& e) {
    throw ConfigError(o.config + ": [sweep] " + e.what());
  }
  const fs::path dir = output_dir(o, "sweep");
  fs::create_directories(dir);
  write_file(dir / "config.ini", to_ini(cfg));
  const std::string started = utc_now();

  const SweepResult result = run_sweep(spec);
  {
    auto f = open_out(dir / "sweep.csv");
    write_sweep_csv(f, result);
  }
  const json fit = sweep_fit_json(spec, result);
  write_file(dir / "fit.json", fit.dump(2) + "\n");
  write_file(dir / "manifest.json", manifest(cfg, "sweep", started, "ok").dump(2) + "\n");

  if (o.format == "json") {
    std::cout << fit.dump(2) << '\n';
  } else if (o.format == "csv") {
    write_sweep_csv(std::cout, result);
  } else {
    write_sweep_csv(std::cout, result);
    if (result.fit) {
      std::cout << "exponent  = " << format_number(result.fit->exponent) << '\n'
                << "prefactor = " << format_number(result.fit->prefactor) << '\n'
                << "r_squared = " << format_number(result.fit->r_squared) << '\n';
    } else {
      std::cout << "fit: " << result.fit_error.value_or("unavailable") << '\n';
    }
    for (const auto& row : result.rows) {
      if (!row.ok()) std::cout << "row " << format_number(row.axis_value) << " failed: " << *row.error << '\n';
    }
  }
  return kExitOk;
}

int cmd_verify(const Options& o) {
  VerifyOptions vo;
  vo.quick = o.quick;
  for (const auto& p : o.perturb) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ConfigError("--perturb expects NAME=FACTOR, got '" + p + "'");
    double factor = 0;
    const std::string value = p.substr(eq + 1);
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), factor);
    if (ec != std::errc() || ptr != value.data() + value.size() || !(factor > 0)) {
      throw ConfigError("--perturb factor must be a positive number, got '" + value + "'");
    }
    try {
      vo.constants = perturbed_constants(vo.constants, p.substr(0, eq), factor);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    vo.self_check = false;
  }
  const bool as_json = o.format == "json";
  if (!as_json) {
    vo.on_result = [](const CriterionResult& r) { std::cout << format_result_line(r) << std::endl; };
  }
  const VerifyReport report = run_verification(vo);
  if (as_json) {
    json j = json::array();
    for (const auto& r : report.results) {
      j.push_back({{"id", r.id},
                   {"name", r.name},
                   {"status", std::string(to_string(r.status))},
                   {"measured", detail::number_or_null(r.measured)},
                   {"expected", detail::number_or_null(r.expected)},
                   {"tolerance", r.tolerance},
                   {"detail", r.detail},
                   {"seconds", r.seconds}});
    }
    std::cout << json{{"criteria", j}, {"passed", report.all_passed()}}.dump(2) << '\n';
  } else {
    std::cout << (report.all_passed() ? "verify: all criteria passed" : "verify: FAILED") << '\n';
  }
  return report.all_passed() ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collective dipole instability in ionic water: constants, simulation, sweeps"};
  app.set_version_flag("--version", std::string(HYDROFEL_VERSION));
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory (default $HYDROFEL_OUT_DIR/<command>)");
    sub->add_option("--format", o.format, "stdout format")
        ->check(CLI::IsMember({"text", "json", "csv"}));
  };
  auto* constants = app.add_subcommand("constants", "derived constants and design predictions");
  add_common(constants);
  auto* simulate = app.add_subcommand("simulate", "integrate the scaled equations");
  add_common(simulate);
  simulate->add_option("--seed", o.seed, "override the simulation seed");
  simulate->add_flag("--histogram", o.histogram, "also write a final phase-space histogram");
  auto* sweep = app.add_subcommand("sweep", "sweep one medium parameter and fit a power law");
  add_common(sweep);
  sweep->add_option("--seed", o.seed, "override the simulation seed");
  auto* verify = app.add_subcommand("verify", "run the acceptance battery");
  verify->add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "json"}));
  verify->add_flag("--quick", o.quick, "skip the long simulation criteria");
  verify->add_option("--perturb", o.perturb, "scale a physical constant, NAME=FACTOR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*constants) return cmd_constants(o);
    if (*simulate) return cmd_simulate(o);
    if (*sweep) return cmd_sweep(o);
    if (*verify) return cmd_verify(o);
  } catch (const ConfigError& e) {
    std::cerr << "hydrofel: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IntegrationDivergedError& e) {
    std::cerr << "hydrofel: integration diverged: " << e.what() << '\n';
    return kExitDiverged;
  } catch (const Error& e) {
    std::cerr << "hydrofel: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "hydrofel: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
