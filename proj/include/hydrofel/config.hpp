#pragma once

/// @file config.hpp
/// Flat key-value configuration with [sections] and '#' comments.
///
///   [medium]
///   hydration_number = 30
///   temperature      = 300      # K
///   ion_concentration = 6.022e23
///   static_field     = 1e6
///
///   [simulation]
///   particles = 8192
///
/// Every diagnostic carries the file name and line number.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hydrofel/dynamics.hpp"
#include "hydrofel/errors.hpp"
#include "hydrofel/params.hpp"
#include "hydrofel/sweep.hpp"

namespace hydrofel {

struct IniValue {
  std::string text;
  std::size_t line = 0;
};

/// A parsed configuration file. Values keep the line they came from.
class IniDocument {
 public:
  using Section = std::map<std::string, IniValue, std::less<>>;

  static IniDocument parse(std::istream& in, std::string source) {
    IniDocument doc;
    doc.source_ = std::move(source);
    std::string raw;
    std::size_t line_no = 0;
    Section* current = nullptr;
    std::string current_name;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = strip(strip_comment(raw));
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') doc.fail(line_no, "unterminated section header");
        current_name = std::string(strip(line.substr(1, line.size() - 2)));
        if (current_name.empty()) doc.fail(line_no, "empty section name");
        current = &doc.sections_[current_name];
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) doc.fail(line_no, "expected 'key = value'");
      if (!current) doc.fail(line_no, "key outside of any [section]");
      const std::string key(strip(line.substr(0, eq)));
      const std::string value(strip(line.substr(eq + 1)));
      if (key.empty()) doc.fail(line_no, "empty key");
      if (value.empty()) doc.fail(line_no, "empty value for '" + key + "'");
      auto [it, inserted] = current->emplace(key, IniValue{value, line_no});
      if (!inserted) {
        doc.fail(line_no, "duplicate key '" + key + "' (first set on line " +
                              std::to_string(it->second.line) + ")");
      }
    }
    return doc;
  }

  static IniDocument parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    return parse(in, path);
  }

  static IniDocument parse_string(std::string_view text, std::string source = "<string>") {
    std::istringstream in{std::string(text)};
    return parse(in, std::move(source));
  }

  const std::string& source() const { return source_; }

  bool has_section(std::string_view name) const { return sections_.find(name) != sections_.end(); }

  const IniValue* find(std::string_view section, std::string_view key) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  const std::map<std::string, Section, std::less<>>& sections() const { return sections_; }

  [[noreturn]] void fail(std::size_t line, const std::string& message) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + message, line);
  }

  [[noreturn]] void fail_missing(std::string_view section, std::string_view key) const {
    throw ConfigError(source_ + ": missing required key '" + std::string(key) + "' in section [" +
                      std::string(section) + "]");
  }

 private:
  static std::string_view strip_comment(std::string_view s) {
    const auto p = s.find_first_of("#;");
    return p == std::string_view::npos ? s : s.substr(0, p);
  }
  static std::string_view strip(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::string source_;
  std::map<std::string, Section, std::less<>> sections_;
};

struct SweepSettings {
  SweepAxis axis = SweepAxis::concentration;
  std::vector<double> values;
  SweepObservable observable = SweepObservable::sat_amplitude_physical;
  SweepMode mode = SweepMode::per_row;
  unsigned threads = 0;
};

struct RunConfig {
  MediumParams medium;
  SimConfig sim;
  std::optional<SweepSettings> sweep;
};

/// The built-in scenario: n = 30, T = 300 K, rho = 6.022e23 m^-3,
/// E0z = 1e6 V/m in a 1e-12 m^3 volume, cold beam of 8192 particles.
inline RunConfig default_run_config() {
  RunConfig c;
  c.medium.concentration = 6.022e23;
  c.medium.static_field = 1e6;
  c.medium.ion_count = 6.022e11;
  c.medium.volume = 1e-12;
  return c;
}

namespace detail {

inline double parse_double(const IniDocument& doc, const IniValue& v, std::string_view key) {
  double out = 0.0;
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || p != e || !std::isfinite(out)) {
    doc.fail(v.line, "invalid number for '" + std::string(key) + "': '" + v.text + "'");
  }
  return out;
}

template <class Int>
Int parse_int(const IniDocument& doc, const IniValue& v, std::string_view key) {
  Int out{};
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || p != e) {
    doc.fail(v.line, "invalid integer for '" + std::string(key) + "': '" + v.text + "'");
  }
  return out;
}

inline void reject_unknown_keys(const IniDocument& doc,
                                const std::map<std::string, std::vector<std::string_view>>& allowed) {
  for (const auto& [name, section] : doc.sections()) {
    auto a = allowed.find(name);
    if (a == allowed.end()) {
      const std::size_t line = section.empty() ? 0 : section.begin()->second.line;
      throw ConfigError(doc.source() + ": unknown section [" + name + "]", line);
    }
    for (const auto& [key, value] : section) {
      bool known = false;
      for (auto k : a->second) known = known || k == key;
      if (!known) doc.fail(value.line, "unknown key '" + key + "' in section [" + name + "]");
    }
  }
}

/// Runs `fn` and rewraps a DomainError as a ConfigError at `line`.
template <class F>
auto at_line(const IniDocument& doc, std::size_t line, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const DomainError& e) {
    doc.fail(line, e.what());
  }
}

}  // namespace detail

/// Builds a RunConfig. [medium] must give hydration_number, temperature, a
/// concentration (ion_concentration, or ion_count with volume) and exactly
/// one of static_field / polarization. Everything else has defaults.
inline RunConfig load_run_config(const IniDocument& doc, bool require_sweep = false) {
  using detail::parse_double;
  detail::reject_unknown_keys(
      doc, {{"medium",
             {"hydration_number", "temperature", "ion_concentration", "static_field",
              "polarization", "ion_count", "volume", "wavenumber", "dipole_half_length",
              "gyration_length"}},
            {"simulation",
             {"particles", "seed", "initial_amplitude", "initial_phase", "bunching_seed",
              "momentum_spread", "step", "horizon", "record_stride", "phase_init"}},
            {"sweep", {"axis", "values", "observable", "mode", "threads"}}});

  RunConfig cfg;
  MediumParams& m = cfg.medium;
  auto required = [&](std::string_view section, std::string_view key) -> const IniValue& {
    const IniValue* v = doc.find(section, key);
    if (!v) doc.fail_missing(section, key);
    return *v;
  };
  auto optional_double = [&](std::string_view section, std::string_view key) -> std::optional<double> {
    if (const IniValue* v = doc.find(section, key)) return parse_double(doc, *v, key);
    return std::nullopt;
  };

  {
    const IniValue& v = required("medium", "hydration_number");
    m.hydration = detail::parse_int<int>(doc, v, "hydration_number");
    if (m.hydration < 1) doc.fail(v.line, "hydration_number must be >= 1");
  }
  {
    const IniValue& v = required("medium", "temperature");
    m.temperature = parse_double(doc, v, "temperature");
    if (!(m.temperature > 0)) doc.fail(v.line, "temperature must be positive");
  }
  m.concentration = optional_double("medium", "ion_concentration");
  m.ion_count = optional_double("medium", "ion_count");
  m.volume = optional_double("medium", "volume");
  m.static_field = optional_double("medium", "static_field");
  m.polarization = optional_double("medium", "polarization");
  if (auto v = optional_double("medium", "wavenumber")) m.wavenumber = *v;
  if (auto v = optional_double("medium", "dipole_half_length")) m.dipole_half_length = *v;
  if (auto v = optional_double("medium", "gyration_length")) m.gyration_length = *v;

  if (!m.concentration && !(m.ion_count && m.volume)) {
    doc.fail_missing("medium", "ion_concentration");
  }
  if (!m.static_field && !m.polarization) doc.fail_missing("medium", "static_field");
  if (m.static_field && m.polarization) {
    doc.fail(doc.find("medium", "polarization")->line,
             "give either static_field or polarization, not both");
  }
  const std::size_t medium_line = doc.find("medium", "hydration_number")->line;
  detail::at_line(doc, medium_line, [&] { return ion_concentration(m); });

  SimConfig& s = cfg.sim;
  auto sim_double = [&](std::string_view key, double& target) {
    if (auto v = optional_double("simulation", key)) target = *v;
  };
  if (const IniValue* v = doc.find("simulation", "particles")) {
    s.particles = detail::parse_int<std::size_t>(doc, *v, "particles");
  }
  if (const IniValue* v = doc.find("simulation", "seed")) {
    s.seed = detail::parse_int<std::uint64_t>(doc, *v, "seed");
  }
  if (const IniValue* v = doc.find("simulation", "record_stride")) {
    s.record_stride = detail::parse_int<std::size_t>(doc, *v, "record_stride");
  }
  sim_double("initial_amplitude", s.initial_amplitude);
  sim_double("initial_phase", s.initial_phase);
  sim_double("bunching_seed", s.bunching_seed);
  sim_double("momentum_spread", s.momentum_spread);
  sim_double("step", s.step);
  sim_double("horizon", s.horizon);
  if (const IniValue* v = doc.find("simulation", "phase_init")) {
    s.phase_init = detail::at_line(doc, v->line, [&] { return parse_phase_init(v->text); });
  }
  auto check = [&](std::string_view key, bool ok, const char* message) {
    if (const IniValue* v = doc.find("simulation", key); v && !ok) doc.fail(v->line, message);
  };
  check("particles", s.particles >= 2, "particles must be at least 2");
  check("step", s.step > 0.0, "step must be positive");
  check("horizon", s.horizon > 0.0, "horizon must be positive");
  check("record_stride", s.record_stride > 0, "record_stride must be positive");
  check("initial_amplitude", s.initial_amplitude >= 0.0, "initial_amplitude must be >= 0");
  check("momentum_spread", s.momentum_spread >= 0.0, "momentum_spread must be >= 0");
  check("initial_phase", std::isfinite(s.initial_phase), "initial_phase must be finite");
  check("bunching_seed", std::isfinite(s.bunching_seed), "bunching_seed must be finite");
  detail::at_line(doc, 0, [&] {
    validate(s);
    return 0;
  });

  if (doc.has_section("sweep") || require_sweep) {
    SweepSettings sw;
    const IniValue& axis = required("sweep", "axis");
    sw.axis = detail::at_line(doc, axis.line, [&] { return parse_sweep_axis(axis.text); });
    const IniValue& values = required("sweep", "values");
    std::string_view rest = values.text;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string item(rest.substr(0, comma));
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      item = b == std::string::npos ? std::string() : item.substr(b, e - b + 1);
      sw.values.push_back(parse_double(doc, IniValue{item, values.line}, "values"));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
    if (sw.values.size() < 3) doc.fail(values.line, "a sweep needs at least three values");
    if (const IniValue* v = doc.find("sweep", "observable")) {
      sw.observable = detail::at_line(doc, v->line, [&] { return parse_sweep_observable(v->text); });
    }
    if (const IniValue* v = doc.find("sweep", "mode")) {
      sw.mode = detail::at_line(doc, v->line, [&] { return parse_sweep_mode(v->text); });
    }
    if (const IniValue* v = doc.find("sweep", "threads")) {
      sw.threads = detail::parse_int<unsigned>(doc, *v, "threads");
    }
    cfg.sweep = sw;
  }
  return cfg;
}

inline RunConfig load_run_config_file(const std::string& path, bool require_sweep = false) {
  return load_run_config(IniDocument::parse_file(path), require_sweep);
}

/// Shortest representation that round-trips a double; locale-independent.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

/// Serialises a RunConfig back to configuration text that loads to the same
/// values.
inline std::string to_ini(const RunConfig& cfg) {
  std::ostringstream os;
  const MediumParams& m = cfg.medium;
  auto put = [&](const char* key, const std::string& value) { os << key << " = " << value << '\n'; };
  os << "[medium]\n";
  put("hydration_number", std::to_string(m.hydration));
  put("temperature", format_number(m.temperature));
  if (m.concentration) put("ion_concentration", format_number(*m.concentration));
  if (m.ion_count) put("ion_count", format_number(*m.ion_count));
  if (m.volume) put("volume", format_number(*m.volume));
  if (m.static_field) put("static_field", format_number(*m.static_field));
  if (m.polarization) put("polarization", format_number(*m.polarization));
  put("wavenumber", format_number(m.wavenumber));
  put("dipole_half_length", format_number(m.dipole_half_length));
  put("gyration_length", format_number(m.gyration_length));

  const SimConfig& s = cfg.sim;
  os << "\n[simulation]\n";
  put("particles", std::to_string(s.particles));
  put("seed", std::to_string(s.seed));
  put("initial_amplitude", format_number(s.initial_amplitude));
  put("initial_phase", format_number(s.initial_phase));
  put("bunching_seed", format_number(s.bunching_seed));
  put("momentum_spread", format_number(s.momentum_spread));
  put("step", format_number(s.step));
  put("horizon", format_number(s.horizon));
  put("record_stride", std::to_string(s.record_stride));
  put("phase_init", std::string(to_string(s.phase_init)));

  if (cfg.sweep) {
    const SweepSettings& w = *cfg.sweep;
    os << "\n[sweep]\n";
    put("axis", std::string(to_string(w.axis)));
    std::string values;
    for (std::size_t i = 0; i < w.values.size(); ++i) {
      if (i) values += ", ";
      values += format_number(w.values[i]);
    }
    put("values", values);
    put("observable", std::string(to_string(w.observable)));
    put("mode", std::string(to_string(w.mode)));
    put("threads", std::to_string(w.threads));
  }
  return os.str();
}

}  // namespace hydrofel
