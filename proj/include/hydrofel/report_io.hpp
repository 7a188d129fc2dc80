#pragma once

/// @file report_io.hpp
/// File formats: trace CSV, run summary, constants report, sweep table and
/// phase-space histogram. Numbers are written with up to 17 significant
/// digits and a '.' decimal point regardless of locale.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "hydrofel/config.hpp"
#include "hydrofel/diagnostics.hpp"
#include "hydrofel/params.hpp"
#include "hydrofel/simulation.hpp"
#include "hydrofel/sweep.hpp"

namespace hydrofel {

using json = nlohmann::json;

inline constexpr std::string_view kTraceHeader = "tau,A0,phi,b_re,b_im,mean_p,conserved_C";
inline constexpr std::string_view kSweepHeader = "axis_value,observable,tau_sat,A_peak,growth_rate";

inline void write_trace_csv(std::ostream& os, std::span<const TraceRecord> trace) {
  os << kTraceHeader << '\n';
  for (const auto& r : trace) {
    os << format_number(r.tau) << ',' << format_number(r.amplitude) << ','
       << format_number(r.phase) << ',' << format_number(r.bunching.real()) << ','
       << format_number(r.bunching.imag()) << ',' << format_number(r.mean_momentum) << ','
       << format_number(r.conserved) << '\n';
  }
}

namespace detail {
inline json optional_number(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}
inline json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace detail

inline json summary_json(const RunSummary& s, const DerivedParams* dp = nullptr) {
  json j;
  j["growth_rate_scaled"] = detail::optional_number(s.growth_rate);
  j["growth_rate_logslope_scaled"] = detail::optional_number(s.growth_rate_logslope);
  j["tau_sat_scaled"] = detail::optional_number(s.tau_saturation);
  j["A_peak_scaled"] = detail::optional_number(s.peak_amplitude);
  j["tau_unity_scaled"] = detail::optional_number(s.tau_unity);
  j["conservation_drift"] = s.conservation_drift;
  j["conservation_drift_rate"] = s.conservation_drift_rate;
  if (dp) {
    j["A_peak_physical"] = s.peak_amplitude ? json(*s.peak_amplitude * dp->amplitude_scale)
                                            : json(nullptr);
    j["gain_time_physical"] = s.tau_unity ? json(*s.tau_unity * dp->time_scale) : json(nullptr);
    j["growth_rate_physical"] =
        s.growth_rate ? json(*s.growth_rate / dp->time_scale) : json(nullptr);
  }
  j["notes"] = s.notes;
  return j;
}

struct ReportEntry {
  std::string key;
  double value;
  std::string unit;
};

/// Every derived constant and the closed-form design predictions.
inline std::vector<ReportEntry> constants_report(const DerivedParams& d,
                                                 const PhysicalConstants& pc = kCodata2018) {
  const double rho = d.concentration, pz = d.polarization;
  return {
      {"hydration_number", d.hydration, "1"},
      {"temperature", d.temperature, "K"},
      {"ion_concentration", rho, "m^-3"},
      {"coherence_length", d.coherence_length, "m"},
      {"angular_frequency", d.angular_frequency, "rad/s"},
      {"gap", d.gap, "J"},
      {"gap_over_thermal", d.gap / (pc.k_B * d.temperature), "1"},
      {"d0", d.d0, "C m"},
      {"d0_tilde", d.d0_tilde, "C m"},
      {"moment_of_inertia", d.moment_of_inertia, "kg m^2"},
      {"population_difference", d.population_difference, "1"},
      {"polarization", pz, "1"},
      {"d0_tilde_ave", d.d0_tilde_ave, "C m"},
      {"alpha", d.alpha, "SI"},
      {"beta", d.beta, "SI"},
      {"amplitude_scale", d.amplitude_scale, "SI"},
      {"time_scale", d.time_scale, "s"},
      {"saturated_amplitude", d.amplitude_scale, "SI"},
      {"gain_time", d.time_scale, "s"},
      {"c_A", d.amplitude_scale / (std::cbrt(rho * rho) * std::cbrt(pz)), "SI"},
      {"c_t", d.time_scale * std::cbrt(rho) * std::cbrt(pz * pz), "m^-1 s"},
  };
}

inline void write_report_text(std::ostream& os, std::span<const ReportEntry> entries,
                              std::span<const std::string> warnings = {}) {
  std::size_t width = 0;
  for (const auto& e : entries) width = std::max(width, e.key.size());
  for (const auto& e : entries) {
    os << std::left << std::setw(static_cast<int>(width)) << e.key << " = "
       << format_number(e.value) << ' ' << e.unit << '\n';
  }
  for (const auto& w : warnings) os << "warning: " << w << '\n';
}

inline json report_json(std::span<const ReportEntry> entries,
                        std::span<const std::string> warnings = {}) {
  json j;
  json values = json::object();
  json units = json::object();
  for (const auto& e : entries) {
    values[e.key] = e.value;
    units[e.key] = e.unit;
  }
  j["values"] = values;
  j["units"] = units;
  j["warnings"] = std::vector<std::string>(warnings.begin(), warnings.end());
  return j;
}

inline void write_report_csv(std::ostream& os, std::span<const ReportEntry> entries) {
  os << "key,value,unit\n";
  for (const auto& e : entries) os << e.key << ',' << format_number(e.value) << ',' << e.unit << '\n';
}

inline void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  os << kSweepHeader << '\n';
  for (const auto& row : r.rows) {
    os << format_number(row.axis_value) << ',' << format_number(row.observable) << ','
       << format_number(row.tau_saturation) << ',' << format_number(row.peak_amplitude) << ','
       << format_number(row.growth_rate) << '\n';
  }
}

inline json sweep_fit_json(const SweepSpec& spec, const SweepResult& r) {
  json j;
  j["axis"] = std::string(to_string(spec.axis));
  j["observable"] = std::string(to_string(spec.observable));
  j["mode"] = std::string(to_string(spec.mode));
  if (r.fit) {
    j["fit"] = {{"exponent", r.fit->exponent},
                {"prefactor", r.fit->prefactor},
                {"r_squared", r.fit->r_squared}};
  } else {
    j["fit"] = nullptr;
    j["fit_error"] = r.fit_error.value_or("");
  }
  json failed = json::array();
  for (const auto& row : r.rows) {
    if (!row.ok()) failed.push_back({{"axis_value", row.axis_value}, {"error", *row.error}});
  }
  j["failed_rows"] = failed;
  return j;
}

/// 2-D histogram of (theta mod 2 pi, p) in gnuplot's blank-line-separated
/// block format: "theta_center p_center count".
inline void write_phase_space_histogram(std::ostream& os, const SimState& s,
                                        std::size_t theta_bins = 64, std::size_t p_bins = 64) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double pmin = 0, pmax = 0;
  if (!s.momentum.empty()) {
    const auto [lo, hi] = std::minmax_element(s.momentum.begin(), s.momentum.end());
    pmin = *lo;
    pmax = *hi;
  }
  if (pmax - pmin < 1e-12) {
    pmin -= 0.5;
    pmax += 0.5;
  }
  std::vector<std::size_t> counts(theta_bins * p_bins, 0);
  for (std::size_t j = 0; j < s.size(); ++j) {
    double th = std::fmod(s.theta[j], two_pi);
    if (th < 0) th += two_pi;
    auto ti = static_cast<std::size_t>(th / two_pi * static_cast<double>(theta_bins));
    auto pi = static_cast<std::size_t>((s.momentum[j] - pmin) / (pmax - pmin) *
                                       static_cast<double>(p_bins));
    ti = std::min(ti, theta_bins - 1);
    pi = std::min(pi, p_bins - 1);
    ++counts[ti * p_bins + pi];
  }
  os << "# theta p count  (tau = " << format_number(s.time) << ")\n";
  for (std::size_t ti = 0; ti < theta_bins; ++ti) {
    const double tc = (static_cast<double>(ti) + 0.5) * two_pi / static_cast<double>(theta_bins);
    for (std::size_t pi = 0; pi < p_bins; ++pi) {
      const double pc = pmin + (static_cast<double>(pi) + 0.5) * (pmax - pmin) /
                                   static_cast<double>(p_bins);
      os << format_number(tc) << ' ' << format_number(pc) << ' ' << counts[ti * p_bins + pi]
         << '\n';
    }
    os << '\n';
  }
}

}  // namespace hydrofel
