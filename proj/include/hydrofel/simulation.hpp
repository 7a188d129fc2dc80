#pragma once

/// @file simulation.hpp
/// One scaled run: initial condition, RK4 integration with trace recording,
/// and a summary of the instability observables.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hydrofel/diagnostics.hpp"
#include "hydrofel/dynamics.hpp"
#include "hydrofel/integrator.hpp"

namespace hydrofel {

/// Integration produced a non-finite state. Carries the last finite record
/// and everything recorded before it.
class IntegrationDivergedError : public Error {
 public:
  IntegrationDivergedError(const std::string& what, TraceRecord last, std::vector<TraceRecord> trace)
      : Error(what), last_(last), trace_(std::move(trace)) {}
  const TraceRecord& last_record() const noexcept { return last_; }
  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }

 private:
  TraceRecord last_;
  std::vector<TraceRecord> trace_;
};

struct RunSummary {
  std::optional<double> growth_rate;          ///< modal estimator
  std::optional<double> growth_rate_logslope; ///< ln A0 slope over [1e-4, 1e-2]
  std::optional<double> tau_saturation;
  std::optional<double> peak_amplitude;
  std::optional<double> tau_unity;            ///< first tau with A0 >= 1
  double conservation_drift = 0.0;            ///< max |C(tau) - C(0)|
  double conservation_drift_rate = 0.0;       ///< max |C(tau) - C(0)| / tau
  std::vector<std::string> notes;             ///< why an estimator is absent
};

inline RunSummary summarize(std::span<const TraceRecord> trace) {
  RunSummary s;
  try {
    s.growth_rate = fit_modal_growth_rate(trace).growth_rate;
  } catch (const Error& e) {
    s.notes.push_back(std::string("growth_rate: ") + e.what());
  }
  try {
    s.growth_rate_logslope = fit_growth_rate(trace);
  } catch (const Error& e) {
    s.notes.push_back(std::string("growth_rate_logslope: ") + e.what());
  }
  try {
    const auto sat = detect_saturation(trace);
    s.tau_saturation = sat.tau;
    s.peak_amplitude = sat.amplitude;
  } catch (const Error& e) {
    s.notes.push_back(std::string("saturation: ") + e.what());
  }
  s.tau_unity = first_crossing(trace, 1.0);
  if (!trace.empty()) {
    const double c0 = trace.front().conserved;
    for (const auto& r : trace) {
      const double d = std::abs(r.conserved - c0);
      s.conservation_drift = std::max(s.conservation_drift, d);
      if (r.tau > trace.front().tau) {
        s.conservation_drift_rate =
            std::max(s.conservation_drift_rate, d / (r.tau - trace.front().tau));
      }
    }
  }
  return s;
}

struct RunResult {
  SimState final_state;
  std::vector<TraceRecord> trace;
  RunSummary summary;
};

inline StepControl step_control(const SimConfig& cfg) {
  return {cfg.step, cfg.horizon, cfg.record_stride};
}

/// Integrates the scaled system from `s0` and records a TraceRecord every
/// `record_stride` steps.
inline RunResult run_scaled(SimState s0, const SimConfig& cfg) {
  validate(cfg);
  validate(s0);
  RunResult out;
  const StepControl ctl = step_control(cfg);
  out.trace.reserve(step_count(ctl) / ctl.record_stride + 2);
  try {
    out.final_state = integrate(std::move(s0), ScaledSystem{}, ctl,
                                [&](const SimState& s, std::size_t) {
                                  out.trace.push_back(make_record(s));
                                });
  } catch (const NonFiniteStateError& e) {
    const TraceRecord last = out.trace.empty() ? TraceRecord{} : out.trace.back();
    throw IntegrationDivergedError(e.what(), last, std::move(out.trace));
  }
  out.summary = summarize(out.trace);
  return out;
}

inline RunResult run_scaled(const SimConfig& cfg) { return run_scaled(init_state(cfg), cfg); }

}  // namespace hydrofel
