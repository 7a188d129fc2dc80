#pragma once

/// @file sweep.hpp
/// Parameter sweeps over the scenario and the power-law checks of the
/// closed-form design formulas.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hydrofel/params.hpp"
#include "hydrofel/simulation.hpp"

namespace hydrofel {

enum class SweepAxis { concentration, static_field, ion_count, temperature, hydration };
enum class SweepObservable { sat_amplitude_physical, gain_time_physical, sat_intensity_physical };
/// per_row: a fresh scaled run for every axis value.
/// shared: one scaled run, rescaled per row.
enum class SweepMode { per_row, shared };

inline std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::concentration: return "rho";
    case SweepAxis::static_field: return "E0z";
    case SweepAxis::ion_count: return "N_ions";
    case SweepAxis::temperature: return "T";
    case SweepAxis::hydration: return "n";
  }
  return "?";
}

inline std::string_view to_string(SweepObservable o) {
  switch (o) {
    case SweepObservable::sat_amplitude_physical: return "sat_amplitude_physical";
    case SweepObservable::gain_time_physical: return "gain_time_physical";
    case SweepObservable::sat_intensity_physical: return "sat_intensity_physical";
  }
  return "?";
}

inline std::string_view to_string(SweepMode m) {
  return m == SweepMode::per_row ? "per-row" : "shared";
}

inline SweepAxis parse_sweep_axis(std::string_view s) {
  for (auto a : {SweepAxis::concentration, SweepAxis::static_field, SweepAxis::ion_count,
                 SweepAxis::temperature, SweepAxis::hydration}) {
    if (s == to_string(a)) return a;
  }
  throw DomainError("unknown sweep axis '" + std::string(s) + "'");
}

inline SweepObservable parse_sweep_observable(std::string_view s) {
  for (auto o : {SweepObservable::sat_amplitude_physical, SweepObservable::gain_time_physical,
                 SweepObservable::sat_intensity_physical}) {
    if (s == to_string(o)) return o;
  }
  throw DomainError("unknown sweep observable '" + std::string(s) + "'");
}

inline SweepMode parse_sweep_mode(std::string_view s) {
  if (s == "per-row") return SweepMode::per_row;
  if (s == "shared") return SweepMode::shared;
  throw DomainError("unknown sweep mode '" + std::string(s) + "'");
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::concentration;
  std::vector<double> values;
  MediumParams base;
  SimConfig sim;
  SweepObservable observable = SweepObservable::sat_amplitude_physical;
  SweepMode mode = SweepMode::per_row;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

struct SweepRow {
  double axis_value = 0.0;
  double observable = std::numeric_limits<double>::quiet_NaN();
  double tau_saturation = std::numeric_limits<double>::quiet_NaN();
  double peak_amplitude = std::numeric_limits<double>::quiet_NaN();
  double growth_rate = std::numeric_limits<double>::quiet_NaN();
  std::optional<std::string> error;

  bool ok() const { return !error.has_value(); }
};

struct SweepResult {
  std::vector<SweepRow> rows;       ///< one per axis value, in spec order
  std::optional<PowerLawFit> fit;   ///< over successful rows, when at least three
  std::optional<std::string> fit_error;
};

inline void validate(const SweepSpec& spec) {
  if (spec.values.size() < 3) throw DomainError("a sweep needs at least three axis values");
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > 0.0) || !std::isfinite(spec.values[i])) {
      throw DomainError("sweep values must be strictly positive");
    }
    if (i > 0 && !(spec.values[i] > spec.values[i - 1])) {
      throw DomainError("sweep values must be sorted ascending");
    }
  }
  if (spec.axis == SweepAxis::hydration) {
    for (double v : spec.values) {
      if (v != std::floor(v)) throw DomainError("hydration sweep values must be integers");
    }
  }
  validate(spec.sim);
}

/// The scenario for one axis value. Concentration and ion count stay
/// consistent: a rho sweep rescales N at fixed V, an N sweep recomputes rho.
inline MediumParams apply_axis(MediumParams m, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::concentration:
      m.concentration = value;
      if (m.volume) m.ion_count = value * *m.volume;
      else m.ion_count.reset();
      break;
    case SweepAxis::static_field:
      m.static_field = value;
      m.polarization.reset();
      break;
    case SweepAxis::ion_count:
      if (!m.volume) throw DomainError("an ion-count sweep needs a fixed volume");
      m.ion_count = value;
      m.concentration = value / *m.volume;
      break;
    case SweepAxis::temperature:
      m.temperature = value;
      break;
    case SweepAxis::hydration:
      m.hydration = static_cast<int>(value);
      break;
  }
  return m;
}

namespace detail {

inline void fill_row(SweepRow& row, const DerivedParams& dp, const RunSummary& s,
                     SweepObservable obs) {
  if (s.growth_rate) row.growth_rate = *s.growth_rate;
  if (s.tau_saturation) row.tau_saturation = *s.tau_saturation;
  if (s.peak_amplitude) row.peak_amplitude = *s.peak_amplitude;
  switch (obs) {
    case SweepObservable::sat_amplitude_physical:
    case SweepObservable::sat_intensity_physical: {
      if (!s.peak_amplitude) throw NotSaturatedError("run did not saturate");
      const double a = dp.amplitude_scale * *s.peak_amplitude;
      row.observable = obs == SweepObservable::sat_amplitude_physical ? a : a * a;
      break;
    }
    case SweepObservable::gain_time_physical:
      if (!s.tau_unity) throw NotSaturatedError("scaled amplitude never reached 1");
      row.observable = dp.time_scale * *s.tau_unity;
      break;
  }
}

/// Runs `work(i)` for i in [0, n) on up to `threads` workers. Each index is
/// written by exactly one worker, so results do not depend on scheduling.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) work(i);
    });
  }
}

}  // namespace detail

/// Executes a sweep. Row failures (invalid scenario, divergence, no
/// saturation) are recorded on the row and never abort the sweep.
inline SweepResult run_sweep(const SweepSpec& spec,
                             const PhysicalConstants& pc = kCodata2018) {
  validate(spec);
  SweepResult out;
  out.rows.resize(spec.values.size());

  std::optional<RunSummary> shared;
  std::optional<std::string> shared_error;
  if (spec.mode == SweepMode::shared) {
    try {
      shared = run_scaled(spec.sim).summary;
    } catch (const Error& e) {
      shared_error = e.what();
    }
  }

  detail::parallel_for(spec.values.size(), spec.threads, [&](std::size_t i) {
    SweepRow& row = out.rows[i];
    row.axis_value = spec.values[i];
    try {
      const auto dp = derive(apply_axis(spec.base, spec.axis, spec.values[i]), pc).params;
      if (spec.mode == SweepMode::shared) {
        if (shared_error) throw Error(*shared_error);
        detail::fill_row(row, dp, *shared, spec.observable);
      } else {
        detail::fill_row(row, dp, run_scaled(spec.sim).summary, spec.observable);
      }
    } catch (const Error& e) {
      row.error = e.what();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  });

  std::vector<double> x, y;
  for (const auto& r : out.rows) {
    if (r.ok()) {
      x.push_back(r.axis_value);
      y.push_back(r.observable);
    }
  }
  try {
    out.fit = fit_power_law(x, y);
  } catch (const Error& e) {
    out.fit_error = e.what();
  }
  return out;
}

/// c_A and c_t recomputed at two distinct (rho, P_z) pairs.
struct DesignConstantsReport {
  double field_coefficient = 0;       ///< c_A at the first pair
  double time_coefficient = 0;        ///< c_t at the first pair
  double field_pair_spread = 0;       ///< |c_A(pair1) - c_A(pair2)| / c_A(pair1)
  double time_pair_spread = 0;
  double field_deviation = 0;         ///< relative to the reference 2.6e-22
  double time_deviation = 0;          ///< relative to the reference 2.4e-4
};

inline DesignConstantsReport verify_design_constants(int hydration, double temperature,
                                                     const PhysicalConstants& pc = kCodata2018) {
  const auto a = design_formulas(6.022e23, 9.1e-3, hydration, temperature, {}, pc);
  const auto b = design_formulas(3.0e21, 0.37, hydration, temperature, {}, pc);
  DesignConstantsReport r;
  r.field_coefficient = a.field_coefficient;
  r.time_coefficient = a.time_coefficient;
  r.field_pair_spread = std::abs(a.field_coefficient - b.field_coefficient) / a.field_coefficient;
  r.time_pair_spread = std::abs(a.time_coefficient - b.time_coefficient) / a.time_coefficient;
  r.field_deviation = a.field_coefficient / reference::kFieldCoefficient - 1.0;
  r.time_deviation = a.time_coefficient / reference::kTimeCoefficient - 1.0;
  return r;
}

}  // namespace hydrofel
