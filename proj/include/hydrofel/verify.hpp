#pragma once

/// @file verify.hpp
/// The acceptance battery: constant recovery, instability, saturation,
/// conservation, scaled/physical equivalence, scaling exponents, pulse
/// solutions, the static equilibrium, and a falsifiability self-check.

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hydrofel/diagnostics.hpp"
#include "hydrofel/dynamics.hpp"
#include "hydrofel/params.hpp"
#include "hydrofel/simulation.hpp"
#include "hydrofel/sweep.hpp"

namespace hydrofel {

enum class CriterionStatus { pass, fail, skipped };

inline std::string_view to_string(CriterionStatus s) {
  switch (s) {
    case CriterionStatus::pass: return "PASS";
    case CriterionStatus::fail: return "FAIL";
    case CriterionStatus::skipped: return "SKIP";
  }
  return "?";
}

struct CriterionResult {
  int id = 0;
  std::string name;
  CriterionStatus status = CriterionStatus::skipped;
  double measured = std::numeric_limits<double>::quiet_NaN();
  double expected = std::numeric_limits<double>::quiet_NaN();
  std::string tolerance;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CriterionResult> results;

  bool all_passed() const {
    for (const auto& r : results) {
      if (r.status == CriterionStatus::fail) return false;
    }
    return true;
  }
  std::set<int> failed_ids() const {
    std::set<int> ids;
    for (const auto& r : results) {
      if (r.status == CriterionStatus::fail) ids.insert(r.id);
    }
    return ids;
  }
};

struct VerifyOptions {
  /// Skip the long collective-instability runs (criteria 6, 7, 8, 10).
  bool quick = false;
  /// Constants used by every derivation in the battery. Only the
  /// falsifiability hook changes these.
  PhysicalConstants constants = kCodata2018;
  bool self_check = true;
  std::function<void(const CriterionResult&)> on_result;
};

/// Copy of `base` with one named constant multiplied by `factor`.
/// Names: c, hbar, k_B, m_p, e_charge, mu0.
inline PhysicalConstants perturbed_constants(PhysicalConstants base, std::string_view name,
                                             double factor) {
  if (name == "c") base.c *= factor;
  else if (name == "hbar") base.hbar *= factor;
  else if (name == "k_B") base.k_B *= factor;
  else if (name == "m_p") base.m_p *= factor;
  else if (name == "e_charge") base.e_charge *= factor;
  else if (name == "mu0") base.mu0 *= factor;
  else throw DomainError("unknown constant '" + std::string(name) + "'");
  return base;
}

inline std::string format_result_line(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(6);
  os << '[' << to_string(r.status) << "] " << r.id << ". " << r.name;
  if (std::isfinite(r.measured)) os << ": measured " << r.measured;
  if (std::isfinite(r.expected)) os << ", expected " << r.expected;
  if (!r.tolerance.empty()) os << " (" << r.tolerance << ")";
  if (!r.detail.empty()) os << " | " << r.detail;
  os.precision(3);
  os << " [" << r.seconds << " s]";
  return os.str();
}

namespace verification {

using clock = std::chrono::steady_clock;

inline double seconds_since(clock::time_point t0) {
  return std::chrono::duration<double>(clock::now() - t0).count();
}

inline bool within_rel(double measured, double expected, double tol) {
  return std::abs(measured / expected - 1.0) <= tol;
}

inline std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// The scenario used for the instability, saturation and conservation
/// criteria: cold beam, random phases, A0 = 1e-6, phi = 0.
inline SimConfig instability_config() {
  SimConfig cfg;
  cfg.particles = 8192;
  cfg.seed = 1;
  cfg.initial_amplitude = 1e-6;
  cfg.initial_phase = 0.0;
  cfg.step = 1e-3;
  cfg.horizon = 20.0;
  cfg.record_stride = 10;
  cfg.phase_init = PhaseInit::uniform_random;
  return cfg;
}

inline SimConfig sweep_config() {
  SimConfig cfg;
  cfg.particles = 1024;
  cfg.seed = 1;
  cfg.initial_amplitude = 1e-6;
  cfg.step = 1e-3;
  cfg.horizon = 12.0;
  cfg.record_stride = 10;
  return cfg;
}

inline MediumParams default_medium() {
  MediumParams m;
  m.concentration = 6.022e23;
  m.static_field = 1e6;
  m.ion_count = 6.022e11;
  m.volume = 1e-12;
  return m;
}

inline CriterionResult criterion(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

/// Five log-spaced values spanning one decade centred on `centre`.
inline std::vector<double> decade_around(double centre) {
  std::vector<double> v;
  for (int i = 0; i < 5; ++i) v.push_back(centre * std::pow(10.0, -0.5 + 0.25 * i));
  return v;
}

}  // namespace verification

inline VerifyReport run_verification(const VerifyOptions& opt = {}) {
  using namespace verification;
  VerifyReport report;
  const PhysicalConstants& pc = opt.constants;
  auto emit = [&](CriterionResult r) {
    if (opt.on_result) opt.on_result(r);
    report.results.push_back(std::move(r));
  };
  auto skipped = [&](int id, std::string name) {
    auto r = criterion(id, std::move(name));
    r.status = CriterionStatus::skipped;
    r.detail = "skipped (--quick)";
    emit(std::move(r));
  };
  auto verdict = [](bool ok) { return ok ? CriterionStatus::pass : CriterionStatus::fail; };

  // 1. Population difference.
  {
    auto r = criterion(1, "population difference Delta n (n=30, T=300 K)");
    const auto t0 = clock::now();
    const double gap = resonance_params(water::kWavenumber, pc).gap;
    const double dn = population_difference(30, gap, 300.0, pc);
    r.seconds = seconds_since(t0);
    r.measured = dn;
    r.expected = reference::kPopulationDifference;
    r.tolerance = "+-3%, runtime < 1 ms";
    r.status = verdict(within_rel(dn, r.expected, 0.03) && r.seconds < 1e-3);
    emit(r);
  }
  // 2. Gap over thermal energy.
  {
    auto r = criterion(2, "gap over thermal energy eps/(k_B 300 K)");
    const auto t0 = clock::now();
    const double ratio = resonance_params(water::kWavenumber, pc).gap / (pc.k_B * 300.0);
    r.seconds = seconds_since(t0);
    r.measured = ratio;
    r.expected = reference::kGapOverThermal;
    r.tolerance = "+-3%";
    r.status = verdict(within_rel(ratio, r.expected, 0.03));
    emit(r);
  }
  // 3. Coherence length.
  {
    auto r = criterion(3, "coherence length l_c [m]");
    const auto t0 = clock::now();
    const double lc = resonance_params(water::kWavenumber, pc).coherence_length;
    r.seconds = seconds_since(t0);
    r.measured = lc;
    r.expected = reference::kCoherenceLength;
    r.tolerance = "+-2%";
    r.status = verdict(within_rel(lc, r.expected, 0.02));
    emit(r);
  }
  // 4, 5. Design constants.
  {
    const auto t0 = clock::now();
    const auto rep = verify_design_constants(30, 300.0, pc);
    const double dt = seconds_since(t0);
    auto a = criterion(4, "design constant c_A");
    a.seconds = dt;
    a.measured = rep.field_coefficient;
    a.expected = reference::kFieldCoefficient;
    a.tolerance = "+-5%, pair spread < 1e-10, runtime < 1 ms";
    a.detail = "pair spread " + fmt(rep.field_pair_spread);
    a.status = verdict(std::abs(rep.field_deviation) <= 0.05 && rep.field_pair_spread < 1e-10 &&
                       dt < 1e-3);
    emit(a);
    auto b = criterion(5, "design constant c_t");
    b.seconds = dt;
    b.measured = rep.time_coefficient;
    b.expected = reference::kTimeCoefficient;
    b.tolerance = "+-5%, pair spread < 1e-10";
    b.detail = "pair spread " + fmt(rep.time_pair_spread);
    b.status = verdict(std::abs(rep.time_deviation) <= 0.05 && rep.time_pair_spread < 1e-10);
    emit(b);
  }

  // 6, 7, 8 share one cold-beam run over tau in [0, 20].
  if (opt.quick) {
    skipped(6, "linear growth rate (N_p=8192, random phases)");
    skipped(7, "saturation peak");
    skipped(8, "conservation of <p> + A0^2 over tau in [0, 20]");
  } else {
    const auto t0 = clock::now();
    RunResult run;
    std::string run_error;
    try {
      run = run_scaled(instability_config());
    } catch (const Error& e) {
      run_error = e.what();
    }
    const double dt = seconds_since(t0);

    {
      auto g = criterion(6, "linear growth rate (N_p=8192, random phases)");
      g.seconds = dt;
      g.expected = std::sqrt(3.0) / 2.0;
      g.tolerance = "+-2%, runtime < 60 s";
      if (run.summary.growth_rate) {
        g.measured = *run.summary.growth_rate;
        g.status = verdict(within_rel(g.measured, g.expected, 0.02) && dt < 60.0);
        const auto modal = fit_modal_growth_rate(run.trace);
        std::ostringstream os;
        os.precision(4);
        os << "modal exponents";
        for (const auto& l : modal.exponents) os << ' ' << l.real() << (l.imag() < 0 ? "" : "+") << l.imag() << 'i';
        g.detail = os.str();
      } else {
        g.status = CriterionStatus::fail;
        g.detail = run_error.empty() ? "no growth-rate estimate" : run_error;
      }
      emit(g);

      auto s = criterion(7, "saturation peak");
      s.seconds = dt;
      s.expected = 1.0;
      s.tolerance = "first peak in [1.0, 2.0]";
      if (run.summary.peak_amplitude) {
        s.measured = *run.summary.peak_amplitude;
        s.detail = "tau_sat " + fmt(*run.summary.tau_saturation);
        s.status = verdict(s.measured >= 1.0 && s.measured <= 2.0);
      } else {
        s.status = CriterionStatus::fail;
        s.detail = run_error.empty() ? "no saturation peak" : run_error;
      }
      emit(s);
    }

    auto c = criterion(8, "conservation of <p> + A0^2 over tau in [0, 20]");
    c.seconds = dt;
    if (run.trace.empty()) {
      c.status = CriterionStatus::fail;
      c.detail = run_error;
    } else {
      const double c0 = run.trace.front().conserved;
      const double bound = 1e-8 * std::max(1.0, std::abs(c0));
      c.measured = run.summary.conservation_drift_rate;
      c.expected = bound;
      c.tolerance = "drift per unit tau below 1e-8 max(1, C0)";
      c.detail = "max |dC| " + fmt(run.summary.conservation_drift);
      c.status = verdict(run_error.empty() && c.measured < bound);
    }
    emit(c);
  }

  // 9. Dual integration, physical vs scaled.
  {
    auto r = criterion(9, "scaled/physical equivalence over tau in [0, 5]");
    const auto t0 = clock::now();
    const auto dp = derive(default_medium(), pc).params;
    SimConfig cfg;
    cfg.particles = 256;
    cfg.seed = 7;
    cfg.initial_amplitude = 0.05;
    cfg.momentum_spread = 0.2;
    const SimState s0 = init_state(cfg);
    std::vector<std::vector<double>> scaled, physical;
    integrate(s0, ScaledSystem{}, {1e-3, 5.0, 50},
              [&](const SimState& s, std::size_t) { scaled.push_back(s.theta); });
    integrate(unscale_transform(s0, dp), UnscaledSystem{dp},
              {1e-3 * dp.time_scale, 5.0 * dp.time_scale, 50},
              [&](const PhysState& s, std::size_t) { physical.push_back(s.theta); });
    double worst = 0;
    for (std::size_t k = 0; k < std::min(scaled.size(), physical.size()); ++k) {
      for (std::size_t j = 0; j < s0.size(); ++j) {
        worst = std::max(worst, std::abs(scaled[k][j] - physical[k][j]));
      }
    }
    r.seconds = seconds_since(t0);
    r.measured = worst;
    r.expected = 1e-6;
    r.tolerance = "max |d theta| < 1e-6";
    r.status = verdict(scaled.size() == physical.size() && worst < 1e-6);
    emit(r);
  }

  // 10. Scaling exponents by per-row sweeps.
  if (opt.quick) {
    skipped(10, "scaling exponents by sweep");
  } else {
    auto r = criterion(10, "scaling exponents by sweep");
    const auto t0 = clock::now();
    struct Case {
      const char* label;
      SweepAxis axis;
      std::vector<double> values;
      SweepObservable obs;
      double expected;
      double tol;
    };
    const MediumParams base = default_medium();
    const std::vector<Case> cases = {
        {"A_sat vs rho", SweepAxis::concentration, decade_around(6.022e23),
         SweepObservable::sat_amplitude_physical, 2.0 / 3.0, 0.02},
        {"A_sat vs P_z", SweepAxis::static_field, decade_around(1e6),
         SweepObservable::sat_amplitude_physical, 1.0 / 3.0, 0.02},
        {"t_gain vs rho", SweepAxis::concentration, decade_around(6.022e23),
         SweepObservable::gain_time_physical, -1.0 / 3.0, 0.02},
        {"t_gain vs P_z", SweepAxis::static_field, decade_around(1e6),
         SweepObservable::gain_time_physical, -2.0 / 3.0, 0.02},
        {"I_sat vs N", SweepAxis::ion_count, decade_around(6.022e11),
         SweepObservable::sat_intensity_physical, 4.0 / 3.0, 0.05},
    };
    bool ok = true;
    double worst = 0;
    std::ostringstream os;
    os.precision(6);
    for (const auto& c : cases) {
      SweepSpec spec;
      spec.axis = c.axis;
      spec.values = c.values;
      spec.base = base;
      spec.sim = sweep_config();
      spec.observable = c.obs;
      spec.mode = SweepMode::per_row;
      const auto res = run_sweep(spec, pc);
      os << c.label << ' ';
      if (res.fit) {
        const double dev = std::abs(res.fit->exponent - c.expected);
        worst = std::max(worst, dev / c.tol);
        ok = ok && dev <= c.tol;
        os << res.fit->exponent << " (" << c.expected << "); ";
      } else {
        ok = false;
        os << "no fit; ";
      }
    }
    r.seconds = seconds_since(t0);
    r.measured = worst;
    r.expected = 1.0;
    r.tolerance = "each |exponent - expected| within tolerance (ratio <= 1), runtime < 120 s";
    r.detail = os.str();
    r.status = verdict(ok && r.seconds < 120.0);
    emit(r);
  }

  // 11. Pulse solutions of the two-level phase equation.
  {
    auto r = criterion(11, "pulse-solution residual");
    const auto t0 = clock::now();
    const auto dp = derive(default_medium(), pc).params;
    const double scale = dp.angular_frequency * dp.d0_tilde_ave;
    double worst = 0;
    for (double theta0 : {0.0, 0.3, 1.0, -2.5, 3.1}) {
      for (long k : {-3L, 0L, 1L, 5L}) {
        for (double t : {0.0, 1e-13, 1e-12, 1e-11}) {
          worst = std::max(worst,
                           std::abs(pulse_solution_residual(theta0, k, t, 1.0, dp)) / scale);
        }
      }
    }
    r.seconds = seconds_since(t0);
    r.measured = worst;
    r.expected = 1e-12;
    r.tolerance = "residual / (A0 omega_c d0_ave) < 1e-12";
    r.status = verdict(worst < 1e-12);
    emit(r);
  }

  // 12. Static equilibrium.
  {
    auto r = criterion(12, "static equilibrium (zero field, grid phases, cold beam)");
    const auto t0 = clock::now();
    SimConfig cfg;
    cfg.particles = 1024;
    cfg.phase_init = PhaseInit::uniform_grid;
    cfg.initial_amplitude = 0.0;
    cfg.horizon = 10.0;
    const SimState s0 = init_state(cfg);
    double worst = 0;
    integrate(s0, ScaledSystem{}, step_control(cfg), [&](const SimState& s, std::size_t) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        worst = std::max({worst, std::abs(s.theta[j] - s0.theta[j]), std::abs(s.momentum[j])});
      }
      worst = std::max(worst, std::abs(s.field));
    });
    r.seconds = seconds_since(t0);
    r.measured = worst;
    r.expected = 1e-12;
    r.tolerance = "max deviation < 1e-12";
    r.status = verdict(worst < 1e-12);
    emit(r);
  }

  // 13. mu0 x 1.1 moves c_A outside its band and leaves c_t inside.
  if (opt.self_check) {
    auto r = criterion(13, "falsifiability (mu0 x 1.1 fails criterion 4 only)");
    const auto t0 = clock::now();
    VerifyOptions inner;
    inner.quick = opt.quick;
    inner.self_check = false;
    inner.constants = perturbed_constants(pc, "mu0", 1.1);
    const auto failed = run_verification(inner).failed_ids();
    r.seconds = seconds_since(t0);
    std::ostringstream os;
    os << "failed:";
    for (int id : failed) os << ' ' << id;
    r.detail = os.str();
    r.status = verdict(failed == std::set<int>{4});
    emit(r);
  }
  return report;
}

}  // namespace hydrofel
