#pragma once

/// @file dynamics.hpp
/// Particle-field state, the scaled (universal FEL) and unscaled (physical)
/// right-hand sides, scale transforms, initial conditions and the two-level
/// pulse-solution residual.
///
/// The field is carried as a complex number F = A0 e^{i phi}. Its equation
/// dF/dtau = <e^{-i theta}> is algebraically identical to the separate
/// amplitude and phase equations wherever A0 > 0 and stays regular at A0 = 0.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hydrofel/errors.hpp"
#include "hydrofel/params.hpp"
#include "hydrofel/summation.hpp"

namespace hydrofel {

using complex = std::complex<double>;

struct ScaledTag {};
struct PhysicalTag {};

template <class Tag>
struct Derivative {
  std::vector<double> dtheta;
  std::vector<double> dmomentum;
  complex dfield{};
};

/// N_p phases, their conjugate momenta and the complex field.
///
/// For `SimState` time is tau and momentum is the scaled p = dtheta/dtau.
/// For `PhysState` time is t [s], momentum is the angular momentum L [J s]
/// and the field is in physical units with phase phi = phi0 + omega_c t.
template <class Tag>
struct ParticleFieldState {
  using derivative_type = Derivative<Tag>;

  double time = 0.0;
  std::vector<double> theta;
  std::vector<double> momentum;
  complex field{};

  std::size_t size() const noexcept { return theta.size(); }
  double amplitude() const { return std::abs(field); }
  double phase() const { return std::arg(field); }
};

using SimState = ParticleFieldState<ScaledTag>;
using PhysState = ParticleFieldState<PhysicalTag>;
using SimDerivative = Derivative<ScaledTag>;
using PhysDerivative = Derivative<PhysicalTag>;

template <class Tag>
Derivative<Tag> make_derivative(const ParticleFieldState<Tag>& s) {
  return {std::vector<double>(s.size()), std::vector<double>(s.size()), {}};
}

template <class Tag>
void axpy(ParticleFieldState<Tag>& s, double h, const Derivative<Tag>& d) {
  const std::size_t n = s.size();
  double* th = s.theta.data();
  double* mo = s.momentum.data();
  const double* dth = d.dtheta.data();
  const double* dmo = d.dmomentum.data();
  for (std::size_t j = 0; j < n; ++j) {
    th[j] += h * dth[j];
    mo[j] += h * dmo[j];
  }
  s.field += h * d.dfield;
}

template <class Tag>
void set_time(ParticleFieldState<Tag>& s, double t) {
  s.time = t;
}

template <class Tag>
double state_time(const ParticleFieldState<Tag>& s) {
  return s.time;
}

template <class Tag>
bool all_finite(const ParticleFieldState<Tag>& s) {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(s.theta.begin(), s.theta.end(), finite) &&
         std::all_of(s.momentum.begin(), s.momentum.end(), finite) &&
         std::isfinite(s.field.real()) && std::isfinite(s.field.imag());
}

template <class Tag>
void validate(const ParticleFieldState<Tag>& s) {
  if (s.theta.size() < 2) throw DomainError("state needs at least two particles");
  if (s.theta.size() != s.momentum.size()) {
    throw DomainError("phase and momentum sequences differ in length");
  }
  if (!all_finite(s)) throw DomainError("state contains non-finite entries");
}

/// Cached cos/sin of the phases plus the ensemble average <e^{-i theta}>.
class PhasorCache {
 public:
  /// Returns <e^{-i theta}> and leaves cos/sin of every phase in the cache.
  complex update(std::span<const double> theta) {
    const std::size_t n = theta.size();
    cos_.resize(n);
    sin_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
      cos_[j] = std::cos(theta[j]);
      sin_[j] = std::sin(theta[j]);
    }
    const double inv = 1.0 / static_cast<double>(n);
    return {pairwise_sum(cos_) * inv, -pairwise_sum(sin_) * inv};
  }
  std::span<const double> cos() const { return cos_; }
  std::span<const double> sin() const { return sin_; }

 private:
  std::vector<double> cos_, sin_;
};

/// theta'' = -2 A0 cos(theta + phi), (A0 e^{i phi})' = <e^{-i theta}>.
class ScaledSystem {
 public:
  void operator()(const SimState& s, SimDerivative& out) {
    const std::size_t n = s.size();
    out.dtheta.resize(n);
    out.dmomentum.resize(n);
    out.dfield = cache_.update(s.theta);
    const auto c = cache_.cos();
    const auto sn = cache_.sin();
    const double fr = s.field.real();
    const double fi = s.field.imag();
    for (std::size_t j = 0; j < n; ++j) {
      out.dtheta[j] = s.momentum[j];
      // -2 Re(F e^{i theta}) = -2 A0 cos(theta + phi)
      out.dmomentum[j] = -2.0 * (fr * c[j] - fi * sn[j]);
    }
  }

 private:
  PhasorCache cache_;
};

inline SimDerivative deriv_scaled(const SimState& s) {
  SimDerivative d = make_derivative(s);
  ScaledSystem{}(s, d);
  return d;
}

/// Physical canonical equations:
///   dtheta/dt = 2 L / (n I_w) - omega_c,
///   dL/dt     = -(omega_c Delta n d0_tilde_ave / 2) A0 cos(theta + phi),
///   dF/dt     = beta <e^{-i theta}>.
class UnscaledSystem {
 public:
  explicit UnscaledSystem(const DerivedParams& dp)
      : inv_half_inertia_(2.0 / (dp.hydration * dp.moment_of_inertia)),
        omega_c_(dp.angular_frequency),
        torque_(0.5 * dp.angular_frequency * dp.population_difference * dp.d0_tilde_ave),
        beta_(dp.beta) {}

  void operator()(const PhysState& s, PhysDerivative& out) {
    const std::size_t n = s.size();
    out.dtheta.resize(n);
    out.dmomentum.resize(n);
    out.dfield = beta_ * cache_.update(s.theta);
    const auto c = cache_.cos();
    const auto sn = cache_.sin();
    const double fr = s.field.real();
    const double fi = s.field.imag();
    for (std::size_t j = 0; j < n; ++j) {
      out.dtheta[j] = inv_half_inertia_ * s.momentum[j] - omega_c_;
      out.dmomentum[j] = -torque_ * (fr * c[j] - fi * sn[j]);
    }
  }

 private:
  double inv_half_inertia_;
  double omega_c_;
  double torque_;
  double beta_;
  PhasorCache cache_;
};

inline PhysDerivative deriv_unscaled(const PhysState& s, const DerivedParams& dp) {
  PhysDerivative d = make_derivative(s);
  UnscaledSystem{dp}(s, d);
  return d;
}

/// Physical -> scaled: tau = t / t_scale, F_scaled = F / a_scale,
/// p = t_scale (2 L / (n I_w) - omega_c). Phases are shared.
inline SimState scale_transform(const PhysState& s, const DerivedParams& dp) {
  SimState out;
  out.time = s.time / dp.time_scale;
  out.theta = s.theta;
  out.momentum.resize(s.size());
  const double k = 2.0 / (dp.hydration * dp.moment_of_inertia);
  for (std::size_t j = 0; j < s.size(); ++j) {
    out.momentum[j] = dp.time_scale * (k * s.momentum[j] - dp.angular_frequency);
  }
  out.field = s.field / dp.amplitude_scale;
  return out;
}

inline PhysState unscale_transform(const SimState& s, const DerivedParams& dp) {
  PhysState out;
  out.time = s.time * dp.time_scale;
  out.theta = s.theta;
  out.momentum.resize(s.size());
  const double half_inertia = 0.5 * dp.hydration * dp.moment_of_inertia;
  for (std::size_t j = 0; j < s.size(); ++j) {
    out.momentum[j] = half_inertia * (s.momentum[j] / dp.time_scale + dp.angular_frequency);
  }
  out.field = s.field * dp.amplitude_scale;
  return out;
}

enum class PhaseInit { uniform_grid, uniform_random };

inline std::string_view to_string(PhaseInit m) {
  return m == PhaseInit::uniform_grid ? "uniform-grid" : "uniform-random";
}

inline PhaseInit parse_phase_init(std::string_view s) {
  if (s == "uniform-grid") return PhaseInit::uniform_grid;
  if (s == "uniform-random") return PhaseInit::uniform_random;
  throw DomainError("unknown phase initialisation '" + std::string(s) + "'");
}

struct SimConfig {
  std::size_t particles = 8192;
  std::uint64_t seed = 1;
  double initial_amplitude = 1e-6;
  double initial_phase = 0.0;
  double bunching_seed = 0.0;     ///< theta_j += bunching_seed * sin(theta_j)
  double momentum_spread = 0.0;   ///< std-dev of scaled momenta; 0 is a cold beam
  double step = 1e-3;
  double horizon = 20.0;
  std::size_t record_stride = 10;
  PhaseInit phase_init = PhaseInit::uniform_random;
};

inline void validate(const SimConfig& cfg) {
  if (cfg.particles < 2) throw DomainError("need at least two particles");
  if (!(cfg.step > 0.0)) throw DomainError("step must be positive");
  if (!(cfg.horizon > 0.0)) throw DomainError("horizon must be positive");
  if (!(cfg.initial_amplitude >= 0.0)) throw DomainError("initial amplitude must be >= 0");
  if (!(cfg.momentum_spread >= 0.0)) throw DomainError("momentum spread must be >= 0");
  if (!std::isfinite(cfg.initial_phase) || !std::isfinite(cfg.bunching_seed)) {
    throw DomainError("initial phase and bunching seed must be finite");
  }
  if (cfg.record_stride == 0) throw DomainError("record stride must be positive");
}

/// Deterministic initial condition: identical configs give bit-identical
/// states within one build.
inline SimState init_state(const SimConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.particles;
  SimState s;
  s.theta.resize(n);
  s.momentum.assign(n, 0.0);
  constexpr double two_pi = 2.0 * std::numbers::pi;

  std::mt19937_64 rng(cfg.seed);
  if (cfg.phase_init == PhaseInit::uniform_grid) {
    for (std::size_t j = 0; j < n; ++j) {
      s.theta[j] = two_pi * static_cast<double>(j) / static_cast<double>(n);
    }
  } else {
    std::uniform_real_distribution<double> u(0.0, two_pi);
    for (double& th : s.theta) th = u(rng);
  }
  if (cfg.bunching_seed != 0.0) {
    for (double& th : s.theta) th += cfg.bunching_seed * std::sin(th);
  }
  if (cfg.momentum_spread > 0.0) {
    std::normal_distribution<double> g(0.0, cfg.momentum_spread);
    for (double& p : s.momentum) p = g(rng);
  }
  s.field = std::polar(cfg.initial_amplitude, cfg.initial_phase);
  return s;
}

/// Residual of the two-level phase equation  i hbar dtheta/dt =
/// A0 omega_c d0_tilde_ave cos(theta + phi)  on the pulse family
/// theta = theta0, -phi0 = omega_c t + theta0 + pi/2 + k pi, with the shifted
/// phase phi = phi0 + omega_c t. Since dtheta/dt = 0 on the family, the
/// residual is the right-hand side itself and vanishes identically.
///
/// The shift relates to the two-level state phases through
/// vartheta2 - vartheta1 = theta + omega_c t. `phase_offset` displaces phi0
/// off the family to probe the residual's sensitivity.
inline double pulse_solution_residual(double theta0, long k, double t, double amplitude,
                                      const DerivedParams& dp, double phase_offset = 0.0) {
  constexpr double pi = std::numbers::pi;
  const double drift = dp.angular_frequency * t;
  const double phi0 = -(drift + theta0 + pi / 2 + static_cast<double>(k) * pi) + phase_offset;
  const double phi = phi0 + drift;
  return amplitude * dp.angular_frequency * dp.d0_tilde_ave * std::cos(theta0 + phi);
}

}  // namespace hydrofel
