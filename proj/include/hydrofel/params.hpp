#pragma once

/// @file params.hpp
/// Derivation of the resonance, two-level, coupling and scale parameters of
/// the ion-solvated water laser model from a scenario description. All
/// functions are pure.

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hydrofel/constants.hpp"
#include "hydrofel/errors.hpp"

namespace hydrofel {

namespace detail {

inline std::string describe(const char* what, double value) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (got " << value << ")";
  return os.str();
}

inline void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(describe(what, value));
  }
}

}  // namespace detail

/// Scenario description. Units are SI throughout.
///
/// The ion concentration may be given directly, as N_ions / V, or both (in
/// which case they must agree). Exactly one of `static_field` and
/// `polarization` selects the permanent polarization fraction P_z.
struct MediumParams {
  int hydration = water::kHydrationDefault;         ///< n, waters per ion
  double temperature = water::kTemperatureDefault;  ///< T [K]
  std::optional<double> concentration;              ///< rho [m^-3]
  std::optional<double> static_field;               ///< E0z [V/m]
  std::optional<double> polarization;               ///< P_z override in (0, 1]
  std::optional<double> ion_count;                  ///< N
  std::optional<double> volume;                     ///< V [m^3]
  double wavenumber = water::kWavenumber;           ///< 1 / l_c [m^-1]
  double dipole_half_length = water::kDipoleHalfLength;  ///< d_e [m]
  double gyration_length = water::kGyrationLength;       ///< d_g [m]
};

struct ResonanceParams {
  double coherence_length;  ///< l_c [m]
  double angular_frequency; ///< omega_c [rad/s]
  double gap;               ///< eps [J]
};

struct DipoleConstants {
  double d0;        ///< permanent dipole 2 e d_e [C m]
  double d0_tilde;  ///< two-level transition dipole d0 sqrt(2/3) [C m]
};

struct CouplingCoefficients {
  double alpha;  ///< [s^-2 per unit field]
  double beta;   ///< [field per s]
};

struct ScaleFactors {
  double amplitude;  ///< physical field per unit scaled field, (2 beta^2/alpha)^(1/3)
  double time;       ///< physical seconds per unit scaled time, (2/(alpha beta))^(1/3)
};

/// Every quantity derived from a MediumParams.
struct DerivedParams {
  double hydration = 0;           ///< n
  double temperature = 0;         ///< T [K]
  double concentration = 0;       ///< rho [m^-3]
  double coherence_length = 0;    ///< l_c [m]
  double angular_frequency = 0;   ///< omega_c [rad/s]
  double gap = 0;                 ///< eps [J]
  double d0 = 0;                  ///< [C m]
  double d0_tilde = 0;            ///< [C m]
  double moment_of_inertia = 0;   ///< I_w [kg m^2]
  double population_difference = 0;  ///< Delta n, per ion
  double polarization = 0;        ///< P_z
  double d0_tilde_ave = 0;        ///< P_z d0_tilde [C m]
  double alpha = 0;
  double beta = 0;
  double amplitude_scale = 0;     ///< a_scale
  double time_scale = 0;          ///< t_scale [s]
};

struct Derivation {
  DerivedParams params;
  std::vector<std::string> warnings;
};

/// l_c = 1/k, omega_c = c k, eps = hbar c k. No factor 2 pi: the wavenumber is
/// the inverse coherence length.
inline ResonanceParams resonance_params(double wavenumber,
                                        const PhysicalConstants& pc = kCodata2018) {
  detail::require_positive(wavenumber, "wavenumber must be positive");
  return {1.0 / wavenumber, pc.c * wavenumber, pc.hbar * pc.c * wavenumber};
}

inline DipoleConstants dipole_constants(double dipole_half_length,
                                        const PhysicalConstants& pc = kCodata2018) {
  detail::require_positive(dipole_half_length, "dipole half-length must be positive");
  const double d0 = 2.0 * pc.e_charge * dipole_half_length;
  return {d0, d0 * std::sqrt(2.0 / 3.0)};
}

/// I = 2 m_p d_g^2.
inline double moment_of_inertia(double gyration_length,
                                const PhysicalConstants& pc = kCodata2018) {
  detail::require_positive(gyration_length, "gyration length must be positive");
  return 2.0 * pc.m_p * gyration_length * gyration_length;
}

/// Thermal excess of ground-state over excited waters per ion,
/// Delta n = n tanh(eps / k_B T).
inline double population_difference(double hydration, double gap, double temperature,
                                    const PhysicalConstants& pc = kCodata2018) {
  if (!(hydration >= 1.0)) {
    throw DomainError(detail::describe("hydration number must be >= 1", hydration));
  }
  detail::require_positive(temperature, "temperature must be positive");
  detail::require_positive(gap, "level gap must be positive");
  return hydration * std::tanh(gap / (pc.k_B * temperature));
}

/// P_z = c_P E0z. Appends a warning when E0z leaves the range where the
/// linear law holds.
inline double polarization_from_field(double static_field,
                                      std::vector<std::string>* warnings = nullptr) {
  if (!(static_field >= 0.0) || !std::isfinite(static_field)) {
    throw DomainError(detail::describe("static field must be non-negative", static_field));
  }
  const double pz = water::kPolarizationCoefficient * static_field;
  if (pz > 1.0) {
    throw RangeError(detail::describe("polarization fraction exceeds 1", pz));
  }
  if (warnings && static_field > water::kPolarizationFieldLimit) {
    warnings->push_back(
        detail::describe("static field above 1e7 V/m, linear polarization law may not hold",
                         static_field));
  }
  return pz;
}

/// Resolves rho from (concentration, ion_count, volume).
inline double ion_concentration(const MediumParams& m) {
  const bool have_nv = m.ion_count.has_value() && m.volume.has_value();
  if (m.ion_count) {
    if (!(*m.ion_count >= 1.0)) {
      throw DomainError(detail::describe("ion count must be >= 1", *m.ion_count));
    }
  }
  if (m.volume) detail::require_positive(*m.volume, "volume must be positive");
  if (m.concentration) {
    detail::require_positive(*m.concentration, "ion concentration must be positive");
    if (have_nv) {
      const double from_nv = *m.ion_count / *m.volume;
      if (std::abs(from_nv - *m.concentration) > 1e-6 * *m.concentration) {
        throw DomainError(detail::describe(
            "ion concentration disagrees with ion_count / volume", from_nv));
      }
    }
    return *m.concentration;
  }
  if (!have_nv) {
    throw DomainError("ion concentration requires either rho or both N_ions and V");
  }
  return *m.ion_count / *m.volume;
}

/// Resolves P_z from exactly one of (static_field, polarization).
inline double resolve_polarization(const MediumParams& m,
                                   std::vector<std::string>* warnings = nullptr) {
  if (m.static_field.has_value() == m.polarization.has_value()) {
    throw DomainError("exactly one of static field and polarization must be given");
  }
  double pz = 0.0;
  if (m.static_field) {
    pz = polarization_from_field(*m.static_field, warnings);
  } else {
    pz = *m.polarization;
    if (!(pz >= 0.0) || pz > 1.0) {
      throw RangeError(detail::describe("polarization fraction must lie in [0, 1]", pz));
    }
  }
  if (pz == 0.0) {
    throw DegenerateCouplingError("zero polarization: the field has no drive");
  }
  return pz;
}

/// alpha = Delta n omega_c d0_tilde_ave / (n I_w),
/// beta  = mu c^2 rho Delta n d0_tilde_ave / 2.
///
/// Reads population_difference, angular_frequency, d0_tilde_ave and
/// moment_of_inertia from `partial`; hydration and rho come from `medium`.
inline CouplingCoefficients coupling_coefficients(const DerivedParams& partial,
                                                  const MediumParams& medium,
                                                  const PhysicalConstants& pc = kCodata2018) {
  if (partial.d0_tilde_ave == 0.0) {
    throw DegenerateCouplingError("zero polarization: the field has no drive");
  }
  detail::require_positive(partial.d0_tilde_ave, "mean dipole must be positive");
  detail::require_positive(partial.population_difference, "population difference must be positive");
  detail::require_positive(partial.angular_frequency, "resonance frequency must be positive");
  detail::require_positive(partial.moment_of_inertia, "moment of inertia must be positive");
  if (medium.hydration < 1) {
    throw DomainError(detail::describe("hydration number must be >= 1", medium.hydration));
  }
  const double rho = ion_concentration(medium);
  const double dn_d = partial.population_difference * partial.d0_tilde_ave;
  const double alpha = dn_d * partial.angular_frequency /
                       (static_cast<double>(medium.hydration) * partial.moment_of_inertia);
  const double beta = pc.mu0 * pc.c * pc.c * rho * dn_d / 2.0;
  return {alpha, beta};
}

inline ScaleFactors scale_factors(double alpha, double beta) {
  detail::require_positive(alpha, "alpha must be positive");
  detail::require_positive(beta, "beta must be positive");
  return {std::cbrt(2.0 * beta * beta / alpha), std::cbrt(2.0 / (alpha * beta))};
}

/// Full derivation chain. Warnings report soft range violations (hydration
/// number outside the observed 20..40, field outside the linear regime).
inline Derivation derive(const MediumParams& m, const PhysicalConstants& pc = kCodata2018) {
  Derivation out;
  auto& d = out.params;
  if (m.hydration < 1) {
    throw DomainError(detail::describe("hydration number must be >= 1", m.hydration));
  }
  if (m.hydration < water::kHydrationMin || m.hydration > water::kHydrationMax) {
    out.warnings.push_back(
        detail::describe("hydration number outside the observed range 20..40", m.hydration));
  }
  detail::require_positive(m.temperature, "temperature must be positive");

  d.hydration = m.hydration;
  d.temperature = m.temperature;
  d.concentration = ion_concentration(m);

  const auto res = resonance_params(m.wavenumber, pc);
  d.coherence_length = res.coherence_length;
  d.angular_frequency = res.angular_frequency;
  d.gap = res.gap;

  const auto dip = dipole_constants(m.dipole_half_length, pc);
  d.d0 = dip.d0;
  d.d0_tilde = dip.d0_tilde;
  d.moment_of_inertia = moment_of_inertia(m.gyration_length, pc);
  d.population_difference = population_difference(m.hydration, d.gap, m.temperature, pc);

  d.polarization = resolve_polarization(m, &out.warnings);
  d.d0_tilde_ave = d.polarization * d.d0_tilde;

  const auto cc = coupling_coefficients(d, m, pc);
  d.alpha = cc.alpha;
  d.beta = cc.beta;
  const auto sf = scale_factors(cc.alpha, cc.beta);
  d.amplitude_scale = sf.amplitude;
  d.time_scale = sf.time;
  return out;
}

/// Closed-form saturation amplitude and gain time, plus the factored
/// coefficients c_A = A_sat / (rho^(2/3) P_z^(1/3)) and
/// c_t = t_gain rho^(1/3) P_z^(2/3), which depend only on (n, T) and the
/// water model.
struct DesignPrediction {
  double saturated_amplitude;  ///< physical field when the scaled field is 1
  double gain_time;            ///< [s]
  double field_coefficient;    ///< c_A
  double time_coefficient;     ///< c_t
};

inline DesignPrediction design_formulas(double concentration, double polarization,
                                        int hydration, double temperature,
                                        const MediumParams& water_model = {},
                                        const PhysicalConstants& pc = kCodata2018) {
  detail::require_positive(concentration, "ion concentration must be positive");
  if (polarization == 0.0) {
    throw DegenerateCouplingError("zero polarization: the field has no drive");
  }
  if (!(polarization > 0.0) || polarization > 1.0) {
    throw RangeError(detail::describe("polarization fraction must lie in (0, 1]", polarization));
  }
  MediumParams m = water_model;
  m.hydration = hydration;
  m.temperature = temperature;
  m.concentration = concentration;
  m.ion_count.reset();
  m.volume.reset();
  m.static_field.reset();
  m.polarization = polarization;
  const auto d = derive(m, pc).params;
  return {d.amplitude_scale, d.time_scale,
          d.amplitude_scale / (std::cbrt(concentration * concentration) * std::cbrt(polarization)),
          d.time_scale * std::cbrt(concentration) * std::cbrt(polarization * polarization)};
}

/// v(r) = 4 eps [(sigma/r)^12 - (sigma/r)^6].
inline double lennard_jones(double r, double well_depth, double sigma) {
  detail::require_positive(r, "separation must be positive");
  detail::require_positive(well_depth, "well depth must be positive");
  detail::require_positive(sigma, "sigma must be positive");
  const double s6 = std::pow(sigma / r, 6);
  return 4.0 * well_depth * (s6 * s6 - s6);
}

struct SlippageCheck {
  double slippage_length;  ///< l_s = (c - v) l_g / v [m]
  double ratio;            ///< l_b / l_s
  bool condition_met;      ///< ratio < threshold
};

/// Tests l_b << l_s, i.e. whether radiation escapes a bunch by slippage.
inline SlippageCheck slippage_check(double bunch_length, double gain_length, double velocity,
                                    double threshold = 0.01,
                                    const PhysicalConstants& pc = kCodata2018) {
  detail::require_positive(bunch_length, "bunch length must be positive");
  detail::require_positive(gain_length, "gain length must be positive");
  detail::require_positive(velocity, "velocity must be positive");
  if (velocity >= pc.c) {
    throw DomainError(detail::describe("velocity must be below c", velocity));
  }
  const double ls = (pc.c - velocity) * gain_length / velocity;
  const double ratio = bunch_length / ls;
  return {ls, ratio, ratio < threshold};
}

}  // namespace hydrofel
