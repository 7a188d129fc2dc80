#pragma once

/// @file constants.hpp
/// Fixed SI constants (CODATA 2018) and the reference values of the
/// ion-solvated water laser model.

namespace hydrofel {

/// SI physical constants. Every derivation takes one of these by const
/// reference; production code always passes `kCodata2018`. A separate
/// instance exists only so the verification battery can inject a perturbed
/// set to prove its checks are falsifiable.
struct PhysicalConstants {
  double c;         ///< speed of light [m/s]
  double hbar;      ///< reduced Planck constant [J s]
  double k_B;       ///< Boltzmann constant [J/K]
  double m_p;       ///< proton mass [kg]
  double e_charge;  ///< elementary charge [C]
  double mu0;       ///< vacuum permeability [H/m], used for water (mu ~ mu0)
};

inline constexpr PhysicalConstants kCodata2018{
    299792458.0,        // exact
    1.054571817e-34,    // exact (h / 2pi with exact h)
    1.380649e-23,       // exact
    1.67262192369e-27,  //
    1.602176634e-19,    // exact
    1.25663706212e-6,   //
};

namespace water {

/// Resonance wavenumber of the lowest internal rotation gap, 160 cm^-1.
inline constexpr double kWavenumber = 16000.0;
/// Dipole half-length d_e, with d0 = 2 e d_e [m].
inline constexpr double kDipoleHalfLength = 0.2e-10;
/// Gyration length d_g, with I = 2 m_p d_g^2 [m].
inline constexpr double kGyrationLength = 0.82e-10;
/// Observed hydration numbers per ion.
inline constexpr int kHydrationMin = 20;
inline constexpr int kHydrationMax = 40;
inline constexpr int kHydrationDefault = 30;
inline constexpr double kTemperatureDefault = 300.0;

/// Linear response of the permanent polarization to a static field,
/// P_z = c_P E0z [m/V]. Taken as given.
inline constexpr double kPolarizationCoefficient = 9.1e-9;
/// Upper end of the field range where the linear P_z(E0z) law holds [V/m].
inline constexpr double kPolarizationFieldLimit = 1e7;

}  // namespace water

/// Two-significant-figure reference values the calculator is checked against.
namespace reference {
inline constexpr double kPopulationDifference = 3.6;   // n = 30, T = 300 K
inline constexpr double kGapOverThermal = 0.12;        // eps / k_B T at 300 K
inline constexpr double kCoherenceLength = 63e-6;      // m
inline constexpr double kFieldCoefficient = 2.6e-22;   // c_A
inline constexpr double kTimeCoefficient = 2.4e-4;     // c_t
}  // namespace reference

}  // namespace hydrofel
