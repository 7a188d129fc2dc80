#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hydrofel/params.hpp"

namespace hydrofel {
namespace {

// Values below were produced by a separate scalar script (plain arithmetic on
// the CODATA 2018 constants) and frozen here.
constexpr double kD0 = 6.408706536e-30;
constexpr double kInertia = 2.2493419629783125e-47;
constexpr double kDeltaN = 3.645707926471205;
constexpr double kAlphaPz01 = 1.3560339835345152e28;
constexpr double kBetaPz01 = 64873.69783550921;
constexpr double kFieldCoefficient = 2.577142357753979e-22;
constexpr double kTimeCoefficient = 2.3922717212367168e-4;
constexpr double kGainTimeDefault = 6.499341064660992e-11;

void expect_rel(double actual, double expected, double tol) {
  EXPECT_NEAR(actual / expected, 1.0, tol) << "actual " << actual << " expected " << expected;
}

MediumParams default_medium() {
  MediumParams m;
  m.concentration = 6.022e23;
  m.static_field = 1e6;
  return m;
}

TEST(Resonance, CoherenceLengthAndGap) {
  const auto r = resonance_params(16000.0);
  EXPECT_DOUBLE_EQ(r.coherence_length, 62.5e-6);
  EXPECT_NEAR(r.coherence_length / reference::kCoherenceLength, 1.0, 0.02);
  const double ratio = r.gap / (kCodata2018.k_B * 300.0);
  EXPECT_NEAR(ratio, 0.122, 5e-4);
  EXPECT_NEAR(ratio / reference::kGapOverThermal, 1.0, 0.03);
  EXPECT_DOUBLE_EQ(r.gap, kCodata2018.hbar * r.angular_frequency);
}

TEST(Resonance, UnitWavenumber) {
  const auto r = resonance_params(1.0);
  EXPECT_EQ(r.coherence_length, 1.0);
  EXPECT_EQ(r.angular_frequency, kCodata2018.c);
}

TEST(Resonance, RejectsNonPositive) {
  EXPECT_THROW(resonance_params(0.0), DomainError);
  EXPECT_THROW(resonance_params(-5.0), DomainError);
}

TEST(Dipole, Constants) {
  const auto d = dipole_constants(0.2e-10);
  expect_rel(d.d0, kD0, 1e-12);
  EXPECT_NEAR(d.d0_tilde / d.d0, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_NEAR(d.d0_tilde / d.d0, 0.8165, 1e-4);
  EXPECT_THROW(dipole_constants(0.0), DomainError);
}

TEST(Inertia, Values) {
  expect_rel(moment_of_inertia(0.82e-10), kInertia, 1e-12);
  EXPECT_DOUBLE_EQ(moment_of_inertia(1.64e-10), 4.0 * moment_of_inertia(0.82e-10));
  EXPECT_DOUBLE_EQ(moment_of_inertia(1.0), 2.0 * kCodata2018.m_p);
  EXPECT_THROW(moment_of_inertia(-1.0), DomainError);
}

TEST(PopulationDifference, RoomTemperature) {
  const double gap = resonance_params(16000.0).gap;
  const double dn = population_difference(30, gap, 300.0);
  expect_rel(dn, kDeltaN, 1e-12);
  EXPECT_NEAR(dn / reference::kPopulationDifference, 1.0, 0.03);
}

TEST(PopulationDifference, Limits) {
  const double gap = resonance_params(16000.0).gap;
  EXPECT_LT(population_difference(30, gap, 1e12), 1e-6);
  EXPECT_NEAR(population_difference(30, gap, 1e-3), 30.0, 1e-12);
  EXPECT_THROW(population_difference(30, gap, 0.0), DomainError);
  EXPECT_THROW(population_difference(30, gap, -1.0), DomainError);
  EXPECT_THROW(population_difference(0, gap, 300.0), DomainError);
}

TEST(PopulationDifference, MonotoneInTemperatureAndHydration) {
  const double gap = resonance_params(16000.0).gap;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> temp(1.0, 2000.0);
  std::uniform_int_distribution<int> hyd(1, 100);
  for (int i = 0; i < 500; ++i) {
    const double t1 = temp(rng), t2 = temp(rng);
    const int n = hyd(rng);
    const double lo = std::min(t1, t2), hi = std::max(t1, t2);
    if (lo == hi) continue;
    EXPECT_GT(population_difference(n, gap, lo), population_difference(n, gap, hi));
    EXPECT_LT(population_difference(n, gap, lo), population_difference(n + 1, gap, lo));
    const double dn = population_difference(n, gap, lo);
    EXPECT_GT(dn, 0.0);
    EXPECT_LT(dn, n);
  }
}

TEST(Polarization, FromField) {
  EXPECT_NEAR(polarization_from_field(1e6), 9.1e-3, 1e-18);
  EXPECT_EQ(polarization_from_field(0.0), 0.0);
  EXPECT_THROW(polarization_from_field(2e8), RangeError);
  EXPECT_THROW(polarization_from_field(-1.0), DomainError);
  std::vector<std::string> warnings;
  polarization_from_field(5e7, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  warnings.clear();
  polarization_from_field(1e7, &warnings);
  EXPECT_TRUE(warnings.empty());
}

TEST(Coupling, OracleValues) {
  MediumParams m = default_medium();
  m.static_field.reset();
  m.polarization = 0.1;
  const auto d = derive(m).params;
  expect_rel(d.alpha, kAlphaPz01, 1e-12);
  expect_rel(d.beta, kBetaPz01, 1e-12);
}

TEST(Coupling, LinearInPolarization) {
  MediumParams m = default_medium();
  m.static_field.reset();
  m.polarization = 0.1;
  const auto a = derive(m).params;
  m.polarization = 0.2;
  const auto b = derive(m).params;
  EXPECT_NEAR(b.alpha / a.alpha, 2.0, 1e-14);
  EXPECT_NEAR(b.beta / a.beta, 2.0, 1e-14);
}

TEST(Coupling, ZeroPolarizationIsDegenerate) {
  MediumParams m = default_medium();
  m.static_field = 0.0;
  EXPECT_THROW(derive(m), DegenerateCouplingError);
  DerivedParams partial;
  partial.population_difference = 1;
  partial.angular_frequency = 1;
  partial.moment_of_inertia = 1;
  EXPECT_THROW(coupling_coefficients(partial, default_medium()), DegenerateCouplingError);
}

TEST(Medium, ConcentrationConsistency) {
  MediumParams m = default_medium();
  m.ion_count = 6.022e11;
  m.volume = 1e-12;
  EXPECT_NO_THROW(derive(m));
  m.ion_count = 6.1e11;
  EXPECT_THROW(derive(m), DomainError);
  m.concentration.reset();
  EXPECT_DOUBLE_EQ(ion_concentration(m), 6.1e23);
  m.volume.reset();
  EXPECT_THROW(ion_concentration(m), DomainError);
}

TEST(Medium, ExactlyOnePolarizationSource) {
  MediumParams m = default_medium();
  m.polarization = 0.1;
  EXPECT_THROW(derive(m), DomainError);
  m.static_field.reset();
  m.polarization.reset();
  EXPECT_THROW(derive(m), DomainError);
  m.polarization = 1.5;
  EXPECT_THROW(derive(m), RangeError);
}

TEST(Medium, HydrationOutsideObservedRangeWarns) {
  MediumParams m = default_medium();
  m.hydration = 10;
  EXPECT_FALSE(derive(m).warnings.empty());
  m.hydration = 30;
  EXPECT_TRUE(derive(m).warnings.empty());
  m.hydration = 0;
  EXPECT_THROW(derive(m), DomainError);
}

TEST(Derived, Invariants) {
  const auto d = derive(default_medium()).params;
  EXPECT_DOUBLE_EQ(d.coherence_length * 16000.0, 1.0);
  EXPECT_DOUBLE_EQ(d.angular_frequency, kCodata2018.c / d.coherence_length);
  EXPECT_NEAR(d.gap / (kCodata2018.hbar * d.angular_frequency), 1.0, 1e-15);
  EXPECT_NEAR(d.d0_tilde / d.d0, std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_GT(d.population_difference, 0.0);
  EXPECT_LT(d.population_difference, d.hydration);
}

TEST(ScaleFactors, FixedPoint) {
  const auto s = scale_factors(2.0, 1.0);
  EXPECT_DOUBLE_EQ(s.amplitude, 1.0);
  EXPECT_DOUBLE_EQ(s.time, 1.0);
  EXPECT_THROW(scale_factors(0.0, 1.0), DomainError);
  EXPECT_THROW(scale_factors(1.0, -1.0), DomainError);
}

// alpha a t^2 = 2 and beta t / a = 1 are the identities that turn the
// physical equations into the universal scaled form.
TEST(ScaleFactors, RoundTripIdentitiesProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exp10(-5.0, 30.0);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = std::pow(10.0, exp10(rng));
    const double beta = std::pow(10.0, exp10(rng));
    for (double k : {1.0, 8.0}) {
      const auto s = scale_factors(k * alpha, k * beta);
      EXPECT_NEAR(k * alpha * s.amplitude * s.time * s.time / 2.0, 1.0, 1e-12);
      EXPECT_NEAR(k * beta * s.time / s.amplitude, 1.0, 1e-12);
    }
  }
}

TEST(ScaleFactors, ScenarioTimeScale) {
  MediumParams m = default_medium();
  m.static_field.reset();
  m.polarization = 0.1;
  const auto d = derive(m).params;
  expect_rel(d.time_scale,
             kTimeCoefficient * std::pow(6.022e23, -1.0 / 3.0) * std::pow(0.1, -2.0 / 3.0), 1e-12);
}

TEST(Design, ReferenceCoefficients) {
  const auto p = design_formulas(6.022e23, 0.1, 30, 300.0);
  expect_rel(p.field_coefficient, kFieldCoefficient, 1e-12);
  expect_rel(p.time_coefficient, kTimeCoefficient, 1e-12);
  EXPECT_NEAR(p.field_coefficient / reference::kFieldCoefficient, 1.0, 0.05);
  EXPECT_NEAR(p.time_coefficient / reference::kTimeCoefficient, 1.0, 0.05);
}

TEST(Design, GainTimeAtDefaultScenario) {
  const auto p = design_formulas(6.022e23, polarization_from_field(1e6), 30, 300.0);
  expect_rel(p.gain_time, kGainTimeDefault, 1e-12);
}

TEST(Design, CoefficientsIndependentOfConcentrationAndPolarization) {
  const auto ref = design_formulas(6.022e23, 0.1, 30, 300.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lrho(15.0, 28.0), lpz(-6.0, 0.0);
  for (int i = 0; i < 300; ++i) {
    const auto p = design_formulas(std::pow(10.0, lrho(rng)), std::pow(10.0, lpz(rng)), 30, 300.0);
    EXPECT_NEAR(p.field_coefficient / ref.field_coefficient, 1.0, 1e-10);
    EXPECT_NEAR(p.time_coefficient / ref.time_coefficient, 1.0, 1e-10);
  }
}

TEST(Design, Errors) {
  EXPECT_THROW(design_formulas(6e23, 0.0, 30, 300.0), DegenerateCouplingError);
  EXPECT_THROW(design_formulas(6e23, 1.2, 30, 300.0), RangeError);
  EXPECT_THROW(design_formulas(0.0, 0.1, 30, 300.0), DomainError);
}

TEST(LennardJones, ZeroMinimumAndDecay) {
  const double eps = 1.7e-21, sigma = 3e-10;
  EXPECT_NEAR(lennard_jones(sigma, eps, sigma), 0.0, 1e-35);
  // dv/dr = 0 at r = 2^(1/6) sigma, where v = -eps.
  EXPECT_NEAR(lennard_jones(std::pow(2.0, 1.0 / 6.0) * sigma, eps, sigma) / eps, -1.0, 1e-14);
  const double far = lennard_jones(1e3 * sigma, eps, sigma);
  EXPECT_LT(far, 0.0);
  EXPECT_GT(far, -1e-15 * eps);
  EXPECT_THROW(lennard_jones(0.0, eps, sigma), DomainError);
}

TEST(LennardJones, SingleSignChangeAtSigma) {
  const double eps = 1.0, sigma = 1.0;
  int changes = 0;
  double prev = lennard_jones(0.5, eps, sigma);
  for (int i = 1; i <= 4000; ++i) {
    const double r = 0.5 + i * 1e-3 + 1e-7;
    const double v = lennard_jones(r, eps, sigma);
    if ((v > 0) != (prev > 0)) {
      ++changes;
      EXPECT_NEAR(r, sigma, 1.1e-3);
    }
    EXPECT_EQ(v > 0, r < sigma);
    prev = v;
  }
  EXPECT_EQ(changes, 1);
}

TEST(Slippage, Examples) {
  const auto a = slippage_check(1e-4, 1e-3, 1.0);
  EXPECT_NEAR(a.slippage_length, (kCodata2018.c - 1.0) * 1e-3, 1e-6);
  EXPECT_NEAR(a.slippage_length, 3.0e5, 1e3);
  EXPECT_TRUE(a.condition_met);
  const auto b = slippage_check(0.5, 1.0, kCodata2018.c / 2);
  EXPECT_DOUBLE_EQ(b.slippage_length, 1.0);
  const auto c = slippage_check(b.slippage_length, 1.0, kCodata2018.c / 2);
  EXPECT_DOUBLE_EQ(c.ratio, 1.0);
  EXPECT_FALSE(c.condition_met);
  EXPECT_THROW(slippage_check(1.0, 1.0, kCodata2018.c), DomainError);
}

}  // namespace
}  // namespace hydrofel
