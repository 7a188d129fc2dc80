#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hydrofel/sweep.hpp"

namespace hydrofel {
namespace {

MediumParams base_medium() {
  MediumParams m;
  m.concentration = 6.022e23;
  m.static_field = 1e6;
  m.ion_count = 6.022e11;
  m.volume = 1e-12;
  return m;
}

SimConfig small_run() {
  SimConfig s;
  s.particles = 256;
  s.horizon = 12;
  s.record_stride = 10;
  return s;
}

SweepSpec spec_for(SweepAxis axis, std::vector<double> values, SweepObservable obs,
                   SweepMode mode = SweepMode::shared) {
  SweepSpec s;
  s.axis = axis;
  s.values = std::move(values);
  s.base = base_medium();
  s.sim = small_run();
  s.observable = obs;
  s.mode = mode;
  s.threads = 1;
  return s;
}

std::vector<double> decade(double centre) {
  std::vector<double> v;
  for (int i = 0; i < 5; ++i) v.push_back(centre * std::pow(10.0, -0.5 + 0.25 * i));
  return v;
}

TEST(SweepValidate, NeedsThreeAscendingPositiveValues) {
  auto s = spec_for(SweepAxis::concentration, {1e23}, SweepObservable::sat_amplitude_physical);
  EXPECT_THROW(validate(s), DomainError);
  s.values = {1e23, 2e23};
  EXPECT_THROW(validate(s), DomainError);
  s.values = {1e23, 3e23, 2e23};
  EXPECT_THROW(validate(s), DomainError);
  s.values = {0.0, 1e23, 2e23};
  EXPECT_THROW(validate(s), DomainError);
  s.values = {1e23, 2e23, 3e23};
  EXPECT_NO_THROW(validate(s));
}

TEST(SweepValidate, HydrationValuesMustBeIntegers) {
  auto s = spec_for(SweepAxis::hydration, {20, 25.5, 30}, SweepObservable::gain_time_physical);
  EXPECT_THROW(validate(s), DomainError);
  s.values = {20, 25, 30};
  EXPECT_NO_THROW(validate(s));
}

TEST(SweepAxisNames, RoundTrip) {
  for (auto a : {SweepAxis::concentration, SweepAxis::static_field, SweepAxis::ion_count,
                 SweepAxis::temperature, SweepAxis::hydration}) {
    EXPECT_EQ(parse_sweep_axis(to_string(a)), a);
  }
  for (auto o : {SweepObservable::sat_amplitude_physical, SweepObservable::gain_time_physical,
                 SweepObservable::sat_intensity_physical}) {
    EXPECT_EQ(parse_sweep_observable(to_string(o)), o);
  }
  EXPECT_EQ(parse_sweep_mode("shared"), SweepMode::shared);
  EXPECT_THROW(parse_sweep_axis("pressure"), DomainError);
}

TEST(ApplyAxis, ConcentrationAndIonCountStayConsistent) {
  const auto m = apply_axis(base_medium(), SweepAxis::concentration, 1e24);
  EXPECT_DOUBLE_EQ(*m.ion_count, 1e24 * 1e-12);
  EXPECT_NO_THROW(ion_concentration(m));
  const auto n = apply_axis(base_medium(), SweepAxis::ion_count, 1e12);
  EXPECT_DOUBLE_EQ(*n.concentration, 1e24);

  MediumParams no_volume = base_medium();
  no_volume.volume.reset();
  no_volume.ion_count.reset();
  EXPECT_THROW(apply_axis(no_volume, SweepAxis::ion_count, 1e12), DomainError);
}

TEST(ApplyAxis, FieldReplacesExplicitPolarization) {
  MediumParams m = base_medium();
  m.static_field.reset();
  m.polarization = 0.2;
  const auto out = apply_axis(m, SweepAxis::static_field, 2e6);
  EXPECT_FALSE(out.polarization);
  EXPECT_DOUBLE_EQ(*out.static_field, 2e6);
}

struct ExponentCase {
  SweepAxis axis;
  double centre;
  SweepObservable obs;
  double exponent;
};

TEST(SweepShared, ScalingExponentsAreExact) {
  const std::vector<ExponentCase> cases = {
      {SweepAxis::concentration, 6.022e23, SweepObservable::sat_amplitude_physical, 2.0 / 3.0},
      {SweepAxis::static_field, 1e6, SweepObservable::sat_amplitude_physical, 1.0 / 3.0},
      {SweepAxis::concentration, 6.022e23, SweepObservable::gain_time_physical, -1.0 / 3.0},
      {SweepAxis::static_field, 1e6, SweepObservable::gain_time_physical, -2.0 / 3.0},
      {SweepAxis::ion_count, 6.022e11, SweepObservable::sat_intensity_physical, 4.0 / 3.0},
  };
  for (const auto& c : cases) {
    const auto r = run_sweep(spec_for(c.axis, decade(c.centre), c.obs));
    ASSERT_TRUE(r.fit) << to_string(c.axis);
    EXPECT_NEAR(r.fit->exponent, c.exponent, 1e-9) << to_string(c.axis) << ' ' << to_string(c.obs);
    EXPECT_NEAR(r.fit->r_squared, 1.0, 1e-12);
    for (const auto& row : r.rows) {
      EXPECT_TRUE(row.ok());
      EXPECT_GT(row.peak_amplitude, 1.0);
      EXPECT_NEAR(row.growth_rate, std::sqrt(3.0) / 2.0, 0.05);
    }
  }
}

TEST(SweepShared, TemperatureSweepRuns) {
  const auto r = run_sweep(spec_for(SweepAxis::temperature, {280, 300, 320, 340},
                                    SweepObservable::gain_time_physical));
  ASSERT_EQ(r.rows.size(), 4u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    EXPECT_GT(r.rows[i].observable, r.rows[i - 1].observable);
  }
}

TEST(SweepPerRow, FailedRowIsFlaggedAndSweepCompletes) {
  const auto r = run_sweep(spec_for(SweepAxis::static_field, {1e5, 1e6, 1e7, 2e8},
                                    SweepObservable::gain_time_physical, SweepMode::per_row));
  ASSERT_EQ(r.rows.size(), 4u);
  EXPECT_TRUE(r.rows[0].ok());
  EXPECT_TRUE(r.rows[2].ok());
  ASSERT_FALSE(r.rows[3].ok());
  EXPECT_NE(r.rows[3].error->find("polarization"), std::string::npos);
  EXPECT_TRUE(std::isnan(r.rows[3].observable));
  ASSERT_TRUE(r.fit);
  EXPECT_NEAR(r.fit->exponent, -2.0 / 3.0, 1e-9);
}

TEST(SweepPerRow, TooFewSuccessfulRowsLeavesNoFit) {
  const auto r = run_sweep(spec_for(SweepAxis::static_field, {1e6, 2e8, 3e8},
                                    SweepObservable::gain_time_physical, SweepMode::per_row));
  EXPECT_FALSE(r.fit);
  EXPECT_TRUE(r.fit_error);
}

TEST(SweepPerRow, IndependentOfThreadCountAndMatchesShared) {
  auto spec = spec_for(SweepAxis::concentration, {1e23, 3e23, 1e24},
                       SweepObservable::sat_amplitude_physical, SweepMode::per_row);
  const auto serial = run_sweep(spec);
  spec.threads = 3;
  const auto threaded = run_sweep(spec);
  spec.mode = SweepMode::shared;
  const auto shared = run_sweep(spec);
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    EXPECT_EQ(serial.rows[i].observable, threaded.rows[i].observable);
    EXPECT_EQ(serial.rows[i].tau_saturation, threaded.rows[i].tau_saturation);
    EXPECT_EQ(serial.rows[i].observable, shared.rows[i].observable);
  }
}

TEST(DesignConstants, FrozenValues) {
  const auto r = verify_design_constants(30, 300.0);
  EXPECT_NEAR(r.field_coefficient / 2.577142357753979e-22, 1.0, 1e-12);
  EXPECT_NEAR(r.time_coefficient / 2.3922717212367168e-4, 1.0, 1e-12);
  EXPECT_LT(r.field_pair_spread, 1e-10);
  EXPECT_LT(r.time_pair_spread, 1e-10);
  EXPECT_LT(std::abs(r.field_deviation), 0.05);
  EXPECT_LT(std::abs(r.time_deviation), 0.05);
}

TEST(DesignConstants, PairIndependenceProperty) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> n(20, 40);
  std::uniform_real_distribution<double> t(270.0, 370.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = verify_design_constants(n(rng), t(rng));
    EXPECT_LT(r.field_pair_spread, 1e-10);
    EXPECT_LT(r.time_pair_spread, 1e-10);
  }
}

TEST(DesignConstants, Mu0PerturbationMovesOnlyFieldCoefficientOutOfBand) {
  PhysicalConstants pc = kCodata2018;
  pc.mu0 *= 1.1;
  const auto r = verify_design_constants(30, 300.0, pc);
  EXPECT_GT(std::abs(r.field_deviation), 0.05);
  EXPECT_LT(std::abs(r.time_deviation), 0.05);
}

}  // namespace
}  // namespace hydrofel
