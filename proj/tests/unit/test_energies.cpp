#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "abphase/energies/energies.hpp"

using namespace abphase;
using em::ChargeState;
using em::GaugeSpec;
using em::SolenoidSpec;
using energies::boyer_energy_closed_form;

namespace {
constexpr double kPi = std::numbers::pi;

ChargeState charge_at(Vec3 q, Vec3 v, double e = 1.0) {
  ChargeState c;
  c.charge = e;
  c.position = q;
  c.velocity = v;
  return c;
}

QuadOptions loose() {
  QuadOptions o = QuadOptions::for_length_scale(1.0);
  o.rel_tol = 1e-6;
  return o;
}
}  // namespace

TEST(BoyerClosed, ReferenceValue) {
  const auto s = SolenoidSpec::infinite(0.5, 2 * kPi);
  const auto c = charge_at({1.0, 0.0, 0.0}, {0.0, 0.01, 0.0});
  EXPECT_NEAR(boyer_energy_closed_form(c, s), 0.01, 1e-16);
}

TEST(BoyerClosed, RadialAndAxialMotionGiveZero) {
  const auto s = SolenoidSpec::infinite(1.0, 3.0);
  EXPECT_EQ(boyer_energy_closed_form(charge_at({2, 0, 0}, {0.05, 0, 0}), s), 0.0);
  EXPECT_EQ(boyer_energy_closed_form(charge_at({2, 0, 0}, {0, 0, 0.05}), s), 0.0);
}

TEST(BoyerClosed, OddInFluxChargeAndVelocity) {
  const auto c = charge_at({0.0, 3.0, 1.0}, {-0.02, 0.01, 0.0}, 0.7);
  const double base = boyer_energy_closed_form(c, SolenoidSpec::infinite(1.0, 2.0));
  EXPECT_NE(base, 0.0);
  EXPECT_EQ(boyer_energy_closed_form(c, SolenoidSpec::infinite(1.0, -2.0)), -base);
  EXPECT_EQ(boyer_energy_closed_form(charge_at(c.position, c.velocity * -1.0, 0.7),
                                     SolenoidSpec::infinite(1.0, 2.0)),
            -base);
  EXPECT_EQ(boyer_energy_closed_form(charge_at(c.position, c.velocity, -0.7),
                                     SolenoidSpec::infinite(1.0, 2.0)),
            -base);
}

TEST(BoyerClosed, SurfaceChargeRejected) {
  EXPECT_THROW(boyer_energy_closed_form(charge_at({1, 0, 0}, {0, 0.01, 0}),
                                        SolenoidSpec::infinite(1.0, 1.0)),
               GeometryError);
}

TEST(SaldanhaClosed, ExactNegative) {
  const auto s = SolenoidSpec::infinite(1.0, 1.7);
  const auto c = charge_at({1.5, 2.0, 0.0}, {0.01, -0.03, 0.0});
  EXPECT_EQ(energies::saldanha_energy_closed_form(c, s), -boyer_energy_closed_form(c, s));
}

TEST(BoyerVolume, MatchesClosedFormForLongSolenoid) {
  const auto c = charge_at({3.0, 0.0, 0.0}, {0.0, 0.02, 0.0});
  const auto s = SolenoidSpec::finite(1.0, 300.0, 2.0);
  const auto r = energies::boyer_energy_volume_integral(c, s, loose());
  EXPECT_TRUE(r.converged);
  const double closed = boyer_energy_closed_form(c, SolenoidSpec::infinite(1.0, 2.0));
  EXPECT_LT(std::abs(r.value - closed) / std::abs(closed), 1e-2);
}

TEST(BoyerVolume, InfiniteSolenoidUsesTruncationWithTailBound) {
  const auto c = charge_at({2.0, 0.0, 0.5}, {0.0, 0.01, 0.0});
  const auto s = SolenoidSpec::infinite(1.0, 1.0);
  QuadOptions o = loose();
  o.z_truncation = 200.0;
  const auto r = energies::boyer_energy_volume_integral(c, s, o);
  const double closed = boyer_energy_closed_form(c, s);
  EXPECT_LE(std::abs(r.value - closed), r.error_estimate);
  EXPECT_LT(std::abs(r.value - closed) / closed, 1e-2);
}

TEST(BoyerVolume, VelocityFlipNegates) {
  const auto s = SolenoidSpec::finite(1.0, 50.0, 1.0);
  const auto a = energies::boyer_energy_volume_integral(charge_at({2, 1, 0}, {0.01, 0.02, 0.005}), s, loose());
  const auto b = energies::boyer_energy_volume_integral(charge_at({2, 1, 0}, {-0.01, -0.02, -0.005}), s, loose());
  EXPECT_NEAR(a.value, -b.value, 1e-14 * std::abs(a.value));
}

TEST(BoyerVolume, ZeroVelocityAndInteriorCharge) {
  const auto s = SolenoidSpec::finite(1.0, 50.0, 1.0);
  EXPECT_EQ(energies::boyer_energy_volume_integral(charge_at({2, 0, 0}, {}), s, loose()).value, 0.0);
  EXPECT_THROW(energies::boyer_energy_volume_integral(charge_at({0.5, 0, 0}, {0, 0.01, 0}), s, loose()),
               GeometryError);
}

TEST(SaldanhaConvolution, OppositeSignWithinTolerance) {
  const auto s = SolenoidSpec::finite(1.0, 500.0, 2.0);
  const auto c = charge_at({5.0, 0.0, 0.0}, {0.0, 0.01, 0.0});
  const auto r = energies::saldanha_energy_convolution(c, s, loose());
  EXPECT_TRUE(r.converged);
  const double closed = boyer_energy_closed_form(c, SolenoidSpec::infinite(1.0, 2.0));
  EXPECT_LT(r.value, 0.0);
  EXPECT_LT(std::abs(r.value + closed) / closed, 1e-3);
  EXPECT_THROW(energies::saldanha_energy_convolution(c, SolenoidSpec::infinite(1.0, 2.0), loose()),
               ContractError);
}

TEST(Report, CancellationSweep) {
  for (double rq : {2.0, 5.0, 10.0}) {
    for (const Vec3 v : {Vec3{0.0, 0.01, 0.0}, Vec3{0.003, 0.01, 0.002}}) {
      const auto c = charge_at({rq, 0.0, 0.0}, v);
      const auto s = SolenoidSpec::finite(1.0, 100.0 * rq, 2 * kPi);
      const auto rep = energies::cancellation_report(c, s, GaugeSpec::none(), loose());
      EXPECT_TRUE(rep.ok()) << rq;
      EXPECT_TRUE(rep.failures.empty());
      EXPECT_EQ(rep.saldanha_closed, -rep.boyer_closed);
      EXPECT_LE(std::abs(rep.cancellation_residual), rep.combined_error);
      EXPECT_LT(rep.identity_relative_gap, 1e-2);
      EXPECT_LT(std::abs(rep.boyer_volume.value - rep.boyer_closed) / rep.boyer_closed, 1e-2);
    }
  }
}

TEST(Report, HeTermIsWhatSurvivesAndShiftsWithGauge) {
  const auto s = SolenoidSpec::finite(1.0, 200.0, 1.5);
  const auto c = charge_at({2.0, 1.0, 0.0}, {0.004, 0.01, 0.0}, 0.9);
  const auto plain = energies::cancellation_report(c, s, GaugeSpec::none(), loose());
  EXPECT_NEAR(plain.total, plain.h_e_term, 1e-18);
  EXPECT_NEAR(plain.h_e_term, -plain.boyer_closed, 1e-18);
  const auto lin = em::gauges::linear({0.2, -0.1, 0.3});
  const auto gauged = energies::cancellation_report(c, s, GaugeSpec::regular(lin), loose());
  EXPECT_NEAR(gauged.h_e_term - plain.h_e_term, -0.9 * dot(c.velocity, Vec3{0.2, -0.1, 0.3}), 1e-16);
  // Boyer and Saldanha energies are built from the ungauged potential
  EXPECT_EQ(gauged.boyer_closed, plain.boyer_closed);
  EXPECT_EQ(gauged.boyer_volume.value, plain.boyer_volume.value);
  EXPECT_FALSE(gauged.string_correction.has_value());
}

TEST(Report, ZeroVelocityEverythingVanishes) {
  const auto s = SolenoidSpec::finite(1.0, 100.0, 1.0);
  const auto rep = energies::cancellation_report(charge_at({3, 0, 0}, {}), s, GaugeSpec::none(), loose());
  EXPECT_EQ(rep.boyer_closed, 0.0);
  EXPECT_EQ(rep.boyer_volume.value, 0.0);
  EXPECT_EQ(rep.cancellation_residual, 0.0);
  EXPECT_EQ(rep.h_e_term, 0.0);
  EXPECT_TRUE(rep.ok());
}

TEST(StringEnergy, CancelsBoyerOutside) {
  const double flux = 1.9;
  const auto s = SolenoidSpec::infinite(1.0, flux);
  const auto g = GaugeSpec::singular(flux);
  for (const Vec3 q : {Vec3{2.0, 0.0, 0.0}, Vec3{-3.0, 4.0, 1.0}}) {
    const auto c = charge_at(q, {0.01, 0.02, -0.01}, 1.3);
    EXPECT_NEAR(boyer_energy_closed_form(c, s) + energies::string_energy(c, g), 0.0, 1e-18);
  }
  const auto rep = energies::cancellation_report(charge_at({3, 0, 0}, {0, 0.01, 0}),
                                                 SolenoidSpec::finite(1.0, 300.0, flux), g, loose());
  ASSERT_TRUE(rep.string_correction.has_value());
  EXPECT_NEAR(*rep.string_correction, -rep.boyer_closed, 1e-18);
  EXPECT_NEAR(rep.h_e_term, 0.0, 1e-18);
}

TEST(StringEnergy, Contracts) {
  const auto c = charge_at({0, 0, 1}, {0.01, 0, 0});
  EXPECT_THROW(energies::string_energy(c, GaugeSpec::singular(1.0)), GeometryError);
  EXPECT_THROW(energies::string_energy(charge_at({1, 0, 0}, {}), GaugeSpec::none()), ContractError);
}

TEST(Fourier, IdentityHoldsAtSeveralRadii) {
  QuadOptions o;
  for (double r : {0.5, 1.0, 10.0}) {
    const auto f = energies::fourier_identity_check(r, o);
    EXPECT_LT(f.relative_deviation, 1e-4) << r;
    EXPECT_NEAR(f.expected, 1.0 / (4 * kPi * r), 1e-16);
  }
}

TEST(Fourier, ErrorEstimateMeetsTolerance) {
  for (double tol : {1e-6, 1e-8, 1e-10}) {
    QuadOptions o;
    o.rel_tol = tol;
    const auto f = energies::fourier_identity_check(1.0, o);
    EXPECT_TRUE(f.integral.converged) << tol;
    EXPECT_LE(std::abs(f.integral.value - f.expected), f.integral.error_estimate) << tol;
  }
}

TEST(Fourier, ScalesAsInverseRadius) {
  QuadOptions o;
  const auto a = energies::fourier_identity_check(1.0, o);
  const auto b = energies::fourier_identity_check(4.0, o);
  EXPECT_NEAR(a.integral.value / b.integral.value, 4.0, 4e-4);
  EXPECT_THROW(energies::fourier_identity_check(0.0, o), ContractError);
}

TEST(Wynn, AcceleratesAlternatingSeries) {
  // partial sums of 1 - 1/3 + 1/5 - ... -> pi / 4
  std::vector<double> s;
  double acc = 0.0;
  for (int n = 0; n < 20; ++n) {
    acc += (n % 2 ? -1.0 : 1.0) / (2 * n + 1);
    s.push_back(acc);
  }
  const auto [v, err] = energies::detail::wynn_epsilon(s);
  EXPECT_NEAR(v, kPi / 4, 1e-12);
  EXPECT_LT(err, 1e-10);
}
