#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "abphase/em/potential.hpp"
#include "abphase/numerics/vector_calculus.hpp"

using namespace abphase;
using numerics::curl_fd;
using numerics::divergence_fd;
using numerics::gradient_fd;

TEST(Curl, UniformFieldHasNoCurl) {
  auto f = [](const Vec3&) { return Vec3{1.0, -2.0, 3.0}; };
  const Vec3 c = curl_fd(f, {0.3, 0.4, 0.5}, 1e-3);
  EXPECT_EQ(c, Vec3{});
}

TEST(Curl, RotationGivesUnitZ) {
  auto f = [](const Vec3& p) { return Vec3{-p.y, p.x, 0.0} * 0.5; };
  const Vec3 c = curl_fd(f, {1.2, -0.7, 3.0}, 1e-3);
  EXPECT_NEAR(c.x, 0.0, 1e-12);
  EXPECT_NEAR(c.y, 0.0, 1e-12);
  EXPECT_NEAR(c.z, 1.0, 1e-12);
}

TEST(Divergence, RadialFieldGivesThree) {
  auto f = [](const Vec3& p) { return p; };
  EXPECT_NEAR(divergence_fd(f, {0.1, 2.0, -3.0}, 1e-3), 3.0, 1e-12);
}

TEST(Gradient, QuadraticScalar) {
  auto f = [](const Vec3& p) { return p.x * p.x + 3.0 * p.y * p.z; };
  const Vec3 g = gradient_fd(f, {1.0, 2.0, 3.0}, 1e-4);
  EXPECT_NEAR(g.x, 2.0, 1e-9);
  EXPECT_NEAR(g.y, 9.0, 1e-9);
  EXPECT_NEAR(g.z, 6.0, 1e-9);
}

TEST(Curl, SecondOrderConvergence) {
  // A = (sin y cos z, sin z cos x, sin x cos y); curl known in closed form.
  auto f = [](const Vec3& p) {
    return Vec3{std::sin(p.y) * std::cos(p.z), std::sin(p.z) * std::cos(p.x),
                std::sin(p.x) * std::cos(p.y)};
  };
  const Vec3 p{0.4, 0.9, -0.3};
  const Vec3 exact{-std::sin(p.x) * std::sin(p.y) - std::cos(p.z) * std::cos(p.x),
                   -std::sin(p.y) * std::sin(p.z) - std::cos(p.x) * std::cos(p.y),
                   -std::sin(p.z) * std::sin(p.x) - std::cos(p.y) * std::cos(p.z)};
  const double h1 = 1e-2, h2 = 5e-3;
  const double e1 = norm(curl_fd(f, p, h1) - exact);
  const double e2 = norm(curl_fd(f, p, h2) - exact);
  const double slope = std::log(e1 / e2) / std::log(h1 / h2);
  EXPECT_NEAR(slope, 2.0, 0.2);
}

TEST(Curl, IdealSolenoidInteriorField) {
  const auto s = em::SolenoidSpec::infinite(1.5, 2.0);
  const auto model = em::make_model(em::PotentialBase::ideal_infinite, s);
  auto a = [&](const Vec3& p) { return em::potential(model, p).A; };
  const Vec3 c = curl_fd(a, {0.3, 0.2, 0.0}, 1e-4);
  EXPECT_NEAR(c.z, s.interior_field(), 1e-9);
  EXPECT_NEAR(c.z, 2.0 / (std::numbers::pi * 1.5 * 1.5), 1e-9);
  const Vec3 outside = curl_fd(a, {3.0, 1.0, 0.0}, 1e-4);
  EXPECT_NEAR(norm(outside), 0.0, 1e-9);
}

TEST(Stencil, OrderAndSpacing) {
  const auto s = numerics::fd_stencil({1.0, 2.0, 3.0}, 0.5);
  EXPECT_EQ(s[0], (Vec3{1.5, 2.0, 3.0}));
  EXPECT_EQ(s[5], (Vec3{1.0, 2.0, 2.5}));
}
