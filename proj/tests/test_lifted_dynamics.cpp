#include <doctest.h>

#include <cmath>

#include "liftctl/errors.hpp"
#include "liftctl/lifted_dynamics.hpp"
#include "liftctl/rng.hpp"

using namespace liftctl;

namespace {

LiftedSystem di_system(const std::string& pair = "atanh", double x1_bar = 2.0,
                       double x2_bar = 1.0) {
  return {double_integrator(x1_bar, x2_bar), find_pair(pair), find_pair(pair)};
}

double z1_of(const LiftedSystem& sys, double x1) {
  return lift(x1, sys.bounds().x1_bar, sys.pair1).z;
}
double z2_of(const LiftedSystem& sys, double x2) {
  return lift(x2, sys.bounds().x2_bar, sys.pair2).z;
}

}  // namespace

TEST_CASE("F1 examples") {
  const auto sys = di_system();
  CHECK(F1(sys, z1_of(sys, 0.5), z2_of(sys, 0.3)) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(F1(sys, 0.0, 0.0) == 0.0);
  const double outside = F1(sys, z1_of(sys, 1.9), z2_of(sys, 0.9));
  CHECK(outside == doctest::Approx(1.4).epsilon(1e-14));
  CHECK(std::abs(outside) >= 1.0);
}

TEST_CASE("F2 examples") {
  const auto sys = di_system();
  const double z1 = z1_of(sys, 0.1);
  CHECK(F2(sys, z1, z2_of(sys, 0.3), 0.2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(F2(sys, z1, z2_of(sys, 0.9), 0.5) == doctest::Approx(1.4).epsilon(1e-14));
  SplitMix64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const double x2 = rng.symmetric(1.0);
    CHECK(std::abs(F2(sys, z1, z2_of(sys, x2), -x2)) < 1e-15);
  }
}

TEST_CASE("F1_inverse examples") {
  const auto sys = di_system();
  const double z1 = z1_of(sys, 0.5);
  const double z2 = F1_inverse(sys, z1, 0.4);
  CHECK(sys.pair2.psi(z2 / 1.0) == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(sys.x2_of(z2) == doctest::Approx(0.3).epsilon(1e-14));

  CHECK(F1_inverse_target(sys, z1, 0.9) == doctest::Approx(1.3).epsilon(1e-14));
  try {
    F1_inverse(sys, z1, 0.9);
    FAIL("expected Inadmissible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Inadmissible);
  }
}

TEST_CASE("F2_inverse examples") {
  const auto sys = di_system();
  const double z1 = z1_of(sys, 0.5);
  CHECK(F2_inverse(sys, z1, z2_of(sys, 0.3), 0.5) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(F2_inverse(sys, z1, z2_of(sys, 0.3), 0.0) == doctest::Approx(-0.3).epsilon(1e-14));
}

TEST_CASE("inverses are left inverses on admissible points") {
  for (const auto& pair : pair_names()) {
    CAPTURE(pair);
    const auto sys = di_system(pair);
    SplitMix64 rng(17);
    int checked = 0;
    while (checked < 500) {
      const double x1 = rng.symmetric(2.0);
      const double x2 = rng.symmetric(1.0);
      if (std::abs(x1 + x2) >= 1.9 || std::abs(x2) > 0.99) continue;
      ++checked;
      const double z1 = z1_of(sys, x1);
      const double z2 = z2_of(sys, x2);
      const double y = F1(sys, z1, z2);
      CHECK(sys.x2_of(F1_inverse(sys, z1, y)) == doctest::Approx(x2).epsilon(1e-9));

      const double u = rng.symmetric(0.5);
      if (std::abs(x2 + u) >= 1.0) continue;
      CHECK(F2_inverse(sys, z1, z2, F2(sys, z1, z2, u)) == doctest::Approx(u).epsilon(1e-9));
    }
  }
}

TEST_CASE("lifted maps equal original-coordinate maps for every pair") {
  for (const auto& pair : pair_names()) {
    CAPTURE(pair);
    for (const auto bounds : {StateBounds{2.0, 1.0}, StateBounds{1.0, 2.0}}) {
      const auto sys = di_system(pair, bounds.x1_bar, bounds.x2_bar);
      SplitMix64 rng(23);
      for (int i = 0; i < 500; ++i) {
        const double x1 = rng.symmetric(0.999 * bounds.x1_bar);
        const double x2 = rng.symmetric(0.999 * bounds.x2_bar);
        const double u = rng.symmetric(1.0);
        const double z1 = z1_of(sys, x1);
        const double z2 = z2_of(sys, x2);
        CHECK(F1(sys, z1, z2) ==
              doctest::Approx((x1 + x2) / bounds.x1_bar).epsilon(1e-12).scale(1.0));
        CHECK(F2(sys, z1, z2, u) ==
              doctest::Approx((x2 + u) / bounds.x2_bar).epsilon(1e-12).scale(1.0));
      }
    }
  }
}
