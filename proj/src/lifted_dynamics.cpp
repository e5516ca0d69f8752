#include "liftctl/lifted_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "liftctl/errors.hpp"

namespace liftctl {
namespace {

constexpr double kInverseTol = 1e-10;

double require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, std::string(what) + " is not finite");
  return v;
}

void check_round_trip(double forward, double y, const char* what) {
  if (!(std::abs(forward - y) <= kInverseTol * std::max(1.0, std::abs(y)))) {
    throw Error(ErrorKind::InverseDrift, std::string(what) + " failed to reproduce its target (got " +
                                          std::to_string(forward) + ", wanted " +
                                          std::to_string(y) + ")");
  }
}

}  // namespace

double LiftedSystem::x1_of(double z1) const { return unlift(z1, bounds().x1_bar, pair1).x; }
double LiftedSystem::x2_of(double z2) const { return unlift(z2, bounds().x2_bar, pair2).x; }

double F1(const LiftedSystem& sys, double z1, double z2) {
  const auto& b = sys.bounds();
  const double x1 = sys.x1_of(z1);
  const double chi2 = unlift(z2, b.x2_bar, sys.pair2).chi;
  return require_finite(
      sys.plant.f1(x1) / b.x1_bar + (b.x2_bar / b.x1_bar) * sys.plant.g1(x1) * chi2, "F1");
}

double F2(const LiftedSystem& sys, double z1, double z2, double u) {
  const auto& b = sys.bounds();
  require_finite(u, "control");
  const double x1 = sys.x1_of(z1);
  const double x2 = sys.x2_of(z2);
  return require_finite(sys.plant.f2(x1, x2) / b.x2_bar + sys.plant.g2(x1, x2) / b.x2_bar * u,
                        "F2");
}

double F1_inverse_target(const LiftedSystem& sys, double z1, double y) {
  const auto& b = sys.bounds();
  require_finite(y, "F1 target");
  const double x1 = sys.x1_of(z1);
  const double g = sys.plant.g1(x1);
  if (g == 0.0) throw Error(ErrorKind::SingularG, "g1 vanishes at x1 = " + std::to_string(x1));
  return require_finite((b.x1_bar * y - sys.plant.f1(x1)) / (b.x2_bar * g), "F1 inverse target");
}

double F1_inverse(const LiftedSystem& sys, double z1, double y) {
  const double t = F1_inverse_target(sys, z1, y);
  if (std::abs(t) >= 1.0 - sys.pair2.guard_band) {
    throw Error(ErrorKind::Inadmissible,
                "F1 inverse needs psi2 = " + std::to_string(t) + " outside (-1, 1)");
  }
  const double z2 = sys.bounds().x2_bar * sys.pair2.phi(t);
  check_round_trip(F1(sys, z1, z2), y, "F1 inverse");
  return z2;
}

double F2_inverse(const LiftedSystem& sys, double z1, double z2, double y) {
  const auto& b = sys.bounds();
  require_finite(y, "F2 target");
  const double x1 = sys.x1_of(z1);
  const double x2 = sys.x2_of(z2);
  const double g = sys.plant.g2(x1, x2);
  if (g == 0.0) throw Error(ErrorKind::SingularG, "g2 vanishes at the current state");
  const double u = require_finite((b.x2_bar * y - sys.plant.f2(x1, x2)) / g, "control");
  check_round_trip(F2(sys, z1, z2, u), y, "F2 inverse");
  return u;
}

}  // namespace liftctl
