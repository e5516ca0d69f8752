#include "liftctl/plant.hpp"

#include <cmath>

#include "liftctl/errors.hpp"

namespace liftctl {

void StrictFeedbackPlant::validate() const {
  bounds.validate();
  if (!f1 || !g1 || !f2 || !g2) {
    throw Error(ErrorKind::ConfigError, "plant '" + name + "' is missing a map");
  }
  constexpr int n = 101;
  for (int i = 0; i < n; ++i) {
    const double x1 = bounds.x1_bar * (-1.0 + 2.0 * i / (n - 1));
    if (g1(x1) == 0.0) {
      throw Error(ErrorKind::ConfigError, "g1 vanishes at x1 = " + std::to_string(x1));
    }
    for (int j = 0; j < n; ++j) {
      const double x2 = bounds.x2_bar * (-1.0 + 2.0 * j / (n - 1));
      if (g2(x1, x2) == 0.0) {
        throw Error(ErrorKind::ConfigError, "g2 vanishes at (" + std::to_string(x1) + ", " +
                                                std::to_string(x2) + ")");
      }
    }
  }
}

PlantState step(const StrictFeedbackPlant& plant, const PlantState& s, double u) {
  if (!std::isfinite(s.x1) || !std::isfinite(s.x2) || !std::isfinite(u)) {
    throw Error(ErrorKind::NonFinite, "plant step received a non-finite input");
  }
  PlantState next{plant.f1(s.x1) + plant.g1(s.x1) * s.x2,
                  plant.f2(s.x1, s.x2) + plant.g2(s.x1, s.x2) * u, s.k + 1};
  if (!std::isfinite(next.x1) || !std::isfinite(next.x2)) {
    throw Error(ErrorKind::NonFinite, "plant step overflowed");
  }
  return next;
}

StrictFeedbackPlant double_integrator(double x1_bar, double x2_bar) {
  StrictFeedbackPlant plant{
      "double-integrator",
      [](double x1) { return x1; },
      [](double) { return 1.0; },
      [](double, double x2) { return x2; },
      [](double, double) { return 1.0; },
      StateBounds{x1_bar, x2_bar},
  };
  plant.validate();
  return plant;
}

bool in_safe_set(const StrictFeedbackPlant& plant, const PlantState& s) {
  return std::abs(s.x1) < plant.bounds.x1_bar && std::abs(s.x2) < plant.bounds.x2_bar;
}

StrictFeedbackPlant make_plant(std::string_view name, const StateBounds& bounds) {
  if (name == "double-integrator") return double_integrator(bounds.x1_bar, bounds.x2_bar);
  throw Error(ErrorKind::ConfigError, "unknown plant '" + std::string(name) + "'");
}

}  // namespace liftctl
