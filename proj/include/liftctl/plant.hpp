#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "liftctl/lifting.hpp"

namespace liftctl {

/// Discrete-time strict-feedback plant
///
///   x1[k+1] = f1(x1) + g1(x1) x2
///   x2[k+1] = f2(x1, x2) + g2(x1, x2) u
///
/// with the safe set |x1| < x1_bar, |x2| < x2_bar.
struct StrictFeedbackPlant {
  using Map1 = std::function<double(double)>;
  using Map2 = std::function<double(double, double)>;

  std::string name;
  Map1 f1;
  Map1 g1;
  Map2 f2;
  Map2 g2;
  StateBounds bounds;

  /// Checks the bounds and samples g1, g2 on a 101x101 grid over the closed
  /// safe box; throws ConfigError if either gain vanishes there.
  void validate() const;
};

struct PlantState {
  double x1 = 0.0;
  double x2 = 0.0;
  std::uint64_t k = 0;
};

/// One open-loop step.  No constraint enforcement; throws NonFinite when the
/// inputs or the result are not finite.
PlantState step(const StrictFeedbackPlant& plant, const PlantState& s, double u);

/// x1[k+1] = x1 + x2, x2[k+1] = x2 + u.
StrictFeedbackPlant double_integrator(double x1_bar, double x2_bar);

/// Strict membership in the safe box.
bool in_safe_set(const StrictFeedbackPlant& plant, const PlantState& s);

/// Registered plants by name.  Only "double-integrator" exists.
StrictFeedbackPlant make_plant(std::string_view name, const StateBounds& bounds);

}  // namespace liftctl
