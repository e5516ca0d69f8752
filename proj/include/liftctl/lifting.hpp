#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace liftctl {

/// A strictly increasing odd sigmoid `psi : R -> (-1, 1)` together with its
/// inverse `phi : (-1, 1) -> R`.  `phi` lifts a normalized state onto the real
/// line; `psi` maps it back.
///
/// `guard_band` sets how close to +/-1 a normalized state may get before
/// lifting is refused; `phi` and its derivatives blow up at the boundary.
struct SigmoidPair {
  using Map = double (*)(double);

  std::string name;
  Map psi = nullptr;
  Map phi = nullptr;
  double guard_band = 1e-9;

  SigmoidPair with_guard_band(double eps) const;
};

inline constexpr double kDefaultGuardBand = 1e-9;

/// The six catalogued pairs, in the order
/// tan, atanh, rational, algebraic, erf, gudermannian.
const std::vector<SigmoidPair>& catalog();

/// Looks a pair up by catalog name; throws ConfigError for unknown names.
SigmoidPair find_pair(std::string_view name, double guard_band = kDefaultGuardBand);

std::vector<std::string> pair_names();

/// Position and velocity bounds; the safe set is |x1| < x1_bar, |x2| < x2_bar.
struct StateBounds {
  double x1_bar = 1.0;
  double x2_bar = 1.0;

  /// Throws ConfigError unless both bounds are positive and finite.
  void validate() const;
};

/// One scalar state seen in all four coordinate systems:
/// chi = x / x_bar, z = x_bar * phi(chi), zeta = z / x_bar, x = x_bar * psi(zeta).
struct LiftedPoint {
  double x = 0.0;
  double chi = 0.0;
  double z = 0.0;
  double zeta = 0.0;
};

/// Lifts an original-coordinate value.  Throws DomainViolation when
/// |x / x_bar| >= 1 - guard_band and ConfigError for a nonpositive x_bar.
LiftedPoint lift(double x, double x_bar, const SigmoidPair& pair);

/// Maps a lifted value back.  Throws NonFinite when z is not finite.  The
/// result always satisfies |x| < x_bar, even when psi saturates in floating
/// point.
LiftedPoint unlift(double z, double x_bar, const SigmoidPair& pair);

/// Inverse error function, accurate to a few ulps on (-1, 1).
double erf_inv(double x);

}  // namespace liftctl
