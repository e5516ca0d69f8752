#pragma once

#include "liftctl/lifting.hpp"
#include "liftctl/plant.hpp"

namespace liftctl {

/// A plant together with the sigmoid pairs used to lift each state.
struct LiftedSystem {
  StrictFeedbackPlant plant;
  SigmoidPair pair1;
  SigmoidPair pair2;

  const StateBounds& bounds() const { return plant.bounds; }

  /// x1 = x1_bar * psi1(z1 / x1_bar), and likewise for x2.
  double x1_of(double z1) const;
  double x2_of(double z2) const;
};

/// Normalized one-step image of x1 written in lifted coordinates:
///   F1 = f1(x1) / x1_bar + (x2_bar / x1_bar) g1(x1) psi2(zeta2).
/// z1[k+1] = x1_bar * phi1(F1), so |F1| < 1 is what keeps phi1 defined.
double F1(const LiftedSystem& sys, double z1, double z2);

/// Normalized one-step image of x2: F2 = (f2(x1, x2) + g2(x1, x2) u) / x2_bar.
double F2(const LiftedSystem& sys, double z1, double z2, double u);

/// The value psi2(zeta2) that solves F1(z1, .) = y, i.e.
///   t = (x1_bar y - f1(x1)) / (x2_bar g1(x1)).
/// No range restriction is applied to t; throws SingularG when g1 = 0.
double F1_inverse_target(const LiftedSystem& sys, double z1, double y);

/// Closed-form z2 with F1(z1, z2) = y.  Throws Inadmissible when the target
/// |t| >= 1 - guard_band (the move needs |x2| >= x2_bar) and SingularG when
/// g1 vanishes.  The forward map is re-evaluated and must reproduce y to 1e-10.
double F1_inverse(const LiftedSystem& sys, double z1, double y);

/// Closed-form u with F2(z1, z2, u) = y; throws SingularG when g2 vanishes.
/// The forward map is re-evaluated and must reproduce y to 1e-10.
double F2_inverse(const LiftedSystem& sys, double z1, double z2, double y);

}  // namespace liftctl
