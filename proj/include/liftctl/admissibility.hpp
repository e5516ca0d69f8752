#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "liftctl/controller.hpp"
#include "liftctl/lifted_dynamics.hpp"

namespace liftctl {

/// (z1, z2) in A1  <=>  |F1(z1, z2)| < 1: phi1 stays defined at k+1.
bool in_A1(const LiftedSystem& sys, double z1, double z2);

/// (z1, z2, u) in A2  <=>  |F2(z1, z2, u)| < 1: phi2 stays defined at k+1.
bool in_A2(const LiftedSystem& sys, double z1, double z2, double u);

/// Per-step hypotheses of the invariance results.
struct AdmissibilityReport {
  std::uint64_t k = 0;
  bool in_A1 = false;
  bool in_A2 = false;
  bool in_safe = false;
  double thm2_lhs = 0.0;     // |rho2 e2 + psi2(zeta2d(k+1))|
  bool deadbeat_ok = false;  // |psi2(zeta2d(k+1))| < 1
};

/// Builds the report for a decision produced at state s.
AdmissibilityReport step_report(const LiftedSystem& sys, const PlantState& s,
                                const ControlDecision& decision);

struct RegionPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  bool in_A1 = false;
  bool in_A2 = false;
};

/// Membership of one original-coordinate point.  in_A2 uses the control the
/// law would apply there with rho2 frozen; points that cannot be lifted, or
/// where the law reports Inadmissible, are flagged false.
RegionPoint region_point(const LiftedSystem& sys, double rho2, const CommandSignal& cmd,
                         std::uint64_t k, double x1, double x2);

/// Uniform resolution x resolution grid over [-x1_bar, x1_bar] x [-x2_bar, x2_bar],
/// x2 outer and x1 inner, both ascending.  Throws ConfigError for resolution < 2.
std::vector<RegionPoint> sample_regions(const LiftedSystem& sys, double rho2,
                                        const CommandSignal& cmd, std::uint64_t k,
                                        int resolution);

/// Header `x1,x2,in_A1,in_A2`.
void write_regions_csv(std::ostream& out, const std::vector<RegionPoint>& points);

}  // namespace liftctl
