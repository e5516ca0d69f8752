#include "liftctl/admissibility.hpp"

#include <cmath>
#include <ostream>

#include "liftctl/errors.hpp"
#include "liftctl/text.hpp"

namespace liftctl {

bool in_A1(const LiftedSystem& sys, double z1, double z2) {
  return std::abs(F1(sys, z1, z2)) < 1.0;
}

bool in_A2(const LiftedSystem& sys, double z1, double z2, double u) {
  return std::abs(F2(sys, z1, z2, u)) < 1.0;
}

AdmissibilityReport step_report(const LiftedSystem& sys, const PlantState& s,
                                const ControlDecision& decision) {
  const auto& b = sys.bounds();
  const double z1 = lift(s.x1, b.x1_bar, sys.pair1).z;
  const double z2 = lift(s.x2, b.x2_bar, sys.pair2).z;

  AdmissibilityReport r;
  r.k = s.k;
  r.in_A1 = in_A1(sys, z1, z2);
  r.in_A2 = in_A2(sys, z1, z2, decision.u);
  r.in_safe = in_safe_set(sys.plant, s);
  r.thm2_lhs = std::abs(decision.rho2_k * decision.e2 + decision.next_chi2d);
  r.deadbeat_ok = std::abs(decision.next_chi2d) < 1.0;
  return r;
}

RegionPoint region_point(const LiftedSystem& sys, double rho2, const CommandSignal& cmd,
                         std::uint64_t k, double x1, double x2) {
  RegionPoint p{x1, x2, false, false};
  const auto& b = sys.bounds();
  try {
    const double z1 = lift(x1, b.x1_bar, sys.pair1).z;
    const double z2 = lift(x2, b.x2_bar, sys.pair2).z;
    p.in_A1 = in_A1(sys, z1, z2);
    GainSchedule gains(0.0, Rho2Policy::fixed(rho2));
    const auto decision = control(sys, PlantState{x1, x2, k}, cmd, gains);
    p.in_A2 = in_A2(sys, z1, z2, decision.u);
  } catch (const Error&) {
    // Points outside the liftable interior, or where the law has no
    // admissible control, keep whatever flags were already settled.
  }
  return p;
}

std::vector<RegionPoint> sample_regions(const LiftedSystem& sys, double rho2,
                                        const CommandSignal& cmd, std::uint64_t k,
                                        int resolution) {
  if (resolution < 2) throw Error(ErrorKind::ConfigError, "grid resolution must be at least 2");
  const auto& b = sys.bounds();
  const auto axis = [resolution](double bar, int i) {
    return bar * (-1.0 + 2.0 * static_cast<double>(i) / (resolution - 1));
  };

  std::vector<RegionPoint> points;
  points.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      points.push_back(region_point(sys, rho2, cmd, k, axis(b.x1_bar, i), axis(b.x2_bar, j)));
    }
  }
  return points;
}

void write_regions_csv(std::ostream& out, const std::vector<RegionPoint>& points) {
  out << "x1,x2,in_A1,in_A2\n";
  for (const auto& p : points) {
    out << format_double(p.x1) << ',' << format_double(p.x2) << ',' << (p.in_A1 ? 1 : 0) << ','
        << (p.in_A2 ? 1 : 0) << '\n';
  }
}

}  // namespace liftctl
