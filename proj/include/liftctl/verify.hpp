#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "liftctl/lifted_dynamics.hpp"
#include "liftctl/sim.hpp"

namespace liftctl::verify {

/// One row of the machine-readable report: check,step,expected,actual,tol,pass.
/// step is -1 for checks that are not tied to a time step.
struct CheckLine {
  std::string check;
  std::int64_t step = -1;
  double expected = 0.0;
  double actual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::string name;
  std::vector<CheckLine> lines;

  bool passed() const;
  std::size_t failures() const;
  std::optional<CheckLine> first_failure(std::string_view check = {}) const;
  void add(std::string check, std::int64_t step, double expected, double actual, double tol,
           bool pass);
};

/// |actual - expected| <= max(rel * max(|actual|, |expected|), abs).
bool close(double actual, double expected, double rel, double abs);

// --- vanishing contraction ----------------------------------------------------

/// V[k+1] = rho(k)^2 V[k] for k < horizon.
struct VanishingContractionProbe {
  std::function<double(std::uint64_t)> rho;
  double V0 = 1.0;
  std::uint64_t horizon = 0;
};

struct ContractionResult {
  bool monotone = false;
  double V_final = 0.0;
  std::vector<double> values;  // V[0..horizon]
  CheckReport report;
};

/// Iterates the recursion and checks 0 <= V[k+1] <= V[k] at every step and
/// V[horizon] < threshold.  Invalid gains (|rho| >= 1) are reported, not thrown.
ContractionResult check_vanishing_contraction(const VanishingContractionProbe& probe,
                                              double threshold = 1e-12);

// --- trajectory checks ----------------------------------------------------------
//
// Every check below re-derives errors from the raw x and u columns in original
// coordinates; logged e / V / F columns are not trusted.

inline constexpr double kIdentityRelTol = 1e-9;
inline constexpr double kIdentityAbsTol = 1e-12;
inline constexpr double kRecursionTol = 1e-10;

/// Per step: dV1 = (rho1^2 - 1) V1, dV2 = (rho2^2 - 1) V2 (1e-9 relative,
/// 1e-12 absolute), e2[k+1] = rho2 e2[k] and e1[k+1] = rho1 e1 + (x2_bar/x1_bar) g1 e2
/// (1e-10), and x[k+1] = step(x[k], u[k]) exactly.  Throws ConfigError for
/// frozen-command runs, whose targets do not follow the true command.
CheckReport check_contraction_identities(const TrajectoryRecord& traj, const LiftedSystem& sys);

/// |F1| < 1 at every executed step (and at the step a run failed on),
/// |F2| < 1 at every executed step, every logged state inside the safe box,
/// and: thm2_lhs < 1 at k implies the state at k+1 could be lifted.
CheckReport check_forward_invariance(const TrajectoryRecord& traj, const LiftedSystem& sys);

struct DeadbeatResult {
  std::uint64_t k_s = 0;
  bool e2_zero_after = false;     // |e2[k]| <= 1e-12 for k > k_s
  bool e1_zero_within_n = false;  // |e1[k]| <= 1e-10 for k >= k_s + 2
  CheckReport report;
};

inline constexpr double kDeadbeatE2Tol = 1e-12;
inline constexpr double kDeadbeatE1Tol = 1e-10;

/// Locates the switch step from the rho2 column.  Throws NoSwitch when rho2
/// is not identically 0 on a nonempty tail of the run, ConfigError for
/// non-constant commands.
DeadbeatResult check_deadbeat(const TrajectoryRecord& traj, const LiftedSystem& sys);

// --- built-in suites --------------------------------------------------------------

struct SuiteResult {
  std::vector<CheckReport> reports;
  bool passed() const;
};

/// Suites: lifting, proposition, identities, invariance, deadbeat, all.
std::vector<std::string> suite_names();
SuiteResult run_suite(std::string_view suite);

void write_check_csv(std::ostream& out, const SuiteResult& result);
/// One PASS/FAIL line per report, naming the first failing line.
void write_check_text(std::ostream& out, const SuiteResult& result);

}  // namespace liftctl::verify
