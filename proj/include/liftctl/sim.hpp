#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "liftctl/controller.hpp"
#include "liftctl/errors.hpp"
#include "liftctl/lifted_dynamics.hpp"

namespace liftctl {

struct RunConfig {
  std::string plant = "double-integrator";
  StateBounds bounds{2.0, 1.0};
  std::string sigmoid1 = "atanh";
  std::string sigmoid2 = "atanh";
  double guard_band = kDefaultGuardBand;
  double rho1 = 0.0;
  Rho2Policy rho2 = Rho2Policy::switching();
  bool allow_unproven_rho1 = false;
  CommandSignal command = CommandSignal::constant(0.0);
  double x10 = 0.0;
  double x20 = 0.0;
  std::uint64_t horizon = 50;
  std::uint64_t seed = 0;
  bool freeze_command = false;

  /// Throws ConfigError for any invalid field, including an initial state
  /// outside the open safe box.
  void validate() const;
  LiftedSystem system() const;
  GainSchedule gains() const;
};

/// One logged step.  Rows with has_decision == false carry the state only
/// (the terminal row, or the row at which a run failed); their decision
/// columns are NaN / false.
struct TrajectoryRow {
  std::uint64_t k = 0;
  double x1 = 0.0;
  double x2 = 0.0;
  double u = 0.0;
  double z1 = 0.0;
  double z2 = 0.0;
  double zeta1 = 0.0;
  double zeta2 = 0.0;
  double x1d = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  double rho2 = 0.0;
  double V1 = 0.0;
  double V2 = 0.0;
  double dV = 0.0;  // (V1 + V2)[k+1] - (V1 + V2)[k]
  double F1 = 0.0;
  double F2 = 0.0;
  bool in_A1 = false;
  bool in_A2 = false;
  bool in_safe = false;
  double thm2_lhs = 0.0;
  bool deadbeat_ok = false;
  bool ks_engaged = false;
  bool has_decision = false;
};

struct RunFailure {
  std::uint64_t k = 0;
  ErrorKind kind = ErrorKind::NonFinite;
  std::string message;
};

struct TrajectoryRecord {
  RunConfig config;
  std::vector<TrajectoryRow> rows;
  std::optional<RunFailure> failure;
  std::optional<std::uint64_t> switch_step;
  std::size_t latch_overrides = 0;

  bool ok() const { return !failure.has_value(); }
};

/// Closed loop lift -> control -> step -> unlift for cfg.horizon steps.
/// Step failures end the run and are stored in the record; only an invalid
/// configuration throws (ConfigError).
TrajectoryRecord run(const RunConfig& cfg);

/// Header `k,x1,x2,u,z1,z2,x1d,e1,e2,rho2,V1,V2,dV,F1,F2,in_A1,in_A2,in_safe,thm2_lhs,deadbeat_ok`.
void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record);

enum class IcSampling {
  /// |x1 + x2| < x1_bar and |x1 + x2 - x1d(0)| < x2_bar: both first-step
  /// targets admissible, so the deadbeat gain is usable from k = 0.
  Admissible,
  /// Only |x1 + x2| < x1_bar; the velocity target may start out of range and
  /// the switching transient is exercised.
  PositionOnly,
};

/// Acceptance test used by the sampler; requires the open safe box too.
bool ic_feasible(const StateBounds& bounds, const CommandSignal& cmd, double x10, double x20,
                 IcSampling sampling = IcSampling::Admissible);

/// Rejection-samples n initial states uniform in the open safe box.
/// Throws Exhausted after 10^6 consecutive rejections.
std::vector<std::pair<double, double>> sample_initial_conditions(
    const StateBounds& bounds, const CommandSignal& cmd, std::size_t n, std::uint64_t seed,
    IcSampling sampling = IcSampling::Admissible);

struct MonteCarloConfig {
  RunConfig base;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  IcSampling sampling = IcSampling::Admissible;
  /// Draws a constant value, or sinusoid amplitude, uniform in (-x1_bar, x1_bar)
  /// per trial; otherwise base.command is used as is.
  bool randomize_command = true;
  /// When false every trial starts at (base.x10, base.x20).
  bool sample_initial_state = true;
};

struct TrialSummary {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double x10 = 0.0;
  double x20 = 0.0;
  double command = 0.0;  // constant value or sinusoid amplitude
  bool success = false;
  std::string failure;
  std::uint64_t steps = 0;
  double max_abs_F1 = 0.0;
  double max_abs_F2 = 0.0;
  double max_x1_ratio = 0.0;
  double max_x2_ratio = 0.0;
  std::optional<std::uint64_t> k_s;
  double max_rho2 = 0.0;
  double terminal_abs_e1 = 0.0;
  std::size_t invariance_violations = 0;
  std::size_t latch_overrides = 0;
};

struct MonteCarloSummary {
  std::vector<TrialSummary> trials;

  std::size_t successes() const;
  std::size_t total_violations() const;
};

/// Trial i uses seed SplitMix64::at(cfg.seed, i); results are stored by
/// trial index.
MonteCarloSummary monte_carlo(const MonteCarloConfig& cfg);

/// Summary of one finished trajectory (shared by monte_carlo and tests).
TrialSummary summarize(const TrajectoryRecord& record);

void write_monte_carlo_csv(std::ostream& out, const MonteCarloSummary& summary);

}  // namespace liftctl
