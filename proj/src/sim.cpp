#include "liftctl/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "liftctl/admissibility.hpp"
#include "liftctl/rng.hpp"
#include "liftctl/text.hpp"

namespace liftctl {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMaxRejections = 1'000'000;

// State-only columns.  Anything that cannot be computed at this state is NaN.
TrajectoryRow observe(const LiftedSystem& sys, const RunConfig& cfg, const PlantState& s) {
  const auto& b = sys.bounds();
  TrajectoryRow row;
  row.k = s.k;
  row.x1 = s.x1;
  row.x2 = s.x2;
  row.x1d = cfg.command.at(s.k);
  row.in_safe = in_safe_set(sys.plant, s);
  row.u = row.rho2 = row.dV = row.F2 = row.thm2_lhs = kNaN;
  row.z1 = row.z2 = row.zeta1 = row.zeta2 = row.e1 = row.e2 = row.F1 = kNaN;
  row.V1 = row.V2 = kNaN;

  try {
    const auto l1 = lift(s.x1, b.x1_bar, sys.pair1);
    row.z1 = l1.z;
    row.zeta1 = l1.zeta;
    row.e1 = error_e1(sys, l1.z, cfg.command, s.k);
    row.V1 = 0.5 * row.e1 * row.e1;

    const auto l2 = lift(s.x2, b.x2_bar, sys.pair2);
    row.z2 = l2.z;
    row.zeta2 = l2.zeta;
    row.F1 = F1(sys, l1.z, l2.z);
    row.in_A1 = std::abs(row.F1) < 1.0;

    const auto window = CommandWindow::at(cfg.command, s.k, cfg.freeze_command);
    const double chi2d = virtual_target_chi2(sys, l1.z, row.e1, window.next, cfg.rho1);
    row.e2 = sys.pair2.psi(l2.zeta) - chi2d;
    row.V2 = 0.5 * row.e2 * row.e2;
  } catch (const Error&) {
    // Partial row; the caller records why the run stopped.
  }
  return row;
}

}  // namespace

void RunConfig::validate() const {
  bounds.validate();
  if (horizon < 1) throw Error(ErrorKind::ConfigError, "horizon must be at least 1");
  if (!std::isfinite(x10) || !std::isfinite(x20) || !(std::abs(x10) < bounds.x1_bar) ||
      !(std::abs(x20) < bounds.x2_bar)) {
    throw Error(ErrorKind::ConfigError, "initial state (" + format_double(x10) + ", " +
                                            format_double(x20) + ") is outside the safe set");
  }
  command.validate(bounds.x1_bar);
  (void)gains();
  (void)system();
}

LiftedSystem RunConfig::system() const {
  return LiftedSystem{make_plant(plant, bounds), find_pair(sigmoid1, guard_band),
                      find_pair(sigmoid2, guard_band)};
}

GainSchedule RunConfig::gains() const { return GainSchedule(rho1, rho2, allow_unproven_rho1); }

TrajectoryRecord run(const RunConfig& cfg) {
  cfg.validate();
  const LiftedSystem sys = cfg.system();
  GainSchedule gains = cfg.gains();

  TrajectoryRecord record;
  record.config = cfg;
  record.rows.reserve(cfg.horizon + 1);

  PlantState s{cfg.x10, cfg.x20, 0};
  for (std::uint64_t k = 0; k < cfg.horizon; ++k) {
    TrajectoryRow row = observe(sys, cfg, s);
    try {
      const auto d = control(sys, s, cfg.command, gains, cfg.freeze_command);
      const auto report = step_report(sys, s, d);
      const PlantState next = step(sys.plant, s, d.u);

      row.u = d.u;
      row.e1 = d.e1;
      row.e2 = d.e2;
      row.V1 = 0.5 * d.e1 * d.e1;
      row.V2 = 0.5 * d.e2 * d.e2;
      row.rho2 = d.rho2_k;
      row.F1 = d.predicted_F1;
      row.F2 = F2(sys, row.z1, row.z2, d.u);
      row.in_A1 = report.in_A1;
      row.in_A2 = report.in_A2;
      row.thm2_lhs = report.thm2_lhs;
      row.deadbeat_ok = report.deadbeat_ok;
      row.ks_engaged = gains.switch_step().has_value() && *gains.switch_step() <= k;
      row.has_decision = true;
      record.rows.push_back(row);
      s = next;
    } catch (const Error& e) {
      record.failure = RunFailure{k, e.kind(), e.what()};
      record.rows.push_back(row);
      break;
    }
  }
  if (record.ok()) record.rows.push_back(observe(sys, cfg, s));

  for (std::size_t i = 0; i + 1 < record.rows.size(); ++i) {
    auto& r = record.rows[i];
    if (!r.has_decision) continue;
    const auto& n = record.rows[i + 1];
    r.dV = (n.V1 + n.V2) - (r.V1 + r.V2);
  }
  record.switch_step = gains.switch_step();
  record.latch_overrides = gains.latch_overrides();
  return record;
}

void write_trajectory_csv(std::ostream& out, const TrajectoryRecord& record) {
  out << "k,x1,x2,u,z1,z2,x1d,e1,e2,rho2,V1,V2,dV,F1,F2,in_A1,in_A2,in_safe,thm2_lhs,"
         "deadbeat_ok\n";
  const auto f = [](double v) { return format_double(v); };
  const auto b = [](bool v) { return v ? '1' : '0'; };
  for (const auto& r : record.rows) {
    out << r.k << ',' << f(r.x1) << ',' << f(r.x2) << ',' << f(r.u) << ',' << f(r.z1) << ','
        << f(r.z2) << ',' << f(r.x1d) << ',' << f(r.e1) << ',' << f(r.e2) << ',' << f(r.rho2)
        << ',' << f(r.V1) << ',' << f(r.V2) << ',' << f(r.dV) << ',' << f(r.F1) << ','
        << f(r.F2) << ',' << b(r.in_A1) << ',' << b(r.in_A2) << ',' << b(r.in_safe) << ','
        << f(r.thm2_lhs) << ',' << b(r.deadbeat_ok) << '\n';
  }
}

bool ic_feasible(const StateBounds& bounds, const CommandSignal& cmd, double x10, double x20,
                 IcSampling sampling) {
  if (!(std::abs(x10) < bounds.x1_bar) || !(std::abs(x20) < bounds.x2_bar)) return false;
  const double next_x1 = x10 + x20;
  if (!(std::abs(next_x1) < bounds.x1_bar)) return false;
  if (sampling == IcSampling::PositionOnly) return true;
  return std::abs(next_x1 - cmd.at(0)) < bounds.x2_bar;
}

std::vector<std::pair<double, double>> sample_initial_conditions(const StateBounds& bounds,
                                                                 const CommandSignal& cmd,
                                                                 std::size_t n, std::uint64_t seed,
                                                                 IcSampling sampling) {
  bounds.validate();
  if (n < 1) throw Error(ErrorKind::ConfigError, "need at least one initial condition");

  SplitMix64 rng(seed);
  std::vector<std::pair<double, double>> out;
  out.reserve(n);
  while (out.size() < n) {
    std::size_t rejections = 0;
    for (;;) {
      const double x1 = rng.symmetric(bounds.x1_bar);
      const double x2 = rng.symmetric(bounds.x2_bar);
      if (ic_feasible(bounds, cmd, x1, x2, sampling)) {
        out.emplace_back(x1, x2);
        break;
      }
      if (++rejections >= kMaxRejections) {
        throw Error(ErrorKind::Exhausted, "no feasible initial condition after " +
                                              std::to_string(kMaxRejections) + " draws");
      }
    }
  }
  return out;
}

TrialSummary summarize(const TrajectoryRecord& record) {
  const auto& b = record.config.bounds;
  TrialSummary t;
  t.seed = record.config.seed;
  t.x10 = record.config.x10;
  t.x20 = record.config.x20;
  t.command = record.config.command.kind() == CommandSignal::Kind::Constant
                  ? record.config.command.value()
                  : record.config.command.amplitude();
  t.success = record.ok();
  if (record.failure) t.failure = std::string(to_string(record.failure->kind));
  t.k_s = record.switch_step;
  t.latch_overrides = record.latch_overrides;

  for (const auto& r : record.rows) {
    t.max_x1_ratio = std::max(t.max_x1_ratio, std::abs(r.x1) / b.x1_bar);
    t.max_x2_ratio = std::max(t.max_x2_ratio, std::abs(r.x2) / b.x2_bar);
    if (!(std::abs(r.x1) < b.x1_bar) || !(std::abs(r.x2) < b.x2_bar)) ++t.invariance_violations;
    if (!r.has_decision) continue;
    ++t.steps;
    t.max_abs_F1 = std::max(t.max_abs_F1, std::abs(r.F1));
    t.max_abs_F2 = std::max(t.max_abs_F2, std::abs(r.F2));
    t.max_rho2 = std::max(t.max_rho2, r.rho2);
    if (!(std::abs(r.F1) < 1.0)) ++t.invariance_violations;
    if (!(std::abs(r.F2) < 1.0)) ++t.invariance_violations;
  }
  t.terminal_abs_e1 = record.rows.empty() ? kNaN : std::abs(record.rows.back().e1);
  return t;
}

std::size_t MonteCarloSummary::successes() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.success; }));
}

std::size_t MonteCarloSummary::total_violations() const {
  std::size_t n = 0;
  for (const auto& t : trials) n += t.invariance_violations;
  return n;
}

MonteCarloSummary monte_carlo(const MonteCarloConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::ConfigError, "need at least one trial");
  const auto& b = cfg.base.bounds;
  b.validate();

  MonteCarloSummary summary;
  summary.trials.resize(cfg.trials);
  for (std::size_t i = 0; i < cfg.trials; ++i) {
    const std::uint64_t trial_seed = SplitMix64::at(cfg.seed, i);
    SplitMix64 rng(trial_seed);

    RunConfig rc = cfg.base;
    rc.seed = trial_seed;
    if (cfg.randomize_command) {
      const double draw = rng.symmetric(b.x1_bar);
      rc.command = rc.command.kind() == CommandSignal::Kind::Constant
                       ? CommandSignal::constant(draw)
                       : CommandSignal::sinusoid(draw, rc.command.omega());
    }
    if (cfg.sample_initial_state) {
      const auto ic = sample_initial_conditions(b, rc.command, 1, rng.next(), cfg.sampling);
      rc.x10 = ic.front().first;
      rc.x20 = ic.front().second;
    }

    TrialSummary t = summarize(run(rc));
    t.trial = i;
    summary.trials[i] = std::move(t);
  }
  return summary;
}

void write_monte_carlo_csv(std::ostream& out, const MonteCarloSummary& summary) {
  out << "trial,seed,x10,x20,command,success,failure,steps,max_abs_F1,max_abs_F2,max_x1_ratio,"
         "max_x2_ratio,k_s,max_rho2,terminal_abs_e1,violations,latch_overrides\n";
  const auto f = [](double v) { return format_double(v); };
  for (const auto& t : summary.trials) {
    out << t.trial << ',' << t.seed << ',' << f(t.x10) << ',' << f(t.x20) << ',' << f(t.command)
        << ',' << (t.success ? 1 : 0) << ',' << t.failure << ',' << t.steps << ','
        << f(t.max_abs_F1) << ',' << f(t.max_abs_F2) << ',' << f(t.max_x1_ratio) << ','
        << f(t.max_x2_ratio) << ',';
    if (t.k_s) out << *t.k_s;
    out << ',' << f(t.max_rho2) << ',' << f(t.terminal_abs_e1) << ',' << t.invariance_violations
        << ',' << t.latch_overrides << '\n';
  }
}

}  // namespace liftctl
