#include "liftctl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "liftctl/errors.hpp"
#include "liftctl/rng.hpp"
#include "liftctl/text.hpp"

namespace liftctl::verify {
namespace {

struct RawErrors {
  double e1 = 0.0;
  double e2 = 0.0;
};

// Errors in original coordinates:
//   e1 = (x1 - x1d(k)) / x1_bar
//   x2d solves f1(x1) + g1(x1) x2d = x1_bar (rho1 e1) + x1d(k+1)
//   e2 = (x2 - x2d) / x2_bar
RawErrors raw_errors(const LiftedSystem& sys, const RunConfig& cfg, double x1, double x2,
                     std::uint64_t k) {
  const auto& b = sys.bounds();
  RawErrors e;
  e.e1 = (x1 - cfg.command.at(k)) / b.x1_bar;
  const double x2d =
      (b.x1_bar * cfg.rho1 * e.e1 + cfg.command.at(k + 1) - sys.plant.f1(x1)) / sys.plant.g1(x1);
  e.e2 = (x2 - x2d) / b.x2_bar;
  return e;
}

CheckReport lifting_suite() {
  CheckReport report{"lifting_round_trip", {}};
  constexpr int samples = 10'000;
  constexpr double eps = 1e-6;
  for (const auto& pair : catalog()) {
    SplitMix64 rng(0x5eed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double chi = (1.0 - eps) * (2.0 * rng.uniform() - 1.0);
      worst = std::max(worst, std::abs(pair.psi(pair.phi(chi)) - chi));
    }
    report.add("round_trip_" + pair.name, -1, 0.0, worst, 1e-12, worst < 1e-12);
  }
  return report;
}

CheckReport proposition_suite() {
  CheckReport report{"vanishing_contraction", {}};
  const auto merge = [&report](const ContractionResult& r, const std::string& tag) {
    for (auto line : r.report.lines) {
      line.check = tag + "_" + line.check;
      report.lines.push_back(line);
    }
  };
  merge(check_vanishing_contraction(
            {[](std::uint64_t k) { return 0.9 * std::pow(0.99, static_cast<double>(k)); }, 1.0,
             500}),
        "decaying");
  merge(check_vanishing_contraction({[](std::uint64_t) { return 0.0; }, 7.0, 10}), "one_step");
  merge(check_vanishing_contraction({[](std::uint64_t) { return 0.5; }, 0.0, 10}), "zero_start");
  return report;
}

RunConfig scenario(StateBounds bounds, double x10, double x20, CommandSignal cmd,
                   std::uint64_t horizon) {
  RunConfig cfg;
  cfg.bounds = bounds;
  cfg.x10 = x10;
  cfg.x20 = x20;
  cfg.command = cmd;
  cfg.horizon = horizon;
  cfg.rho2 = Rho2Policy::switching();
  cfg.seed = 7;
  return cfg;
}

// Built-in runs: the reference run (bounds 2,1; start (0.5, 0.3); command 0.1)
// and a velocity-dominated start that needs the switching transient.
std::vector<RunConfig> identity_scenarios() {
  return {scenario({2.0, 1.0}, 0.5, 0.3, CommandSignal::constant(0.1), 100),
          scenario({2.0, 1.0}, -1.5, -0.4, CommandSignal::constant(0.1), 100)};
}

SuiteResult identities_suite() {
  SuiteResult out;
  for (const auto& cfg : identity_scenarios()) {
    const auto traj = run(cfg);
    auto report = check_contraction_identities(traj, cfg.system());
    report.name += "(x0=" + format_double(cfg.x10) + "," + format_double(cfg.x20) + ")";
    out.reports.push_back(std::move(report));
  }
  return out;
}

SuiteResult invariance_suite() {
  SuiteResult out;
  for (const StateBounds bounds : {StateBounds{2.0, 1.0}, StateBounds{1.0, 2.0}}) {
    for (const auto sampling : {IcSampling::Admissible, IcSampling::PositionOnly}) {
      CheckReport report;
      report.name = "forward_invariance(bounds=" + format_double(bounds.x1_bar) + "," +
                    format_double(bounds.x2_bar) +
                    (sampling == IcSampling::Admissible ? ",admissible)" : ",position-only)");
      SplitMix64 seeds(100);
      RunConfig base;
      base.bounds = bounds;
      base.horizon = 200;
      for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t seed = seeds.next();
        SplitMix64 rng(seed);
        RunConfig cfg = base;
        cfg.command = CommandSignal::constant(rng.symmetric(bounds.x1_bar));
        const auto ic = sample_initial_conditions(bounds, cfg.command, 1, rng.next(), sampling);
        cfg.x10 = ic.front().first;
        cfg.x20 = ic.front().second;
        cfg.seed = seed;
        const auto traj = run(cfg);
        const auto check = check_forward_invariance(traj, cfg.system());
        report.add("trial_ok", trial, 0.0, static_cast<double>(check.failures()), 0.0,
                   traj.ok() && check.passed());
      }
      out.reports.push_back(std::move(report));
    }
  }
  return out;
}

SuiteResult deadbeat_suite() {
  SuiteResult out;
  const std::vector<RunConfig> runs = {
      scenario({2.0, 1.0}, 0.5, 0.3, CommandSignal::constant(0.1), 20),
      scenario({2.0, 1.0}, -1.5, -0.4, CommandSignal::constant(0.1), 20),
      scenario({2.0, 1.0}, 0.1, 0.0, CommandSignal::constant(0.1), 20),
  };
  for (const auto& cfg : runs) {
    const auto traj = run(cfg);
    CheckReport report;
    try {
      auto r = check_deadbeat(traj, cfg.system());
      report = std::move(r.report);
    } catch (const Error& e) {
      report.add("switch_found", -1, 1.0, 0.0, 0.0, false);
    }
    report.name = "deadbeat(x0=" + format_double(cfg.x10) + "," + format_double(cfg.x20) + ")";
    out.reports.push_back(std::move(report));
  }
  return out;
}

}  // namespace

bool close(double actual, double expected, double rel, double abs) {
  const double scale = std::max(std::abs(actual), std::abs(expected));
  return std::abs(actual - expected) <= std::max(rel * scale, abs);
}

bool CheckReport::passed() const { return failures() == 0; }

std::size_t CheckReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(lines.begin(), lines.end(), [](const auto& l) { return !l.pass; }));
}

std::optional<CheckLine> CheckReport::first_failure(std::string_view check) const {
  for (const auto& l : lines) {
    if (!l.pass && (check.empty() || l.check == check)) return l;
  }
  return std::nullopt;
}

void CheckReport::add(std::string check, std::int64_t step, double expected, double actual,
                      double tol, bool pass) {
  lines.push_back({std::move(check), step, expected, actual, tol, pass});
}

ContractionResult check_vanishing_contraction(const VanishingContractionProbe& probe,
                                              double threshold) {
  ContractionResult out;
  out.report.name = "vanishing_contraction";
  out.values.reserve(probe.horizon + 1);

  double v = probe.V0;
  out.values.push_back(v);
  std::size_t bad_gains = 0;
  std::size_t increases = 0;
  for (std::uint64_t k = 0; k < probe.horizon; ++k) {
    const double rho = probe.rho(k);
    if (!(std::abs(rho) < 1.0)) ++bad_gains;
    const double next = rho * rho * v;
    if (!(next >= 0.0 && next <= v)) {
      ++increases;
      out.report.add("monotone", static_cast<std::int64_t>(k + 1), v, next, 0.0, false);
    }
    v = next;
    out.values.push_back(v);
  }
  out.monotone = increases == 0;
  out.V_final = v;
  out.report.add("gains_in_unit_ball", -1, 0.0, static_cast<double>(bad_gains), 0.0,
                 bad_gains == 0);
  out.report.add("nonincreasing", -1, 0.0, static_cast<double>(increases), 0.0, out.monotone);
  out.report.add("final_below_threshold", static_cast<std::int64_t>(probe.horizon), threshold,
                 v, threshold, v < threshold || (probe.V0 == 0.0 && v == 0.0));
  return out;
}

CheckReport check_contraction_identities(const TrajectoryRecord& traj, const LiftedSystem& sys) {
  const auto& cfg = traj.config;
  if (cfg.freeze_command) {
    throw Error(ErrorKind::ConfigError,
                "contraction identities are defined for exact command lookahead only");
  }
  const auto& b = sys.bounds();
  const double rho1 = cfg.rho1;

  CheckReport report{"contraction_identities", {}};
  for (std::size_t i = 0; i + 1 < traj.rows.size(); ++i) {
    const auto& row = traj.rows[i];
    if (!row.has_decision) continue;
    const auto& next = traj.rows[i + 1];
    const auto step_index = static_cast<std::int64_t>(row.k);

    const PlantState predicted = step(sys.plant, PlantState{row.x1, row.x2, row.k}, row.u);
    report.add("plant_step_x1", step_index, predicted.x1, next.x1, 0.0, predicted.x1 == next.x1);
    report.add("plant_step_x2", step_index, predicted.x2, next.x2, 0.0, predicted.x2 == next.x2);

    const auto now = raw_errors(sys, cfg, row.x1, row.x2, row.k);
    const auto then = raw_errors(sys, cfg, next.x1, next.x2, next.k);
    const double rho2 = row.rho2;

    const double V1 = 0.5 * now.e1 * now.e1;
    const double V2 = 0.5 * now.e2 * now.e2;
    const double dV1 = 0.5 * then.e1 * then.e1 - V1;
    const double dV2 = 0.5 * then.e2 * then.e2 - V2;

    const double dV1_expected = (rho1 * rho1 - 1.0) * V1;
    const double dV2_expected = (rho2 * rho2 - 1.0) * V2;
    report.add("dV1_identity", step_index, dV1_expected, dV1, kIdentityRelTol,
               close(dV1, dV1_expected, kIdentityRelTol, kIdentityAbsTol));
    report.add("dV2_identity", step_index, dV2_expected, dV2, kIdentityRelTol,
               close(dV2, dV2_expected, kIdentityRelTol, kIdentityAbsTol));

    const double e2_expected = rho2 * now.e2;
    report.add("e2_recursion", step_index, e2_expected, then.e2, kRecursionTol,
               std::abs(then.e2 - e2_expected) <= kRecursionTol);

    const double e1_expected =
        rho1 * now.e1 + (b.x2_bar / b.x1_bar) * sys.plant.g1(row.x1) * now.e2;
    report.add("e1_recursion", step_index, e1_expected, then.e1, kRecursionTol,
               std::abs(then.e1 - e1_expected) <= kRecursionTol);
  }
  return report;
}

CheckReport check_forward_invariance(const TrajectoryRecord& traj, const LiftedSystem& sys) {
  const auto& b = sys.bounds();
  const auto& plant = sys.plant;
  CheckReport report{"forward_invariance", {}};

  for (std::size_t i = 0; i < traj.rows.size(); ++i) {
    const auto& row = traj.rows[i];
    const auto step_index = static_cast<std::int64_t>(row.k);
    const bool failed_here = traj.failure && traj.failure->k == row.k;

    const double safe_margin =
        std::max(std::abs(row.x1) / b.x1_bar, std::abs(row.x2) / b.x2_bar);
    report.add("safe_set", step_index, 1.0, safe_margin, 0.0, safe_margin < 1.0);

    if (row.has_decision || failed_here) {
      const double f1 = (plant.f1(row.x1) + plant.g1(row.x1) * row.x2) / b.x1_bar;
      report.add("A1", step_index, 1.0, std::abs(f1), 0.0, std::abs(f1) < 1.0);
    }
    if (!row.has_decision) continue;

    const double f2 = (plant.f2(row.x1, row.x2) + plant.g2(row.x1, row.x2) * row.u) / b.x2_bar;
    report.add("A2", step_index, 1.0, std::abs(f2), 0.0, std::abs(f2) < 1.0);

    if (row.thm2_lhs < 1.0) {
      const bool lifted_next = i + 1 < traj.rows.size() && std::isfinite(traj.rows[i + 1].z2);
      report.add("thm2_implication", step_index, 1.0, lifted_next ? 1.0 : 0.0, 0.0, lifted_next);
    }
  }
  return report;
}

DeadbeatResult check_deadbeat(const TrajectoryRecord& traj, const LiftedSystem& sys) {
  const auto& cfg = traj.config;
  if (cfg.command.kind() != CommandSignal::Kind::Constant) {
    throw Error(ErrorKind::ConfigError, "deadbeat check needs a constant command");
  }

  // k_s: start of the maximal tail of executed steps with rho2 == 0.
  std::optional<std::uint64_t> k_s;
  for (auto it = traj.rows.rbegin(); it != traj.rows.rend(); ++it) {
    if (!it->has_decision) continue;
    if (it->rho2 != 0.0) break;
    k_s = it->k;
  }
  if (!k_s) throw Error(ErrorKind::NoSwitch, "rho2 never settles at 0 within the horizon");

  DeadbeatResult out;
  out.k_s = *k_s;
  out.report.name = "deadbeat";
  out.report.add("switch_step", -1, 0.0, static_cast<double>(*k_s), 0.0, true);

  std::size_t e2_checked = 0;
  std::size_t e1_checked = 0;
  std::size_t e2_bad = 0;
  std::size_t e1_bad = 0;
  for (const auto& row : traj.rows) {
    const auto e = raw_errors(sys, cfg, row.x1, row.x2, row.k);
    const auto step_index = static_cast<std::int64_t>(row.k);
    if (row.k > *k_s) {
      ++e2_checked;
      const bool ok = std::abs(e.e2) <= kDeadbeatE2Tol;
      if (!ok) ++e2_bad;
      out.report.add("e2_zero", step_index, 0.0, e.e2, kDeadbeatE2Tol, ok);
    }
    if (row.k >= *k_s + 2) {
      ++e1_checked;
      const bool ok = std::abs(e.e1) <= kDeadbeatE1Tol;
      if (!ok) ++e1_bad;
      out.report.add("e1_zero", step_index, 0.0, e.e1, kDeadbeatE1Tol, ok);
    }
  }
  out.e2_zero_after = e2_checked > 0 && e2_bad == 0;
  out.e1_zero_within_n = e1_checked > 0 && e1_bad == 0;
  return out;
}

bool SuiteResult::passed() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
}

std::vector<std::string> suite_names() {
  return {"all", "lifting", "proposition", "identities", "invariance", "deadbeat"};
}

SuiteResult run_suite(std::string_view suite) {
  SuiteResult out;
  const auto take = [&out](SuiteResult part) {
    for (auto& r : part.reports) out.reports.push_back(std::move(r));
  };
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "lifting") {
    out.reports.push_back(lifting_suite());
    known = true;
  }
  if (all || suite == "proposition") {
    out.reports.push_back(proposition_suite());
    known = true;
  }
  if (all || suite == "identities") {
    take(identities_suite());
    known = true;
  }
  if (all || suite == "invariance") {
    take(invariance_suite());
    known = true;
  }
  if (all || suite == "deadbeat") {
    take(deadbeat_suite());
    known = true;
  }
  if (!known) throw Error(ErrorKind::ConfigError, "unknown suite '" + std::string(suite) + "'");
  return out;
}

void write_check_csv(std::ostream& out, const SuiteResult& result) {
  out << "check,step,expected,actual,tol,pass\n";
  for (const auto& report : result.reports) {
    for (const auto& l : report.lines) {
      out << report.name << '/' << l.check << ',' << l.step << ',' << format_double(l.expected)
          << ',' << format_double(l.actual) << ',' << format_double(l.tol) << ','
          << (l.pass ? 1 : 0) << '\n';
    }
  }
}

void write_check_text(std::ostream& out, const SuiteResult& result) {
  for (const auto& report : result.reports) {
    if (report.passed()) {
      out << "PASS " << report.name << " (" << report.lines.size() << " checks)\n";
      continue;
    }
    const auto f = *report.first_failure();
    out << "FAIL " << report.name << " (" << report.failures() << " of " << report.lines.size()
        << " checks failed; first: " << f.check << " at step " << f.step
        << ", expected " << format_double(f.expected) << ", actual " << format_double(f.actual)
        << ", tol " << format_double(f.tol) << ")\n";
  }
}

}  // namespace liftctl::verify
