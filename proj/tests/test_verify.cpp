#include <doctest.h>

#include <cmath>
#include <sstream>

#include "liftctl/verify.hpp"

using namespace liftctl;
using namespace liftctl::verify;

namespace {

RunConfig scenario(double x10, double x20, std::uint64_t horizon = 100,
                   StateBounds bounds = {2.0, 1.0}) {
  RunConfig cfg;
  cfg.bounds = bounds;
  cfg.command = CommandSignal::constant(0.1);
  cfg.x10 = x10;
  cfg.x20 = x20;
  cfg.horizon = horizon;
  cfg.seed = 7;
  return cfg;
}

std::size_t failures_of(const CheckReport& r, const std::string& check) {
  std::size_t n = 0;
  for (const auto& l : r.lines) n += (l.check == check && !l.pass) ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("vanishing contraction examples") {
  const auto decaying = check_vanishing_contraction(
      {[](std::uint64_t k) { return 0.9 * std::pow(0.99, static_cast<double>(k)); }, 1.0, 500});
  CHECK(decaying.monotone);
  CHECK(decaying.V_final < 1e-12);
  CHECK(decaying.report.passed());
  CHECK(decaying.values.size() == 501);
  CHECK(decaying.values[1] == doctest::Approx(0.81));

  const auto kill = check_vanishing_contraction({[](std::uint64_t) { return 0.0; }, 7.0, 5});
  CHECK(kill.values[0] == 7.0);
  for (std::size_t k = 1; k < kill.values.size(); ++k) CHECK(kill.values[k] == 0.0);

  const auto zero = check_vanishing_contraction({[](std::uint64_t) { return 0.5; }, 0.0, 5});
  for (const double v : zero.values) CHECK(v == 0.0);
  CHECK(zero.report.passed());

  const auto bad = check_vanishing_contraction({[](std::uint64_t) { return 1.5; }, 1.0, 5});
  CHECK_FALSE(bad.monotone);
  CHECK_FALSE(bad.report.passed());
}

TEST_CASE("identities on the reference run") {
  const auto cfg = scenario(0.5, 0.3);
  const auto report = check_contraction_identities(run(cfg), cfg.system());
  CHECK(failures_of(report, "dV2_identity") == 0);
  CHECK(failures_of(report, "e2_recursion") == 0);
  CHECK(failures_of(report, "e1_recursion") == 0);
  CHECK(failures_of(report, "plant_step_x1") == 0);
  CHECK(failures_of(report, "plant_step_x2") == 0);
  // The first-error energy identity drops the x2 coupling term; it can only
  // hold once e2 is zero, which takes one step from this start.
  CHECK(failures_of(report, "dV1_identity") == 1);
  CHECK(report.first_failure("dV1_identity")->step == 0);
}

TEST_CASE("identities hold through the switching transient") {
  const auto cfg = scenario(-1.5, -0.4, 30);
  const auto traj = run(cfg);
  REQUIRE(traj.ok());
  const auto report = check_contraction_identities(traj, cfg.system());
  CHECK(failures_of(report, "dV2_identity") == 0);
  CHECK(failures_of(report, "e2_recursion") == 0);
  CHECK(failures_of(report, "e1_recursion") == 0);
}

TEST_CASE("equilibrium is trivially fine") {
  const auto cfg = scenario(0.1, 0.0, 20);
  const auto traj = run(cfg);
  CHECK(check_contraction_identities(traj, cfg.system()).passed());
  CHECK(check_forward_invariance(traj, cfg.system()).passed());
  const auto db = check_deadbeat(traj, cfg.system());
  CHECK(db.k_s == 0);
  CHECK(db.report.passed());
}

TEST_CASE("frozen runs are rejected by the identity check") {
  auto cfg = scenario(0.5, 0.3, 10);
  cfg.freeze_command = true;
  CHECK_THROWS_AS(check_contraction_identities(run(cfg), cfg.system()), Error);
}

TEST_CASE("forward invariance flags an A1-violating start") {
  const auto cfg = scenario(1.5, 0.8, 10);
  const auto report = check_forward_invariance(run(cfg), cfg.system());
  CHECK_FALSE(report.passed());
  const auto first = report.first_failure();
  REQUIRE(first.has_value());
  CHECK(first->check == "A1");
  CHECK(first->step == 0);
}

TEST_CASE("forward invariance over seeded runs in both regimes") {
  for (const auto bounds : {StateBounds{2.0, 1.0}, StateBounds{1.0, 2.0}}) {
    MonteCarloConfig mc;
    mc.base = scenario(0.0, 0.0, 100, bounds);
    mc.trials = 100;
    mc.seed = 3;
    mc.sampling = IcSampling::PositionOnly;
    for (const auto& t : monte_carlo(mc).trials) {
      auto cfg = mc.base;
      cfg.x10 = t.x10;
      cfg.x20 = t.x20;
      cfg.command = CommandSignal::constant(t.command);
      const auto traj = run(cfg);
      CHECK(traj.ok());
      CHECK(check_forward_invariance(traj, cfg.system()).passed());
    }
  }
}

TEST_CASE("deadbeat checks") {
  {
    const auto cfg = scenario(0.5, 0.3, 20);
    const auto db = check_deadbeat(run(cfg), cfg.system());
    CHECK(db.k_s == 0);
    CHECK(db.e2_zero_after);
    CHECK(db.e1_zero_within_n);
  }
  {
    const auto cfg = scenario(-1.5, -0.4, 20);
    const auto db = check_deadbeat(run(cfg), cfg.system());
    CHECK(db.k_s == 3);
    CHECK(db.report.passed());
  }
  auto fixed = scenario(0.5, 0.3, 20);
  fixed.rho2 = Rho2Policy::fixed(0.5);
  try {
    check_deadbeat(run(fixed), fixed.system());
    FAIL("expected NoSwitch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoSwitch);
  }
  auto sine = scenario(0.5, 0.3, 20);
  sine.command = CommandSignal::sinusoid(0.5, 0.5);
  CHECK_THROWS_AS(check_deadbeat(run(sine), sine.system()), Error);
}

TEST_CASE("suites") {
  CHECK(run_suite("lifting").passed());
  CHECK(run_suite("proposition").passed());
  CHECK(run_suite("invariance").passed());
  CHECK(run_suite("deadbeat").passed());
  CHECK_THROWS_AS(run_suite("nothing"), Error);

  std::ostringstream csv;
  write_check_csv(csv, run_suite("lifting"));
  CHECK(csv.str().rfind("check,step,expected,actual,tol,pass\n", 0) == 0);
  std::ostringstream text;
  write_check_text(text, run_suite("lifting"));
  CHECK(text.str().rfind("PASS ", 0) == 0);
}

TEST_CASE("close") {
  CHECK(close(1.0, 1.0 + 1e-10, 1e-9, 0.0));
  CHECK_FALSE(close(1.0, 1.1, 1e-9, 0.0));
  CHECK(close(0.0, 1e-13, 1e-9, 1e-12));
}
