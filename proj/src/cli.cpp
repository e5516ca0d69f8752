#include "liftctl/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>

#include "liftctl/admissibility.hpp"
#include "liftctl/errors.hpp"
#include "liftctl/sim.hpp"
#include "liftctl/verify.hpp"

namespace liftctl {
namespace {

struct Options {
  std::string plant = "double-integrator";
  double x1_bar = 2.0;
  double x2_bar = 1.0;
  std::string sigmoid = "atanh";
  std::string sigmoid2;
  double guard_band = kDefaultGuardBand;
  double rho1 = 0.0;
  std::string rho2 = "switching";
  std::string command = "const:0";
  double x10 = 0.0;
  double x20 = 0.0;
  std::uint64_t steps = 50;
  std::uint64_t seed = 0;
  std::string out = "-";
  bool freeze_command = false;
  bool allow_unproven_rho1 = false;
  std::size_t trials = 100;
  std::string sampling = "admissible";
  bool fixed_command = false;
  int resolution = 101;
  double rho2_frozen = 0.0;
  std::uint64_t k = 0;
  std::string suite = "all";
};

RunConfig to_run_config(const Options& o) {
  RunConfig cfg;
  cfg.plant = o.plant;
  cfg.bounds = {o.x1_bar, o.x2_bar};
  cfg.sigmoid1 = o.sigmoid;
  cfg.sigmoid2 = o.sigmoid2.empty() ? o.sigmoid : o.sigmoid2;
  cfg.guard_band = o.guard_band;
  cfg.rho1 = o.rho1;
  cfg.rho2 = Rho2Policy::parse(o.rho2);
  cfg.allow_unproven_rho1 = o.allow_unproven_rho1;
  cfg.command = CommandSignal::parse(o.command);
  cfg.x10 = o.x10;
  cfg.x20 = o.x20;
  cfg.horizon = o.steps;
  cfg.seed = o.seed;
  cfg.freeze_command = o.freeze_command;
  return cfg;
}

// Writes to `fallback` for "-", otherwise to the named file.
void emit(const std::string& path, std::ostream& fallback,
          const std::function<void(std::ostream&)>& write) {
  if (path == "-") {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::ConfigError, "cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw Error(ErrorKind::ConfigError, "write to '" + path + "' failed");
}

int cmd_run(const Options& o, std::ostream& out, std::ostream& err) {
  const auto record = run(to_run_config(o));
  emit(o.out, out, [&](std::ostream& s) { write_trajectory_csv(s, record); });
  if (record.failure) {
    err << "run stopped at k=" << record.failure->k << ": " << record.failure->message << '\n';
  }
  return 0;
}

int cmd_montecarlo(const Options& o, std::ostream& out) {
  MonteCarloConfig mc;
  mc.base = to_run_config(o);
  mc.base.x10 = mc.base.x20 = 0.0;
  mc.base.validate();
  mc.trials = o.trials;
  mc.seed = o.seed;
  mc.sampling = o.sampling == "position-only" ? IcSampling::PositionOnly : IcSampling::Admissible;
  mc.randomize_command = !o.fixed_command;
  const auto summary = monte_carlo(mc);
  emit(o.out, out, [&](std::ostream& s) { write_monte_carlo_csv(s, summary); });
  return 0;
}

int cmd_regions(const Options& o, std::ostream& out) {
  auto cfg = to_run_config(o);
  cfg.x10 = cfg.x20 = 0.0;
  cfg.validate();
  const auto points = sample_regions(cfg.system(), o.rho2_frozen, cfg.command, o.k, o.resolution);
  emit(o.out, out, [&](std::ostream& s) { write_regions_csv(s, points); });
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const auto result = verify::run_suite(o.suite);
  if (o.out == "-") {
    verify::write_check_text(out, result);
  } else {
    emit(o.out, out, [&](std::ostream& s) { verify::write_check_csv(s, result); });
    verify::write_check_text(out, result);
  }
  return result.passed() ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Constraint-lifting backstepping control: simulation and checks", "liftctl"};
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Flat key=value file using flag names; flags override it");
  app.require_subcommand(1, 1);

  const auto pairs = pair_names();
  app.add_option("--plant", o.plant, "Registered plant")
      ->check(CLI::IsMember({"double-integrator"}));
  app.add_option("--x1bar", o.x1_bar, "Bound on |x1|");
  app.add_option("--x2bar", o.x2_bar, "Bound on |x2|");
  app.add_option("--sigmoid", o.sigmoid, "Sigmoid pair for both states")
      ->check(CLI::IsMember(pairs));
  app.add_option("--sigmoid2", o.sigmoid2, "Sigmoid pair for x2 (defaults to --sigmoid)")
      ->check(CLI::IsMember(pairs));
  app.add_option("--guard-band", o.guard_band, "Lifting guard band, in (0, 0.1)");
  app.add_option("--rho1", o.rho1, "First-step gain");
  app.add_option("--rho2", o.rho2, "switching | deadbeat | fixed:<v> with |v| < 1");
  app.add_option("--command", o.command, "const:<v> | sin:A=<a>,omega=<w>");
  app.add_option("--x10", o.x10, "Initial x1");
  app.add_option("--x20", o.x20, "Initial x2");
  app.add_option("--steps", o.steps, "Horizon in steps");
  app.add_option("--seed", o.seed, "Seed (falls back to LIFTCTL_SEED)")->envname("LIFTCTL_SEED");
  app.add_option("--out", o.out, "Output CSV path, - for stdout");
  app.add_flag("--freeze-command", o.freeze_command, "Hold the command one step (no lookahead)");
  app.add_flag("--allow-unproven-rho1", o.allow_unproven_rho1, "Permit rho1 != 0");
  app.add_option("--trials", o.trials, "montecarlo: number of trials");
  app.add_option("--sampling", o.sampling, "montecarlo: initial-state sampling")
      ->check(CLI::IsMember({"admissible", "position-only"}));
  app.add_flag("--fixed-command", o.fixed_command,
               "montecarlo: use --command as given instead of drawing it per trial");
  app.add_option("--resolution", o.resolution, "regions: grid points per axis");
  app.add_option("--rho2-frozen", o.rho2_frozen, "regions: rho2 used for A2");
  app.add_option("--k", o.k, "regions: time step for the command");
  app.add_option("--suite", o.suite, "verify: suite to run")
      ->check(CLI::IsMember(verify::suite_names()));

  auto* sub_run = app.add_subcommand("run", "Simulate one closed-loop trajectory")->fallthrough();
  auto* sub_mc = app.add_subcommand("montecarlo", "Batch of randomized runs")->fallthrough();
  auto* sub_regions =
      app.add_subcommand("regions", "Sample admissible regions on a grid")->fallthrough();
  auto* sub_verify = app.add_subcommand("verify", "Run the built-in check suites")->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << app.help("", CLI::AppFormatMode::All);
    return 1;
  }

  try {
    if (sub_run->parsed()) return cmd_run(o, out, err);
    if (sub_mc->parsed()) return cmd_montecarlo(o, out);
    if (sub_regions->parsed()) return cmd_regions(o, out);
    if (sub_verify->parsed()) return cmd_verify(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace liftctl
