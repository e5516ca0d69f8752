#include "liftctl/controller.hpp"

#include <cmath>

#include "liftctl/errors.hpp"
#include "liftctl/text.hpp"

namespace liftctl {
namespace {

// psi1(zeta1d) for a desired position; lifting the command goes through the
// same guarded pipeline as the state.
double normalized_command(const LiftedSystem& sys, double x1d) {
  const auto lifted = lift(x1d, sys.bounds().x1_bar, sys.pair1);
  return sys.pair1.psi(lifted.zeta);
}

}  // namespace

// --- CommandSignal -----------------------------------------------------------

CommandSignal CommandSignal::constant(double value) {
  CommandSignal c;
  c.kind_ = Kind::Constant;
  c.value_ = value;
  return c;
}

CommandSignal CommandSignal::sinusoid(double amplitude, double omega) {
  CommandSignal c;
  c.kind_ = Kind::Sinusoid;
  c.amplitude_ = amplitude;
  c.omega_ = omega;
  return c;
}

CommandSignal CommandSignal::parse(std::string_view text) {
  if (text.starts_with("const:")) return constant(parse_double(text.substr(6)));
  if (text.starts_with("sin:")) {
    std::optional<double> amplitude;
    std::optional<double> omega;
    std::string_view rest = text.substr(4);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = rest.substr(0, comma);
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) break;
      const auto key = item.substr(0, eq);
      const double v = parse_double(item.substr(eq + 1));
      if (key == "A") {
        amplitude = v;
      } else if (key == "omega") {
        omega = v;
      } else {
        throw Error(ErrorKind::ConfigError, "unknown sinusoid key '" + std::string(key) + "'");
      }
    }
    if (amplitude && omega) return sinusoid(*amplitude, *omega);
  }
  throw Error(ErrorKind::ConfigError, "bad command '" + std::string(text) +
                                          "' (expected const:<x> or sin:A=<a>,omega=<w>)");
}

double CommandSignal::at(std::uint64_t k) const {
  if (kind_ == Kind::Constant) return value_;
  return amplitude_ * std::sin(omega_ * static_cast<double>(k));
}

double CommandSignal::peak() const {
  return kind_ == Kind::Constant ? std::abs(value_) : std::abs(amplitude_);
}

void CommandSignal::validate(double x1_bar) const {
  const bool finite = kind_ == Kind::Constant ? std::isfinite(value_)
                                              : std::isfinite(amplitude_) && std::isfinite(omega_);
  if (!finite || !(peak() < x1_bar)) {
    throw Error(ErrorKind::ConfigError, "command " + to_string() + " is not inside |x1| < " +
                                            format_double(x1_bar));
  }
}

std::string CommandSignal::to_string() const {
  if (kind_ == Kind::Constant) return "const:" + format_double(value_);
  return "sin:A=" + format_double(amplitude_) + ",omega=" + format_double(omega_);
}

CommandWindow CommandWindow::at(const CommandSignal& cmd, std::uint64_t k, bool freeze) {
  const double now = cmd.at(k);
  if (freeze) return {now, now, now};
  return {now, cmd.at(k + 1), cmd.at(k + 2)};
}

// --- gains -------------------------------------------------------------------

Rho2Policy Rho2Policy::fixed(double rho2) {
  if (!(std::abs(rho2) < 1.0)) {
    throw Error(ErrorKind::ConfigError, "fixed rho2 must satisfy |rho2| < 1");
  }
  return {Kind::Fixed, rho2};
}

Rho2Policy Rho2Policy::parse(std::string_view text) {
  if (text == "switching") return switching();
  if (text == "deadbeat") return deadbeat();
  if (text.starts_with("fixed:")) return fixed(parse_double(text.substr(6)));
  throw Error(ErrorKind::ConfigError, "bad rho2 policy '" + std::string(text) +
                                          "' (expected switching, deadbeat or fixed:<value>)");
}

std::string Rho2Policy::to_string() const {
  switch (kind) {
    case Kind::Switching: return "switching";
    case Kind::Deadbeat: return "deadbeat";
    case Kind::Fixed: return "fixed:" + format_double(value);
  }
  return "?";
}

GainSchedule::GainSchedule(double rho1, Rho2Policy policy, bool allow_unproven_rho1)
    : rho1_(rho1), policy_(policy) {
  if (!(std::abs(rho1) < 1.0)) throw Error(ErrorKind::ConfigError, "rho1 must satisfy |rho1| < 1");
  if (rho1 != 0.0 && !allow_unproven_rho1) {
    throw Error(ErrorKind::ConfigError,
                "nonzero rho1 has no invariance guarantee; pass --allow-unproven-rho1");
  }
  if (policy.kind == Rho2Policy::Kind::Fixed && !(std::abs(policy.value) < 1.0)) {
    throw Error(ErrorKind::ConfigError, "fixed rho2 must satisfy |rho2| < 1");
  }
}

double GainSchedule::next_rho2(std::uint64_t k, double delta_x, double x2_bar,
                               double guard_band) {
  double rho2 = 0.0;
  switch (policy_.kind) {
    case Rho2Policy::Kind::Fixed: rho2 = policy_.value; break;
    case Rho2Policy::Kind::Deadbeat: rho2 = 0.0; break;
    case Rho2Policy::Kind::Switching: rho2 = rho2_switching(delta_x, x2_bar, guard_band); break;
  }
  if (switch_step_) {
    if (rho2 != 0.0) ++latch_overrides_;
    return 0.0;
  }
  if (rho2 == 0.0) switch_step_ = k;
  return rho2;
}

// --- control law -------------------------------------------------------------

double error_e1(const LiftedSystem& sys, double z1, const CommandSignal& cmd, std::uint64_t k) {
  const double chi1 = sys.pair1.psi(z1 / sys.bounds().x1_bar);
  return chi1 - normalized_command(sys, cmd.at(k));
}

double virtual_target_chi2(const LiftedSystem& sys, double z1, double e1, double x1d_next,
                           double rho1) {
  return F1_inverse_target(sys, z1, rho1 * e1 + normalized_command(sys, x1d_next));
}

double virtual_target_z2d(const LiftedSystem& sys, double z1, double e1, const CommandSignal& cmd,
                          std::uint64_t k, double rho1) {
  return F1_inverse(sys, z1, rho1 * e1 + normalized_command(sys, cmd.at(k + 1)));
}

double error_e2(const LiftedSystem& sys, double z2, double z2d) {
  const double x2_bar = sys.bounds().x2_bar;
  return sys.pair2.psi(z2 / x2_bar) - sys.pair2.psi(z2d / x2_bar);
}

double rho2_switching(double delta_x, double x2_bar, double guard_band) {
  const double magnitude = std::abs(delta_x);
  if (magnitude < x2_bar * (1.0 - guard_band)) return 0.0;
  return 1.0 - x2_bar / (2.0 * magnitude);
}

ControlDecision control(const LiftedSystem& sys, const PlantState& s, const CommandSignal& cmd,
                        GainSchedule& gains, bool freeze_command) {
  const auto& b = sys.bounds();
  const auto l1 = lift(s.x1, b.x1_bar, sys.pair1);
  const auto l2 = lift(s.x2, b.x2_bar, sys.pair2);
  const auto window = CommandWindow::at(cmd, s.k, freeze_command);
  const double rho1 = gains.rho1();

  ControlDecision d;

  // First step: virtual velocity target at k and the resulting e2.
  d.e1 = sys.pair1.psi(l1.zeta) - normalized_command(sys, window.now);
  d.chi2d = virtual_target_chi2(sys, l1.z, d.e1, window.next, rho1);
  if (std::abs(d.chi2d) < 1.0 - sys.pair2.guard_band) d.z2d = b.x2_bar * sys.pair2.phi(d.chi2d);
  d.e2 = sys.pair2.psi(l2.zeta) - d.chi2d;

  // One-step prediction of the lifted position, then the virtual target at k+1.
  d.predicted_F1 = F1(sys, l1.z, l2.z);
  const auto next1 = lift(b.x1_bar * d.predicted_F1, b.x1_bar, sys.pair1);
  const double e1_next = d.predicted_F1 - normalized_command(sys, window.next);
  d.next_chi2d = virtual_target_chi2(sys, next1.z, e1_next, window.after_next, rho1);

  // Second step.
  d.delta_x = s.x2 + s.x1 - window.now;
  d.rho2_k = gains.next_rho2(s.k, d.delta_x, b.x2_bar, sys.pair2.guard_band);
  d.predicted_psi2_target = d.rho2_k * d.e2 + d.next_chi2d;
  if (std::abs(d.predicted_psi2_target) >= 1.0 - sys.pair2.guard_band) {
    throw Error(ErrorKind::Inadmissible, "velocity target " +
                                             format_double(d.predicted_psi2_target) +
                                             " at k+1 is outside (-1, 1)");
  }
  d.u = F2_inverse(sys, l1.z, l2.z, d.predicted_psi2_target);
  return d;
}

}  // namespace liftctl
