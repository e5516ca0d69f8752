#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "liftctl/lifted_dynamics.hpp"
#include "liftctl/plant.hpp"

namespace liftctl {

/// Desired position x1d(k).  Evaluated at arbitrary k because the control law
/// looks two steps ahead.
class CommandSignal {
 public:
  enum class Kind { Constant, Sinusoid };

  static CommandSignal constant(double value);
  /// x1d(k) = amplitude * sin(omega * k), omega in rad/step.
  static CommandSignal sinusoid(double amplitude, double omega);
  /// Parses "const:0.5" or "sin:A=0.5,omega=0.5".
  static CommandSignal parse(std::string_view text);

  Kind kind() const { return kind_; }
  double value() const { return value_; }
  double amplitude() const { return amplitude_; }
  double omega() const { return omega_; }

  double at(std::uint64_t k) const;
  /// sup_k |x1d(k)|.
  double peak() const;
  /// Throws ConfigError unless peak() < x1_bar.
  void validate(double x1_bar) const;

  std::string to_string() const;

 private:
  Kind kind_ = Kind::Constant;
  double value_ = 0.0;
  double amplitude_ = 0.0;
  double omega_ = 0.0;
};

/// Command values used by one control evaluation.  With a frozen command all
/// three equal x1d(k).
struct CommandWindow {
  double now = 0.0;
  double next = 0.0;
  double after_next = 0.0;

  static CommandWindow at(const CommandSignal& cmd, std::uint64_t k, bool freeze = false);
};

struct Rho2Policy {
  enum class Kind { Fixed, Switching, Deadbeat };

  Kind kind = Kind::Switching;
  double value = 0.0;  // used by Fixed only

  static Rho2Policy fixed(double rho2);
  static Rho2Policy switching() { return {Kind::Switching, 0.0}; }
  static Rho2Policy deadbeat() { return {Kind::Deadbeat, 0.0}; }
  /// Parses "switching", "deadbeat" or "fixed:<value>".
  static Rho2Policy parse(std::string_view text);

  std::string to_string() const;
};

/// rho1 plus the rho2 policy, with switch-time bookkeeping.
///
/// The switch step k_s is the first step at which rho2 = 0 is emitted.  From
/// then on every emitted rho2 is 0.  If the switching law asks for a nonzero
/// gain after k_s the gain stays latched at 0 and the event is counted in
/// latch_overrides().
class GainSchedule {
 public:
  /// Throws ConfigError unless |rho1| < 1; a nonzero rho1 additionally needs
  /// allow_unproven_rho1 since invariance is only established for rho1 = 0.
  GainSchedule(double rho1, Rho2Policy policy, bool allow_unproven_rho1 = false);

  double rho1() const { return rho1_; }
  const Rho2Policy& policy() const { return policy_; }

  /// Emits rho2 for step k.  delta_x = x2 + x1 - x1d(k) feeds the switching law.
  double next_rho2(std::uint64_t k, double delta_x, double x2_bar, double guard_band = 0.0);

  std::optional<std::uint64_t> switch_step() const { return switch_step_; }
  std::size_t latch_overrides() const { return latch_overrides_; }

 private:
  double rho1_;
  Rho2Policy policy_;
  std::optional<std::uint64_t> switch_step_;
  std::size_t latch_overrides_ = 0;
};

struct ControlDecision {
  double u = 0.0;
  double e1 = 0.0;
  double e2 = 0.0;
  /// Lifted virtual target at k; empty while psi2(zeta2d) lies outside (-1, 1),
  /// which happens during the switching transient.
  std::optional<double> z2d;
  double chi2d = 0.0;       // psi2(zeta2d) at k
  double rho2_k = 0.0;
  double delta_x = 0.0;
  double predicted_F1 = 0.0;           // psi1(zeta1) at k+1
  double next_chi2d = 0.0;             // psi2(zeta2d) at k+1
  double predicted_psi2_target = 0.0;  // rho2 e2 + next_chi2d = psi2(zeta2) at k+1
};

/// e1 = psi1(zeta1) - psi1(zeta1d(k)), equal to (x1 - x1d) / x1_bar.
double error_e1(const LiftedSystem& sys, double z1, const CommandSignal& cmd, std::uint64_t k);

/// Normalized virtual velocity psi2(zeta2d) solving F1(z1, .) = rho1 e1 + chi1d_next.
/// Unlike virtual_target_z2d this may leave (-1, 1).
double virtual_target_chi2(const LiftedSystem& sys, double z1, double e1, double x1d_next,
                           double rho1);

/// z2d = F1_inverse(z1, rho1 e1 + psi1(zeta1d(k+1))).  Throws Inadmissible when
/// the virtual velocity would have to leave the bound.
double virtual_target_z2d(const LiftedSystem& sys, double z1, double e1, const CommandSignal& cmd,
                          std::uint64_t k, double rho1);

/// e2 = psi2(zeta2) - psi2(zeta2d).
double error_e2(const LiftedSystem& sys, double z2, double z2d);

/// Switching law: 0 when |delta_x| < x2_bar, else 1 - x2_bar / (2 |delta_x|).
/// With a guard band the deadbeat branch needs |delta_x| < x2_bar (1 - guard_band),
/// since its velocity target is -delta_x / x2_bar and has to stay liftable.
double rho2_switching(double delta_x, double x2_bar, double guard_band = 0.0);

/// Two-step backstepping law
///   u = F2_inverse(z1, z2, rho2 e2 + psi2(zeta2d(k+1))).
///
/// Throws DomainViolation when the current state, or the predicted position,
/// cannot be lifted, and Inadmissible when |rho2 e2 + psi2(zeta2d(k+1))| >= 1,
/// i.e. when the velocity at k+1 would leave its bound.
ControlDecision control(const LiftedSystem& sys, const PlantState& s, const CommandSignal& cmd,
                        GainSchedule& gains, bool freeze_command = false);

}  // namespace liftctl
