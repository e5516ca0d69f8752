#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liftctl {

enum class ErrorKind {
  DomainViolation,  // state left the numerically safe interior of the safe set
  NonFinite,
  Inadmissible,     // a demanded one-step move has no admissible lifted image
  SingularG,
  ConfigError,
  Exhausted,
  NoSwitch,
  InverseDrift,     // a closed-form inverse failed its forward re-evaluation
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace liftctl
