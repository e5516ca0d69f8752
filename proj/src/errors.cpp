#include "liftctl/errors.hpp"

namespace liftctl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Inadmissible: return "Inadmissible";
    case ErrorKind::SingularG: return "SingularG";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::Exhausted: return "Exhausted";
    case ErrorKind::NoSwitch: return "NoSwitch";
    case ErrorKind::InverseDrift: return "InverseDrift";
  }
  return "Unknown";
}

}  // namespace liftctl
