#pragma once

#include <string>
#include <string_view>

namespace liftctl {

/// "%.17g": round-trip exact for doubles.
std::string format_double(double v);

/// Whole-string double parse; throws ConfigError on trailing junk.
double parse_double(std::string_view text);

}  // namespace liftctl
