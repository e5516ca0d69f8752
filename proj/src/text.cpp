#include "liftctl/text.hpp"

#include <charconv>
#include <cstdio>

#include "liftctl/errors.hpp"

namespace liftctl {

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw Error(ErrorKind::ConfigError, "not a number: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace liftctl
