#include "liftctl/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "liftctl/errors.hpp"

namespace liftctl {
namespace {

using std::numbers::pi;

// Largest double strictly below 1.  Every psi saturates here so that the
// open interval (-1, 1) is respected in floating point.
const double kPsiMax = std::nextafter(1.0, 0.0);

double saturate(double v) { return std::clamp(v, -kPsiMax, kPsiMax); }

double tan_phi(double x) { return std::tan(0.5 * pi * x); }
double tan_psi(double z) { return saturate(2.0 / pi * std::atan(z)); }

double atanh_phi(double x) { return std::atanh(x); }
double atanh_psi(double z) { return saturate(std::tanh(z)); }

double rational_phi(double x) { return x / (1.0 - std::abs(x)); }
double rational_psi(double z) {
  if (std::isinf(z)) return std::copysign(kPsiMax, z);
  return saturate(z / (1.0 + std::abs(z)));
}

// 1 - x^2 is formed as (1 - x)(1 + x) to keep precision near the boundary.
double algebraic_phi(double x) { return x / std::sqrt((1.0 - x) * (1.0 + x)); }
double algebraic_psi(double z) {
  if (std::isinf(z)) return std::copysign(kPsiMax, z);
  return saturate(z / std::hypot(1.0, z));
}

const double kSqrtPi = std::sqrt(pi);

double erf_phi(double x) { return 2.0 / kSqrtPi * erf_inv(x); }
double erf_psi(double z) { return saturate(std::erf(0.5 * kSqrtPi * z)); }

double gd_phi(double x) { return 2.0 / pi * std::asinh(std::tan(0.5 * pi * x)); }
double gd_psi(double z) { return saturate(2.0 / pi * std::atan(std::sinh(0.5 * pi * z))); }

// Acklam's rational approximation of the standard normal quantile for
// p in (0, 0.5]; relative error about 1.15e-9.
double normal_quantile_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

std::vector<SigmoidPair> build_catalog() {
  return {
      {"tan", &tan_psi, &tan_phi, kDefaultGuardBand},
      {"atanh", &atanh_psi, &atanh_phi, kDefaultGuardBand},
      {"rational", &rational_psi, &rational_phi, kDefaultGuardBand},
      {"algebraic", &algebraic_psi, &algebraic_phi, kDefaultGuardBand},
      {"erf", &erf_psi, &erf_phi, kDefaultGuardBand},
      {"gudermannian", &gd_psi, &gd_phi, kDefaultGuardBand},
  };
}

void require_positive_bound(double x_bar) {
  if (!(x_bar > 0.0) || !std::isfinite(x_bar)) {
    throw Error(ErrorKind::ConfigError, "bound must be positive and finite");
  }
}

}  // namespace

double erf_inv(double x) {
  if (std::isnan(x) || std::abs(x) > 1.0) return std::numeric_limits<double>::quiet_NaN();
  if (x == 1.0) return std::numeric_limits<double>::infinity();
  if (x == -1.0) return -std::numeric_limits<double>::infinity();
  if (x == 0.0) return x;

  // erf_inv(y) = -quantile((1 - y) / 2) / sqrt(2) for y > 0; the tail mass
  // (1 - y) / 2 is exact for y >= 0.5, which is where precision matters.
  const double y = std::abs(x);
  double w = -normal_quantile_lower(0.5 * (1.0 - y)) / std::numbers::sqrt2;

  // One Newton step against erf.
  const double residual = std::erf(w) - y;
  w -= residual / (2.0 / kSqrtPi * std::exp(-w * w));
  return std::copysign(w, x);
}

SigmoidPair SigmoidPair::with_guard_band(double eps) const {
  if (!(eps > 0.0 && eps < 0.1)) {
    throw Error(ErrorKind::ConfigError, "guard band must lie in (0, 0.1)");
  }
  SigmoidPair out = *this;
  out.guard_band = eps;
  return out;
}

const std::vector<SigmoidPair>& catalog() {
  static const std::vector<SigmoidPair> pairs = build_catalog();
  return pairs;
}

SigmoidPair find_pair(std::string_view name, double guard_band) {
  for (const auto& pair : catalog()) {
    if (pair.name == name) return pair.with_guard_band(guard_band);
  }
  throw Error(ErrorKind::ConfigError, "unknown sigmoid pair '" + std::string(name) + "'");
}

std::vector<std::string> pair_names() {
  std::vector<std::string> names;
  for (const auto& pair : catalog()) names.push_back(pair.name);
  return names;
}

void StateBounds::validate() const {
  require_positive_bound(x1_bar);
  require_positive_bound(x2_bar);
}

LiftedPoint lift(double x, double x_bar, const SigmoidPair& pair) {
  require_positive_bound(x_bar);
  if (!std::isfinite(x)) throw Error(ErrorKind::NonFinite, "cannot lift a non-finite state");

  const double chi = x / x_bar;
  if (std::abs(chi) >= 1.0 - pair.guard_band) {
    throw Error(ErrorKind::DomainViolation,
                "normalized state " + std::to_string(chi) + " is outside the guarded interior");
  }
  const double z = x_bar * pair.phi(chi);
  return {x, chi, z, z / x_bar};
}

LiftedPoint unlift(double z, double x_bar, const SigmoidPair& pair) {
  require_positive_bound(x_bar);
  if (!std::isfinite(z)) throw Error(ErrorKind::NonFinite, "cannot unlift a non-finite state");

  const double zeta = z / x_bar;
  const double chi = pair.psi(zeta);
  double x = x_bar * chi;
  if (std::abs(x) >= x_bar) x = std::copysign(std::nextafter(x_bar, 0.0), x);
  return {x, chi, z, zeta};
}

}  // namespace liftctl
