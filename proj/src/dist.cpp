#include "tailmix/dist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tailmix/quadrature.hpp"
#include "tailmix/special.hpp"

namespace tailmix {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))
constexpr double kSqrt2Pi = 2.5066282746310005;

double require_finite_dof(const Dof& nu, const char* who) {
  if (nu.is_infinite()) throw std::domain_error(std::string(who) + ": finite dof required");
  return nu.value();
}

// CDF evaluators that tolerate infinite arguments; used inside integrands
// where conditional arguments may legitimately overflow to +-inf.
double normal_cdf_ext(double z) {
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-z / kSqrt2);
}

double t_cdf_ext(double z, double nu) {
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  if (z == 0.0) return 0.5;
  const double half = 0.5 * special::reg_beta(0.5 * nu, 0.5, nu / (nu + z * z));
  return z < 0 ? half : 1.0 - half;
}

double t_log_pdf_raw(double x, double nu) {
  return special::log_gamma(0.5 * (nu + 1.0)) - special::log_gamma(0.5 * nu) -
         0.5 * std::log(nu * M_PI) - 0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

// Breakpoints packing the panels geometrically toward the upper limit b,
// where the integrand mass concentrates when b is deep in the lower tail.
std::vector<double> geometric_breaks(double a, double b) {
  std::vector<double> breaks;
  breaks.push_back(a);
  const double d = b - a;
  for (int j = 1; j <= 8; ++j) breaks.push_back(b - d * std::ldexp(1.0, -j));
  breaks.push_back(b);
  return breaks;
}

void insert_break(std::vector<double>& breaks, double point) {
  if (point <= breaks.front() || point >= breaks.back()) return;
  const auto it = std::lower_bound(breaks.begin(), breaks.end(), point);
  if (*it != point) breaks.insert(it, point);
}

// P(X <= x, Y <= y) for the standardized bivariate normal, x <= y.
// Single integral of the conditional CDF: int_{-inf}^{x} phi(s)
// Phi((y - rho s)/tau) ds with tau = sqrt(1 - rho^2). The lower limit is
// truncated where phi(L)/phi(min(x,0)) < e^{-60}.
double bv_normal_cdf_ordered(double x, double y, double rho) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;  // x <= y, so both limits are +-inf
  const double tau = std::sqrt((1.0 - rho) * (1.0 + rho));
  const double m = std::min(x, 0.0);
  const double lower = -std::sqrt(m * m + 120.0);

  auto breaks = geometric_breaks(lower, x);
  // Transition point of the conditional CDF (argument crosses zero).
  if (rho != 0.0) insert_break(breaks, y / rho);

  const auto integrand = [=](double s) {
    return std::exp(-0.5 * s * s - kLogSqrt2Pi) * normal_cdf_ext((y - rho * s) / tau);
  };
  const double v = quad::integrate(integrand, std::span<const double>(breaks), 5e-14, 1e-280);
  return std::clamp(v, 0.0, 1.0);
}

// Conditional-t CDF factor: given X = s, (Y - rho s)/scale(s) is t with
// nu + 1 dof, scale(s) = sqrt((1 - rho^2)(nu + s^2)/(nu + 1)).
double t_conditional_factor(double s, double y, double rho, double nu) {
  const double scale = std::sqrt((1.0 - rho) * (1.0 + rho) * (nu + s * s) / (nu + 1.0));
  return t_cdf_ext((y - rho * s) / scale, nu + 1.0);
}

// P(X <= x, Y <= y) for the standardized bivariate t, x <= y. The integral
// over s <= x is split at A: the far tail (s <= A) is mapped to v in (0, 1]
// by s = A / v, which keeps the integrand bounded and smooth for any x,
// including quantiles of order 1e9 and beyond at small nu.
double bv_t_cdf_ordered(double x, double y, double rho, double nu) {
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double amax = std::max(10.0, 3.0 * std::sqrt(nu));
  const double a_split = std::min(x, -amax);

  const auto tail_integrand = [=](double v) {
    const double s = a_split / v;
    const double log_jac = std::log(-a_split) - 2.0 * std::log(v);
    const double density = std::exp(t_log_pdf_raw(s, nu) + log_jac);
    if (density == 0.0) return 0.0;
    return density * t_conditional_factor(s, y, rho, nu);
  };
  const double tail_breaks[7] = {0.0, 1e-4, 1e-2, 0.1, 0.3, 0.6, 1.0};
  double result = quad::integrate(tail_integrand, std::span<const double>(tail_breaks), 5e-14, 1e-280);

  if (x > -amax) {
    auto breaks = geometric_breaks(-amax, x);
    if (rho != 0.0) insert_break(breaks, y / rho);
    const auto integrand = [=](double s) {
      return std::exp(t_log_pdf_raw(s, nu)) * t_conditional_factor(s, y, rho, nu);
    };
    result += quad::integrate(integrand, std::span<const double>(breaks), 5e-14, 1e-280);
  }
  return std::clamp(result, 0.0, 1.0);
}

}  // namespace

double normal_cdf(double x) {
  if (!std::isfinite(x)) throw std::domain_error("normal_cdf: non-finite input");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile: p must be in (0, 1)");

  // Acklam's rational approximation, then Halley polish against erfc.
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  for (int it = 0; it < 2 && std::fabs(x) < 37.0; ++it) {
    const double e = normal_cdf_ext(x) - p;
    const double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

double t_cdf(double x, const Dof& nu) {
  if (!std::isfinite(x)) throw std::domain_error("t_cdf: non-finite input");
  if (nu.is_infinite()) return normal_cdf(x);
  return t_cdf_ext(x, nu.value());
}

double t_quantile(double p, const Dof& nu) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t_quantile: p must be in (0, 1)");
  if (nu.is_infinite()) return normal_quantile(p);
  const double v = nu.value();
  if (p == 0.5) return 0.0;

  const double pl = std::min(p, 1.0 - p);
  const double pc = 2.0 * pl;
  double x;
  if (pc <= 0.5) {
    const double z = special::inv_reg_beta(0.5 * v, 0.5, pc);
    x = -std::sqrt(v * (1.0 - z) / z);
  } else {
    const double w = special::inv_reg_beta(0.5, 0.5 * v, 1.0 - pc);
    x = -std::sqrt(v * w / (1.0 - w));
  }

  // One Newton step against the CDF tightens the inverse-beta iterate.
  const double f = std::exp(t_log_pdf_raw(x, v));
  if (f > 0.0 && std::isfinite(f)) {
    const double err = t_cdf_ext(x, v) - pl;
    const double step = err / f;
    if (std::fabs(step) < 0.5 * (std::fabs(x) + 1.0)) x -= step;
  }
  return p < 0.5 ? x : -x;
}

double t_log_pdf(double x, const Dof& nu) {
  const double v = require_finite_dof(nu, "t_log_pdf");
  return t_log_pdf_raw(x, v);
}

double chi_square_cdf(double x, const Dof& nu) {
  const double v = require_finite_dof(nu, "chi_square_cdf");
  if (!(x >= 0.0)) throw std::domain_error("chi_square_cdf: x must be >= 0");
  return special::reg_gamma_p(0.5 * v, 0.5 * x);
}

double chi_square_quantile(double p, const Dof& nu) {
  const double v = require_finite_dof(nu, "chi_square_quantile");
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("chi_square_quantile: p must be in [0, 1)");
  return 2.0 * special::inv_reg_gamma_p(0.5 * v, p);
}

double marginal_cdf(double x, const CopulaFamily& family) { return t_cdf(x, family.dof()); }

double marginal_quantile(double p, const CopulaFamily& family) {
  return t_quantile(p, family.dof());
}

double bv_elliptical_cdf(double x, double y, double rho, const CopulaFamily& family) {
  if (std::isnan(x) || std::isnan(y)) throw std::domain_error("bv_elliptical_cdf: NaN input");
  if (!(rho > -1.0 && rho < 1.0))
    throw std::domain_error("bv_elliptical_cdf: rho must be in (-1, 1)");
  if (x > y) std::swap(x, y);
  if (family.is_gaussian()) return bv_normal_cdf_ordered(x, y, rho);
  return bv_t_cdf_ordered(x, y, rho, family.dof().value());
}

double bv_t_log_density(double x, double y, double rho, const Dof& nu) {
  const double v = require_finite_dof(nu, "bv_t_log_density");
  if (!(rho > -1.0 && rho < 1.0))
    throw std::domain_error("bv_t_log_density: rho must be in (-1, 1)");
  const double om = (1.0 - rho) * (1.0 + rho);
  const double quad_form = (x * x - 2.0 * rho * x * y + y * y) / om;
  return special::log_gamma(0.5 * v + 1.0) - special::log_gamma(0.5 * v) - std::log(v * M_PI) -
         0.5 * std::log(om) - (0.5 * v + 1.0) * std::log1p(quad_form / v);
}

}  // namespace tailmix
