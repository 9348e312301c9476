#include "tailmix/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tailmix::special {

namespace {

constexpr double kEps = 1e-16;
constexpr double kFpMin = 1e-300;
constexpr int kMaxIter = 800;

// Series for P(a,x), valid (and fastest) for x < a + 1.
double gamma_p_series(double a, double x) {
  if (x <= 0.0) return 0.0;
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * kEps)
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  throw std::runtime_error("reg_gamma_p: series failed to converge");
}

// Lentz continued fraction for Q(a,x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kFpMin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = b + an / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps)
      return h * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  throw std::runtime_error("reg_gamma_q: continued fraction failed to converge");
}

// Lentz continued fraction for the incomplete beta; caller applies the
// symmetry switch so that x < (a+1)/(a+b+2).
double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("reg_beta: continued fraction failed to converge");
}

}  // namespace

double log_gamma(double x) {
#if defined(__GLIBC__) || defined(__APPLE__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_gamma_p: a must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("reg_gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double reg_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_gamma_q: a must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("reg_gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double inv_reg_gamma_p(double a, double p) {
  if (!(a > 0.0)) throw std::domain_error("inv_reg_gamma_p: a must be > 0");
  if (!(p >= 0.0 && p < 1.0)) throw std::domain_error("inv_reg_gamma_p: p must be in [0, 1)");
  if (p == 0.0) return 0.0;

  const double gln = log_gamma(a);
  double x;
  if (a > 1.0) {
    // Wilson-Hilferty start.
    const double pp = (p < 0.5) ? p : 1.0 - p;
    double t = std::sqrt(-2.0 * std::log(pp));
    double z = t - (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481));
    if (p < 0.5) z = -z;
    const double c = 1.0 / (9.0 * a);
    double w = 1.0 - c + z * std::sqrt(c);
    x = a * w * w * w;
    if (x <= 0.0) x = 0.5 * a;
  } else {
    // Small-a start from the leading term P(a,x) ~ x^a / (a Gamma(a)).
    x = std::exp((std::log(p) + std::log(a) + gln) / a);
    if (!(x > 0.0) || !std::isfinite(x)) x = 0.5 * a;
  }

  // Safeguarded Newton on P(a,x) - p.
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double f = reg_gamma_p(a, x) - p;
    if (f == 0.0) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double logpdf = (a - 1.0) * std::log(x) - x - gln;
    const double dfdx = std::exp(logpdf);
    double xn;
    if (dfdx > 0.0 && std::isfinite(dfdx)) {
      xn = x - f / dfdx;
    } else {
      xn = std::numeric_limits<double>::quiet_NaN();
    }
    if (xn == x) return x;
    if (!(xn > lo && xn < hi)) xn = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-15 * x + 1e-300) {
      x = xn;
      break;
    }
    x = xn;
  }
  return x;
}

double reg_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("reg_beta: a, b must be > 0");
  return reg_beta_pre(a, b, x, log_beta(a, b));
}

double reg_beta_pre(double a, double b, double x, double log_beta_ab) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("reg_beta: x must be in [0, 1], got " + std::to_string(x));
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbt = -log_beta_ab + a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(lbt) * beta_cf(a, b, x) / a;
  return 1.0 - std::exp(lbt) * beta_cf(b, a, 1.0 - x) / b;
}

double inv_reg_beta(double a, double b, double p) {
  if (!(a > 0.0 && b > 0.0)) throw std::domain_error("inv_reg_beta: a, b must be > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("inv_reg_beta: p must be in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  // Work on whichever side has the smaller target, for a relative-accurate
  // leading-order start: I_x(a,b) ~ x^a / (a B(a,b)) as x -> 0.
  const bool flipped = p > 0.5;
  const double aa = flipped ? b : a;
  const double bb = flipped ? a : b;
  const double pp = flipped ? 1.0 - p : p;
  const double lb = log_beta(aa, bb);

  double x = std::exp((std::log(pp) + std::log(aa) + lb) / aa);
  if (!(x > 0.0 && x < 1.0)) x = 0.5;

  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double f = reg_beta(aa, bb, x) - pp;
    if (f == 0.0) break;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double logpdf = (aa - 1.0) * std::log(x) + (bb - 1.0) * std::log1p(-x) - lb;
    const double dfdx = std::exp(logpdf);
    double xn;
    if (dfdx > 0.0 && std::isfinite(dfdx)) {
      xn = x - f / dfdx;
    } else {
      xn = std::numeric_limits<double>::quiet_NaN();
    }
    if (xn == x) break;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-16 * x) {
      x = xn;
      break;
    }
    x = xn;
  }
  return flipped ? 1.0 - x : x;
}

}  // namespace tailmix::special
