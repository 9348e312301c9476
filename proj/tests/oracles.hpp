#ifndef TAILMIX_TESTS_ORACLES_HPP
#define TAILMIX_TESTS_ORACLES_HPP

// Test-only oracles, independent of the library implementation paths they
// check: long-double erf series / Mills-ratio continued fraction for the
// normal CDF, closed-form t CDFs at nu = 1, 2, bisection inversion, and
// Monte Carlo orthant probabilities drawn with std:: distributions.

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace oracles {

// Normal CDF in long double: Taylor series of erf for small arguments,
// Laplace continued fraction for the Mills ratio in the tails.
inline long double normal_cdf(long double x) {
  const long double ax = std::fabs(x);
  if (ax <= 4.0L) {
    // erf(z) = 2/sqrt(pi) * sum (-1)^n z^{2n+1} / (n! (2n+1)), z = x/sqrt(2)
    const long double z = ax / std::sqrt(2.0L);
    long double term = z;
    long double sum = z;
    for (int n = 1; n < 200; ++n) {
      term *= -z * z / n;
      const long double add = term / (2 * n + 1);
      sum += add;
      if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
    }
    const long double erf = 2.0L / std::sqrt(M_PIl) * sum;
    const long double cdf = 0.5L * (1.0L + erf);
    return x >= 0 ? cdf : 1.0L - cdf;
  }
  // Q(ax) = phi(ax) / (ax + 1/(ax + 2/(ax + 3/(ax + ...))))
  long double cf = 0.0L;
  for (int k = 60; k >= 1; --k) cf = k / (ax + cf);
  const long double phi = std::exp(-0.5L * ax * ax) / std::sqrt(2.0L * M_PIl);
  const long double q = phi / (ax + cf);
  return x > 0 ? 1.0L - q : q;
}

// Closed-form Student-t CDFs.
inline double t_cdf_nu1(double x) { return 0.5 + std::atan(x) / M_PI; }
inline double t_cdf_nu2(double x) { return 0.5 + x / (2.0 * std::sqrt(2.0) * std::sqrt(1.0 + 0.5 * x * x)); }

// Bisection inversion of a monotone CDF on [lo, hi].
inline double bisect_quantile(const std::function<double(double)>& cdf, double p, double lo,
                              double hi, int iters = 200) {
  if (!(cdf(lo) <= p && cdf(hi) >= p)) throw std::runtime_error("bisect_quantile: bad bracket");
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct OrthantEstimate {
  double p_hat;
  double std_err;
};

// Monte Carlo estimate of P(X <= x, Y <= y) for the bivariate elliptical
// vector X = Z1/S, Y = (rho Z1 + sqrt(1-rho^2) Z2)/S, with S = 1 for the
// Gaussian case and nu S^2 ~ chi^2(nu) for the t case. Uses std:: engines
// and distributions only.
inline OrthantEstimate mc_orthant(double x, double y, double rho, double nu_or_inf, long n,
                                  unsigned long seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chisq(std::isinf(nu_or_inf) ? 1.0 : nu_or_inf);
  const double ortho = std::sqrt(1.0 - rho * rho);
  long hits = 0;
  for (long i = 0; i < n; ++i) {
    const double z1 = normal(gen);
    const double z2 = normal(gen);
    double xs = z1, ys = rho * z1 + ortho * z2;
    if (!std::isinf(nu_or_inf)) {
      const double s = std::sqrt(chisq(gen) / nu_or_inf);
      xs /= s;
      ys /= s;
    }
    if (xs <= x && ys <= y) ++hits;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(n));
  return {p, se};
}

}  // namespace oracles

#endif  // TAILMIX_TESTS_ORACLES_HPP
