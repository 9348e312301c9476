#ifndef TAILMIX_DIST_HPP
#define TAILMIX_DIST_HPP

#include "tailmix/types.hpp"

namespace tailmix {

// Univariate and bivariate distribution primitives. All CDFs are relatively
// accurate deep into the tails (the tail-dependence sweeps probe u = 1e-10
// and below), and all functions are pure and thread-safe.

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile, 0 < p < 1.
double normal_quantile(double p);

/// log of the standard normal density.
double normal_log_pdf(double x);

/// Student-t CDF; reduces exactly to normal_cdf for infinite dof.
double t_cdf(double x, const Dof& nu);

/// Student-t quantile, 0 < p < 1; accurate for p down to 1e-12 and below.
double t_quantile(double p, const Dof& nu);

/// log density of the (univariate) Student-t; finite dof required.
double t_log_pdf(double x, const Dof& nu);

/// Chi-square CDF (regularized lower incomplete gamma); finite dof required.
double chi_square_cdf(double x, const Dof& nu);

/// Chi-square quantile, 0 <= p < 1; finite dof required.
double chi_square_quantile(double p, const Dof& nu);

/// Student-t evaluator with the log-gamma normalizations precomputed, for
/// loops that hold nu fixed (quantile transforms dominate the profile fit).
class StudentT {
 public:
  explicit StudentT(const Dof& nu);

  double nu() const { return nu_; }
  double cdf(double x) const;
  double quantile(double p) const;
  double log_pdf(double x) const;

 private:
  double nu_;
  double log_beta_;      // log B(nu/2, 1/2)
  double log_pdf_norm_;  // lgamma((nu+1)/2) - lgamma(nu/2) - log(nu pi)/2
};

/// Marginal CDF of the family: Phi for Gaussian, t_nu for StudentT.
double marginal_cdf(double x, const CopulaFamily& family);

/// Marginal quantile of the family.
double marginal_quantile(double p, const CopulaFamily& family);

/// P(X <= x, Y <= y) for the standardized bivariate normal (Gaussian family)
/// or bivariate t (StudentT family) with correlation rho in (-1, 1).
/// Computed as a single adaptive quadrature of the conditional CDF, which
/// stays relatively accurate deep in the joint tail.
double bv_elliptical_cdf(double x, double y, double rho, const CopulaFamily& family);

/// log of the standardized bivariate-t density; finite dof, |rho| < 1.
double bv_t_log_density(double x, double y, double rho, const Dof& nu);

}  // namespace tailmix

#endif  // TAILMIX_DIST_HPP
