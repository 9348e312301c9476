#ifndef TAILMIX_COPULA_HPP
#define TAILMIX_COPULA_HPP

#include "tailmix/types.hpp"

namespace tailmix {

// Conditional (fixed-rho) elliptical copula quantities on the diagonal.
// The |rho| = 1 boundaries short-circuit to the Frechet diagonals before any
// bivariate CDF is touched; |rho| within 1e-12 of a boundary is treated as
// the boundary to keep the quadrature away from degenerate correlation.

/// C_rho(u, u), 0 < u <= 1, -1 <= rho <= 1.
double diagonal(double u, double rho, const CopulaFamily& family);

/// Same, with the marginal quantile q of u precomputed by the caller so tail
/// sweeps pay for one quantile per u.
double diagonal_at_quantile(double q, double u, double rho, const CopulaFamily& family);

/// Coefficient of penultimate tail dependence at threshold u:
/// lambda_rho(u) = C_rho(u, u) / u, a value in [0, 1].
double penultimate_lambda(double u, double rho, const CopulaFamily& family);

/// Limiting coefficient of tail dependence. StudentT:
/// 2 t_{nu+1}(-sqrt(nu+1) sqrt(1-rho)/sqrt(1+rho)); Gaussian: 0 for rho < 1.
/// rho = 1 gives 1 for both; rho = -1 with StudentT gives the limit value 0.
double limiting_lambda(double rho, const CopulaFamily& family);

}  // namespace tailmix

#endif  // TAILMIX_COPULA_HPP
