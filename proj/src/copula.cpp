#include "tailmix/copula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tailmix/dist.hpp"

namespace tailmix {

namespace {

constexpr double kBoundaryEps = 1e-12;

void check_u(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("copula: u must be in (0, 1]");
}

// Frechet diagonals for comonotone / countermonotone correlation.
double boundary_diagonal(double u, double rho) {
  return rho > 0.0 ? u : std::max(2.0 * u - 1.0, 0.0);
}

}  // namespace

double diagonal_at_quantile(double q, double u, double rho, const CopulaFamily& family) {
  check_u(u);
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::domain_error("copula: rho must be in [-1, 1]");
  if (u == 1.0) return 1.0;
  if (std::fabs(rho) >= 1.0 - kBoundaryEps) return boundary_diagonal(u, rho);
  return bv_elliptical_cdf(q, q, rho, family);
}

double diagonal(double u, double rho, const CopulaFamily& family) {
  check_u(u);
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::domain_error("copula: rho must be in [-1, 1]");
  if (u == 1.0) return 1.0;
  if (std::fabs(rho) >= 1.0 - kBoundaryEps) return boundary_diagonal(u, rho);
  return diagonal_at_quantile(marginal_quantile(u, family), u, rho, family);
}

double penultimate_lambda(double u, double rho, const CopulaFamily& family) {
  const double value = diagonal(u, rho, family) / u;
  return std::clamp(value, 0.0, 1.0);
}

double limiting_lambda(double rho, const CopulaFamily& family) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw std::domain_error("copula: rho must be in [-1, 1]");
  if (rho >= 1.0 - kBoundaryEps) return 1.0;
  if (family.is_gaussian()) return 0.0;
  if (rho <= -1.0 + kBoundaryEps) return 0.0;  // limit value, not an error
  const double nu = family.dof().value();
  const double arg = -std::sqrt(nu + 1.0) * std::sqrt(1.0 - rho) / std::sqrt(1.0 + rho);
  return 2.0 * t_cdf(arg, Dof(nu + 1.0));
}

}  // namespace tailmix
