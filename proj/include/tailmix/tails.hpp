#ifndef TAILMIX_TAILS_HPP
#define TAILMIX_TAILS_HPP

#include <iosfwd>
#include <utility>
#include <vector>

#include "tailmix/mixing.hpp"
#include "tailmix/types.hpp"

namespace tailmix {

// Tail quantities of the correlation-mixture copula
// C(u, v) = int C_rho(u, v) mu(drho): the penultimate coefficient
// lambda(u) = C(u, u)/u, its limit lambda, the second-order expansion
// lambda(u) = lambda + gamma u^{2/nu}, the inverse-chi tail expansion behind
// it, and the regression estimator of the Ledford-Tawn index eta.

/// Ordered tail-dependence curve: (u, lambda(u)) with u strictly decreasing.
class TailCurve {
 public:
  TailCurve(std::vector<std::pair<double, double>> points);

  const std::vector<std::pair<double, double>>& points() const { return points_; }

  /// CSV with header `u,lambda_u`, 17 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  std::vector<std::pair<double, double>> points_;
};

/// Constants of the second-order expansion for a t-family mixture.
struct ExpansionConstants {
  double a_nu;          // (nu/2)^{nu/2} / Gamma(nu/2 + 1)
  double b_nu;          // (nu/2)^2 / (nu/2 + 1)
  double ez_nu;         // E[Z_+^nu] for standard normal Z
  double gamma;         // slope of the u^{2/nu} term
  double lambda_limit;  // E[lambda_{nu, rho}]
};

/// Output of the log-log regression for eta over a u-window.
struct EtaEstimate {
  double eta;
  double chi_bar;  // 2 eta - 1
  double u_lower;
  double u_upper;
  double slope;
  double r_squared;
};

/// Exact tail probability Pr(S^{-1} > z), its second-order expansion
/// a_nu z^{-nu} (1 - b_nu z^{-2}), and the proof's remainder bound
/// c_nu z^{-nu-4}.
struct InvChiTail {
  double exact;
  double expansion;
  double delta_bound;
};

/// C(u, u) of the mixture copula by quadrature over the mixing law.
double mixture_diagonal(double u, const CopulaFamily& family, const MixingDistribution& mu);

/// lambda(u) = C(u, u) / u, in [0, 1].
double mixture_penultimate_lambda(double u, const CopulaFamily& family,
                                  const MixingDistribution& mu);

/// lambda = E[lambda_{nu, rho}]; exactly 0 for the Gaussian family when mu
/// puts no mass at rho = 1.
double mixture_limiting_lambda(const CopulaFamily& family, const MixingDistribution& mu);

/// Expansion constants for a t(nu) mixture over mu.
ExpansionConstants expansion_constants(const Dof& nu, const MixingDistribution& mu);

/// lambda_limit + gamma * u^{2/nu}.
double expansion_lambda(double u, const ExpansionConstants& constants, const Dof& nu);

/// Inverse-chi tail: exact value, expansion, and remainder bound at z.
InvChiTail inv_chi_tail(double z, const Dof& nu);

/// OLS of log lambda(u) on log u over curve points with u in
/// [u_lower, u_upper]; requires >= 10 in-window points with lambda > 0.
/// eta = 1 / (1 + slope), chi_bar = 2 eta - 1.
EtaEstimate estimate_eta(const TailCurve& curve, double u_lower, double u_upper);

/// Pointwise mixture lambda(u) over a strictly decreasing grid. Grid points
/// are independent, so evaluation parallelizes with bit-identical results
/// for any thread count.
TailCurve tail_curve(const CopulaFamily& family, const MixingDistribution& mu,
                     const std::vector<double>& u_grid, int threads = 1);

/// Log-spaced grid from u_hi down to u_lo with `per_decade` points per
/// decade (endpoints included).
std::vector<double> log_grid(double u_hi, double u_lo, int per_decade);

}  // namespace tailmix

#endif  // TAILMIX_TAILS_HPP
