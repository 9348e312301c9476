#ifndef TAILMIX_MIXING_HPP
#define TAILMIX_MIXING_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace tailmix {

// Mixing laws for the random correlation rho on (-1, 1): representation,
// moments, sampling, and quadrature discretization for mixture integrals.
// The SCAR law is the stationary distribution of the Fisher-space AR(1)
// gamma_t = alpha + beta gamma_{t-1} + sigma eps_t, mapped by tanh:
// gamma ~ Normal(alpha/(1-beta), sigma^2/(1-beta^2)).

struct PointMass {
  double rho;
};

struct UniformInterval {
  double lo;
  double hi;
};

struct ScarStationary {
  double alpha;
  double beta;
  double sigma;

  double gamma_mean() const { return alpha / (1.0 - beta); }
  double gamma_sd() const;
};

struct Empirical {
  std::vector<double> samples;
};

class MixingDistribution {
 public:
  using Variant = std::variant<PointMass, UniformInterval, ScarStationary, Empirical>;

  static MixingDistribution point_mass(double rho);
  static MixingDistribution uniform_interval(double lo, double hi);
  static MixingDistribution scar_stationary(double alpha, double beta, double sigma);
  static MixingDistribution empirical(std::vector<double> samples);

  const Variant& variant() const { return v_; }
  std::string describe() const;

 private:
  explicit MixingDistribution(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Discretization of integrals against a mixing law: nodes in (-1, 1) and
/// positive weights summing to 1.
struct WeightedNodes {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// E[rho] under mu.
double mean_correlation(const MixingDistribution& mu);

/// alpha such that the SCAR-stationary mean correlation equals target, found
/// by a bracketing root search; |target| < 1.
double solve_alpha_for_mean(double target, double beta, double sigma);

/// Quadrature rule for integrals against mu: a single node for PointMass,
/// Gauss-Legendre mapped to (lo, hi) for UniformInterval, Gauss-Hermite in
/// gamma-space mapped through tanh for ScarStationary, and uniform weights
/// on the samples for Empirical (n is ignored there).
WeightedNodes quadrature_nodes(const MixingDistribution& mu, int n);

/// n i.i.d. draws of rho; deterministic given seed.
std::vector<double> sample_rho(const MixingDistribution& mu, std::size_t n, std::uint64_t seed);

}  // namespace tailmix

#endif  // TAILMIX_MIXING_HPP
