#ifndef TAILMIX_SIM_HPP
#define TAILMIX_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tailmix/mixing.hpp"
#include "tailmix/rng.hpp"
#include "tailmix/types.hpp"

namespace tailmix {

/// SCAR recursion parameters: gamma_t = alpha + beta gamma_{t-1} + sigma eps_t,
/// rho_t = tanh(gamma_t).
struct ScarParams {
  double alpha;
  double beta;   // |beta| < 1
  double sigma;  // > 0
};

/// Simulated copula observations in (0, 1)^2 with their generating seed and
/// a human-readable description of the generating law.
struct CopulaSample {
  std::vector<std::pair<double, double>> pairs;
  std::uint64_t seed = 0;
  std::string provenance;

  /// CSV `u,v` at 17 significant digits; provenance as a `#` comment line.
  void write_csv(std::ostream& os) const;
};

/// How rho values are attached to consecutive pairs when the mixing law is
/// ScarStationary: independent stationary draws, or one SCAR path.
enum class ScarSampling { Stationary, Path };

/// SCAR path of length `length`: gamma_0 from the stationary law, then the
/// recursion; returns rho_t = tanh(gamma_t). Deterministic given seed.
std::vector<double> simulate_scar_path(const ScarParams& params, std::size_t length,
                                       std::uint64_t seed);

/// One pair from the conditional copula C_rho: (X, Y) by the elliptical
/// representation X = Z1/S, Y = (rho Z1 + sqrt(1-rho^2) Z2)/S, mapped through
/// the marginal CDF. Normal and chi-square variates via inverse CDF.
std::pair<double, double> sample_conditional_pair(double rho, const CopulaFamily& family,
                                                  RngStream& rng);

/// n pairs from the mixture copula; rho_i i.i.d. from mu, or consecutive
/// SCAR path values when mu is ScarStationary and mode is Path. Pair i is a
/// pure function of (seed, i) (plus the path in Path mode), so results are
/// identical for any thread count.
CopulaSample sample_mixture(std::size_t n, const CopulaFamily& family,
                            const MixingDistribution& mu, std::uint64_t seed,
                            ScarSampling mode = ScarSampling::Stationary, int threads = 1);

/// Empirical lambda(u) = #{u_i < u and v_i < u} / #{u_i < u}. Empty
/// conditioning set yields nullopt rather than a silent 0.
std::optional<double> empirical_lambda(const CopulaSample& sample, double u);

/// Monte Carlo lambda(u) with joint/conditioning counts, streamed without
/// materializing the sample; identical draws to sample_mixture.
struct McLambda {
  std::optional<double> value;
  std::uint64_t joint = 0;
  std::uint64_t conditioning = 0;

  /// Binomial standard error of value given the conditioning count.
  double std_err() const;
};

McLambda mc_lambda(std::size_t n, const CopulaFamily& family, const MixingDistribution& mu,
                   double u, std::uint64_t seed, ScarSampling mode = ScarSampling::Stationary,
                   int threads = 1);

}  // namespace tailmix

#endif  // TAILMIX_SIM_HPP
