#include "tailmix/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tailmix/dist.hpp"
#include "tailmix/quadrature.hpp"
#include "tailmix/rng.hpp"

namespace tailmix {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrtPi = 0.5641895835477563;

double scar_mean_with_nodes(const ScarStationary& s, int n) {
  const auto& rule = quad::gauss_hermite(n);
  const double m = s.gamma_mean();
  const double sd = s.gamma_sd();
  double sum = 0.0;
  for (int i = 0; i < n; ++i)
    sum += rule.weights[i] * std::tanh(m + kSqrt2 * sd * rule.nodes[i]);
  return sum * kInvSqrtPi;
}

double scar_mean(const ScarStationary& s) {
  // GH converges geometrically for tanh; double order until stable.
  double prev = scar_mean_with_nodes(s, 64);
  for (int n = 128; n <= 2048; n *= 2) {
    const double cur = scar_mean_with_nodes(s, n);
    if (std::fabs(cur - prev) < 1e-13) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace

double ScarStationary::gamma_sd() const { return sigma / std::sqrt((1.0 - beta) * (1.0 + beta)); }

MixingDistribution MixingDistribution::point_mass(double rho) {
  if (!(rho >= -1.0 && rho <= 1.0))
    throw std::domain_error("MixingDistribution: point mass rho must be in [-1, 1]");
  return MixingDistribution(PointMass{rho});
}

MixingDistribution MixingDistribution::uniform_interval(double lo, double hi) {
  if (!(lo >= -1.0 && lo < hi && hi <= 1.0))
    throw std::domain_error("MixingDistribution: need -1 <= lo < hi <= 1");
  return MixingDistribution(UniformInterval{lo, hi});
}

MixingDistribution MixingDistribution::scar_stationary(double alpha, double beta, double sigma) {
  if (!(std::fabs(beta) < 1.0)) throw std::domain_error("MixingDistribution: |beta| < 1 required");
  if (!(sigma > 0.0)) throw std::domain_error("MixingDistribution: sigma > 0 required");
  return MixingDistribution(ScarStationary{alpha, beta, sigma});
}

MixingDistribution MixingDistribution::empirical(std::vector<double> samples) {
  if (samples.empty()) throw std::domain_error("MixingDistribution: empirical sample is empty");
  for (double r : samples)
    if (!(r > -1.0 && r < 1.0))
      throw std::domain_error("MixingDistribution: empirical entries must be in (-1, 1)");
  return MixingDistribution(Empirical{std::move(samples)});
}

std::string MixingDistribution::describe() const {
  std::ostringstream os;
  std::visit(
      [&os](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          os << "point:" << m.rho;
        } else if constexpr (std::is_same_v<T, UniformInterval>) {
          os << "uniform:" << m.lo << "," << m.hi;
        } else if constexpr (std::is_same_v<T, ScarStationary>) {
          os << "scar:alpha=" << m.alpha << ",beta=" << m.beta << ",sigma=" << m.sigma;
        } else {
          os << "empirical:n=" << m.samples.size();
        }
      },
      v_);
  return os.str();
}

double mean_correlation(const MixingDistribution& mu) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return m.rho;
        } else if constexpr (std::is_same_v<T, UniformInterval>) {
          return 0.5 * (m.lo + m.hi);
        } else if constexpr (std::is_same_v<T, ScarStationary>) {
          return scar_mean(m);
        } else {
          double sum = 0.0;
          for (double r : m.samples) sum += r;
          return sum / static_cast<double>(m.samples.size());
        }
      },
      mu.variant());
}

double solve_alpha_for_mean(double target, double beta, double sigma) {
  if (!(std::fabs(target) < 1.0))
    throw std::domain_error("solve_alpha_for_mean: |target| must be < 1");
  if (target == 0.0) return 0.0;

  const auto mean_at = [&](double alpha) {
    return scar_mean(ScarStationary{alpha, beta, sigma});
  };

  // mean is strictly increasing in alpha; expand a bracket then bisect.
  double lo = -1.0, hi = 1.0;
  for (int it = 0; it < 200 && mean_at(lo) > target; ++it) lo *= 2.0;
  for (int it = 0; it < 200 && mean_at(hi) < target; ++it) hi *= 2.0;
  if (!(mean_at(lo) <= target && mean_at(hi) >= target))
    throw std::runtime_error("solve_alpha_for_mean: no bracket found");

  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_at(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * std::max(1.0, std::fabs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

WeightedNodes quadrature_nodes(const MixingDistribution& mu, int n) {
  if (n < 1) throw std::domain_error("quadrature_nodes: n must be >= 1");
  return std::visit(
      [n](const auto& m) -> WeightedNodes {
        using T = std::decay_t<decltype(m)>;
        WeightedNodes out;
        if constexpr (std::is_same_v<T, PointMass>) {
          out.nodes = {m.rho};
          out.weights = {1.0};
        } else if constexpr (std::is_same_v<T, UniformInterval>) {
          const auto& rule = quad::gauss_legendre(n);
          out.nodes.resize(n);
          out.weights.resize(n);
          for (int i = 0; i < n; ++i) {
            out.nodes[i] = m.lo + 0.5 * (m.hi - m.lo) * (rule.nodes[i] + 1.0);
            out.weights[i] = 0.5 * rule.weights[i];
          }
        } else if constexpr (std::is_same_v<T, ScarStationary>) {
          const auto& rule = quad::gauss_hermite(n);
          const double mean = m.gamma_mean();
          const double sd = m.gamma_sd();
          out.nodes.resize(n);
          out.weights.resize(n);
          for (int i = 0; i < n; ++i) {
            out.nodes[i] = std::tanh(mean + kSqrt2 * sd * rule.nodes[i]);
            out.weights[i] = rule.weights[i] * kInvSqrtPi;
          }
        } else {
          out.nodes = m.samples;
          out.weights.assign(m.samples.size(), 1.0 / static_cast<double>(m.samples.size()));
        }
        return out;
      },
      mu.variant());
}

std::vector<double> sample_rho(const MixingDistribution& mu, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("sample_rho: n must be >= 1");
  std::vector<double> out(n);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        for (std::size_t i = 0; i < n; ++i) {
          auto rng = RngStream::keyed(seed, i);
          if constexpr (std::is_same_v<T, PointMass>) {
            out[i] = m.rho;
          } else if constexpr (std::is_same_v<T, UniformInterval>) {
            out[i] = m.lo + (m.hi - m.lo) * rng.next_uniform();
          } else if constexpr (std::is_same_v<T, ScarStationary>) {
            out[i] = std::tanh(m.gamma_mean() + m.gamma_sd() * normal_quantile(rng.next_uniform()));
          } else {
            const std::size_t idx = std::min<std::size_t>(
                m.samples.size() - 1,
                static_cast<std::size_t>(rng.next_uniform() * m.samples.size()));
            out[i] = m.samples[idx];
          }
        }
      },
      mu.variant());
  return out;
}

}  // namespace tailmix
