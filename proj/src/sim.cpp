#include "tailmix/sim.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "tailmix/dist.hpp"
#include "tailmix/parallel.hpp"

namespace tailmix {

namespace {

// Streams 0..n-1 belong to pairs; high-bit streams are reserved for
// sequential draws such as the SCAR path.
constexpr std::uint64_t kPathStream = 0x8000000000000001ull;

void check_scar(const ScarParams& p) {
  if (!(std::fabs(p.beta) < 1.0)) throw std::domain_error("ScarParams: |beta| < 1 required");
  if (!(p.sigma > 0.0)) throw std::domain_error("ScarParams: sigma > 0 required");
}

double draw_rho(const MixingDistribution& mu, RngStream& rng) {
  return std::visit(
      [&rng](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PointMass>) {
          return m.rho;
        } else if constexpr (std::is_same_v<T, UniformInterval>) {
          return m.lo + (m.hi - m.lo) * rng.next_uniform();
        } else if constexpr (std::is_same_v<T, ScarStationary>) {
          return std::tanh(m.gamma_mean() + m.gamma_sd() * normal_quantile(rng.next_uniform()));
        } else {
          const std::size_t idx = std::min<std::size_t>(
              m.samples.size() - 1,
              static_cast<std::size_t>(rng.next_uniform() * m.samples.size()));
          return m.samples[idx];
        }
      },
      mu.variant());
}

}  // namespace

void CopulaSample::write_csv(std::ostream& os) const {
  os << "# " << provenance << "\n";
  os << "u,v\n";
  char buf[80];
  for (const auto& [u, v] : pairs) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", u, v);
    os << buf;
  }
}

std::vector<double> simulate_scar_path(const ScarParams& params, std::size_t length,
                                       std::uint64_t seed) {
  check_scar(params);
  if (length < 1) throw std::domain_error("simulate_scar_path: length must be >= 1");

  auto rng = RngStream::keyed(seed, kPathStream);
  const double mean = params.alpha / (1.0 - params.beta);
  const double sd = params.sigma / std::sqrt((1.0 - params.beta) * (1.0 + params.beta));

  std::vector<double> rho(length);
  double gamma = mean + sd * normal_quantile(rng.next_uniform());
  rho[0] = std::tanh(gamma);
  for (std::size_t t = 1; t < length; ++t) {
    gamma = params.alpha + params.beta * gamma + params.sigma * normal_quantile(rng.next_uniform());
    rho[t] = std::tanh(gamma);
  }
  return rho;
}

std::pair<double, double> sample_conditional_pair(double rho, const CopulaFamily& family,
                                                  RngStream& rng) {
  if (!(rho >= -1.0 && rho <= 1.0))
    throw std::domain_error("sample_conditional_pair: rho must be in [-1, 1]");
  const double z1 = normal_quantile(rng.next_uniform());
  const double z2 = normal_quantile(rng.next_uniform());
  double x = z1;
  double y = rho * z1 + std::sqrt(std::max(0.0, (1.0 - rho) * (1.0 + rho))) * z2;
  if (!family.is_gaussian()) {
    const double nu = family.dof().value();
    const double s = std::sqrt(chi_square_quantile(rng.next_uniform(), family.dof()) / nu);
    x /= s;
    y /= s;
  }
  return {marginal_cdf(x, family), marginal_cdf(y, family)};
}

CopulaSample sample_mixture(std::size_t n, const CopulaFamily& family,
                            const MixingDistribution& mu, std::uint64_t seed, ScarSampling mode,
                            int threads) {
  if (n < 1) throw std::domain_error("sample_mixture: n must be >= 1");

  const ScarStationary* scar = std::get_if<ScarStationary>(&mu.variant());
  if (mode == ScarSampling::Path && scar == nullptr)
    throw std::invalid_argument("sample_mixture: path mode requires a ScarStationary mixing law");

  std::vector<double> path;
  if (mode == ScarSampling::Path)
    path = simulate_scar_path({scar->alpha, scar->beta, scar->sigma}, n, seed);

  CopulaSample out;
  out.pairs.resize(n);
  out.seed = seed;
  out.provenance = "family=" + family.name() + " mix=" + mu.describe() +
                   " mode=" + (mode == ScarSampling::Path ? std::string("path") : "iid") +
                   " n=" + std::to_string(n) + " seed=" + std::to_string(seed);

  parallel_for(n, threads, [&](std::size_t i) {
    auto rng = RngStream::keyed(seed, i);
    const double rho = mode == ScarSampling::Path ? path[i] : draw_rho(mu, rng);
    out.pairs[i] = sample_conditional_pair(rho, family, rng);
  });
  return out;
}

std::optional<double> empirical_lambda(const CopulaSample& sample, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("empirical_lambda: u must be in (0, 1)");
  if (sample.pairs.empty()) throw std::domain_error("empirical_lambda: empty sample");
  std::uint64_t joint = 0, cond = 0;
  for (const auto& [ui, vi] : sample.pairs) {
    if (ui < u) {
      ++cond;
      if (vi < u) ++joint;
    }
  }
  if (cond == 0) return std::nullopt;
  return static_cast<double>(joint) / static_cast<double>(cond);
}

double McLambda::std_err() const {
  if (!value || conditioning == 0) return 0.0;
  const double p = *value;
  return std::sqrt(std::max(p * (1.0 - p), 1e-300) / static_cast<double>(conditioning));
}

McLambda mc_lambda(std::size_t n, const CopulaFamily& family, const MixingDistribution& mu,
                   double u, std::uint64_t seed, ScarSampling mode, int threads) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("mc_lambda: u must be in (0, 1)");
  if (n < 1) throw std::domain_error("mc_lambda: n must be >= 1");

  const ScarStationary* scar = std::get_if<ScarStationary>(&mu.variant());
  if (mode == ScarSampling::Path && scar == nullptr)
    throw std::invalid_argument("mc_lambda: path mode requires a ScarStationary mixing law");
  std::vector<double> path;
  if (mode == ScarSampling::Path)
    path = simulate_scar_path({scar->alpha, scar->beta, scar->sigma}, n, seed);

  const std::size_t chunk = 1 << 16;
  const std::size_t n_chunks = (n + chunk - 1) / chunk;
  std::vector<std::uint64_t> joint(n_chunks, 0), cond(n_chunks, 0);

  parallel_for(n_chunks, threads, [&](std::size_t c) {
    const std::size_t lo = c * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    std::uint64_t j = 0, d = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      auto rng = RngStream::keyed(seed, i);
      const double rho = mode == ScarSampling::Path ? path[i] : draw_rho(mu, rng);
      const auto [ui, vi] = sample_conditional_pair(rho, family, rng);
      if (ui < u) {
        ++d;
        if (vi < u) ++j;
      }
    }
    joint[c] = j;
    cond[c] = d;
  });

  McLambda out;
  for (std::size_t c = 0; c < n_chunks; ++c) {
    out.joint += joint[c];
    out.conditioning += cond[c];
  }
  if (out.conditioning > 0)
    out.value = static_cast<double>(out.joint) / static_cast<double>(out.conditioning);
  return out;
}

}  // namespace tailmix
