#include "tailmix/tails.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "tailmix/copula.hpp"
#include "tailmix/dist.hpp"
#include "tailmix/parallel.hpp"
#include "tailmix/special.hpp"

namespace tailmix {

namespace {

// Adaptive order ladder for mixture integrals. The stop threshold is tighter
// than strictly needed for curve plotting because the Prop.-3 residual
// checks divide lambda(u) errors by u^{2/nu}, which at u = 1e-8, nu = 2
// leaves an absolute budget of ~1e-10. Gauss-Legendre needs large orders for
// uniform laws reaching rho = 1 (square-root endpoint behavior of the
// integrand); Gauss-Hermite integrands are analytic through tanh and
// converge at far lower orders.
constexpr int kFirstOrder = 64;
constexpr int kMaxOrderLegendre = 16384;
constexpr int kMaxOrderHermite = 4096;
constexpr double kStopTol = 1e-12;

template <class PerRho>
double mixture_integral(const MixingDistribution& mu, PerRho&& lambda_of_rho) {
  const auto eval = [&](int n) {
    const WeightedNodes wn = quadrature_nodes(mu, n);
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < wn.nodes.size(); ++i) {
      const double term = wn.weights[i] * lambda_of_rho(wn.nodes[i]);
      const double t = sum + term;
      if (std::fabs(sum) >= std::fabs(term))
        comp += (sum - t) + term;
      else
        comp += (term - t) + sum;
      sum = t;
    }
    return sum + comp;
  };

  // Degenerate discretizations are exact at any order.
  const auto& v = mu.variant();
  if (std::holds_alternative<PointMass>(v) || std::holds_alternative<Empirical>(v))
    return eval(kFirstOrder);

  const int max_order =
      std::holds_alternative<ScarStationary>(v) ? kMaxOrderHermite : kMaxOrderLegendre;
  double prev = eval(kFirstOrder);
  for (int n = 2 * kFirstOrder; n <= max_order; n *= 2) {
    const double cur = eval(n);
    if (std::fabs(cur - prev) < kStopTol) return cur;
    prev = cur;
  }
  return prev;
}

void check_u(double u) {
  if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("tails: u must be in (0, 1]");
}

double pow_half_nu(double nu) { return std::pow(0.5 * nu, 0.5 * nu); }

}  // namespace

TailCurve::TailCurve(std::vector<std::pair<double, double>> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& [u, lam] = points_[i];
    if (!(u > 0.0 && u <= 1.0)) throw std::domain_error("TailCurve: u must be in (0, 1]");
    if (!(lam >= 0.0 && lam <= 1.0)) throw std::domain_error("TailCurve: lambda must be in [0, 1]");
    if (i > 0 && !(u < points_[i - 1].first))
      throw std::domain_error("TailCurve: u must be strictly decreasing");
  }
}

void TailCurve::write_csv(std::ostream& os) const {
  os << "u,lambda_u\n";
  char buf[80];
  for (const auto& [u, lam] : points_) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", u, lam);
    os << buf;
  }
}

double mixture_diagonal(double u, const CopulaFamily& family, const MixingDistribution& mu) {
  check_u(u);
  if (u == 1.0) return 1.0;
  const double q = marginal_quantile(u, family);
  return mixture_integral(
      mu, [&](double rho) { return diagonal_at_quantile(q, u, rho, family); });
}

double mixture_penultimate_lambda(double u, const CopulaFamily& family,
                                  const MixingDistribution& mu) {
  const double value = mixture_diagonal(u, family, mu) / u;
  return std::clamp(value, 0.0, 1.0);
}

double mixture_limiting_lambda(const CopulaFamily& family, const MixingDistribution& mu) {
  if (family.is_gaussian()) {
    // lambda_rho = 0 for every rho < 1; only an atom at rho = 1 contributes.
    if (const auto* pm = std::get_if<PointMass>(&mu.variant()); pm && pm->rho == 1.0) return 1.0;
    return 0.0;
  }
  return mixture_integral(mu, [&](double rho) { return limiting_lambda(rho, family); });
}

ExpansionConstants expansion_constants(const Dof& nu, const MixingDistribution& mu) {
  if (nu.is_infinite()) throw std::domain_error("expansion_constants: finite nu required");
  const double v = nu.value();
  ExpansionConstants c{};
  c.a_nu = pow_half_nu(v) / std::exp(special::log_gamma(0.5 * v + 1.0));
  c.b_nu = (0.5 * v) * (0.5 * v) / (0.5 * v + 1.0);
  c.ez_nu = std::exp((0.5 * v - 1.0) * std::log(2.0) - 0.5 * std::log(M_PI) +
                     special::log_gamma(0.5 * (v + 1.0)));
  const auto fam_nu = CopulaFamily::student_t(v);
  const auto fam_nu2 = CopulaFamily::student_t(v + 2.0);
  const double mean_drop = mixture_integral(mu, [&](double rho) {
    return limiting_lambda(rho, fam_nu) - limiting_lambda(rho, fam_nu2);
  });
  c.gamma = std::pow(c.a_nu * c.ez_nu, -2.0 / v) * c.b_nu * (v + 1.0) * mean_drop;
  c.lambda_limit = mixture_limiting_lambda(fam_nu, mu);
  return c;
}

double expansion_lambda(double u, const ExpansionConstants& constants, const Dof& nu) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("expansion_lambda: u must be in (0, 1)");
  return constants.lambda_limit + constants.gamma * std::pow(u, 2.0 / nu.value());
}

InvChiTail inv_chi_tail(double z, const Dof& nu) {
  if (!(z > 0.0)) throw std::domain_error("inv_chi_tail: z must be > 0");
  if (nu.is_infinite()) throw std::domain_error("inv_chi_tail: finite nu required");
  const double v = nu.value();
  InvChiTail out{};
  out.exact = chi_square_cdf(v / (z * z), nu);
  const double a_nu = pow_half_nu(v) / std::exp(special::log_gamma(0.5 * v + 1.0));
  const double b_nu = (0.5 * v) * (0.5 * v) / (0.5 * v + 1.0);
  out.expansion = a_nu * std::pow(z, -v) * (1.0 - b_nu / (z * z));
  // c_nu = (nu/2)^{nu/2+2} / (2 Gamma(nu/2) (nu/2+2)), from integrating the
  // series remainder y^{nu/2-1} (y/2)^2 / 2 up to nu z^{-2}.
  const double c_nu = std::pow(0.5 * v, 0.5 * v + 2.0) /
                      (2.0 * std::exp(special::log_gamma(0.5 * v)) * (0.5 * v + 2.0));
  out.delta_bound = c_nu * std::pow(z, -v - 4.0);
  return out;
}

EtaEstimate estimate_eta(const TailCurve& curve, double u_lower, double u_upper) {
  if (!(u_lower > 0.0 && u_lower < u_upper))
    throw std::domain_error("estimate_eta: need 0 < u_lower < u_upper");

  std::vector<double> lx, ly;
  for (const auto& [u, lam] : curve.points()) {
    if (u < u_lower || u > u_upper) continue;
    if (!(lam > 0.0)) throw std::domain_error("estimate_eta: nonpositive lambda in window");
    lx.push_back(std::log(u));
    ly.push_back(std::log(lam));
  }
  if (lx.size() < 10)
    throw std::runtime_error("estimate_eta: fewer than 10 curve points in window");

  const std::size_t n = lx.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;

  EtaEstimate est{};
  est.slope = slope;
  est.eta = 1.0 / (1.0 + slope);
  est.chi_bar = 2.0 * est.eta - 1.0;
  est.u_lower = u_lower;
  est.u_upper = u_upper;
  est.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return est;
}

TailCurve tail_curve(const CopulaFamily& family, const MixingDistribution& mu,
                     const std::vector<double>& u_grid, int threads) {
  for (std::size_t i = 0; i + 1 < u_grid.size(); ++i)
    if (!(u_grid[i] > u_grid[i + 1]))
      throw std::domain_error("tail_curve: u grid must be strictly decreasing");

  std::vector<std::pair<double, double>> pts(u_grid.size());
  parallel_for(u_grid.size(), threads, [&](std::size_t i) {
    pts[i] = {u_grid[i], mixture_penultimate_lambda(u_grid[i], family, mu)};
  });
  return TailCurve(std::move(pts));
}

std::vector<double> log_grid(double u_hi, double u_lo, int per_decade) {
  if (!(u_lo > 0.0 && u_lo < u_hi && u_hi <= 1.0))
    throw std::domain_error("log_grid: need 0 < u_lo < u_hi <= 1");
  if (per_decade < 1) throw std::domain_error("log_grid: per_decade must be >= 1");
  const double lh = std::log10(u_hi);
  const double ll = std::log10(u_lo);
  const int steps = static_cast<int>(std::ceil((lh - ll) * per_decade - 1e-9));
  std::vector<double> grid;
  grid.reserve(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    const double frac = static_cast<double>(i) / steps;
    grid.push_back(std::pow(10.0, lh + (ll - lh) * frac));
  }
  return grid;
}

}  // namespace tailmix
