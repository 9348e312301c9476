#ifndef TAILMIX_QUADRATURE_HPP
#define TAILMIX_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace tailmix::quad {

/// Nodes and weights of a fixed rule on its natural domain.
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule of order n on [-1, 1] (weights sum to 2).
/// Rules are computed once per order and cached.
const Rule& gauss_legendre(int n);

/// Gauss-Hermite rule of order n for weight exp(-t^2) on (-inf, inf)
/// (weights sum to sqrt(pi)). Cached per order.
const Rule& gauss_hermite(int n);

namespace detail {

// 7-point Gauss / 15-point Kronrod pair (QUADPACK dqk15 constants).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelResult {
  double kronrod;
  double err;
};

// One G7-K15 panel on [a, b] with the QUADPACK error estimate.
template <class F>
PanelResult gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);

  // Neumaier-compensated accumulation of the Kronrod sum.
  double resk = 0.0, comp = 0.0;
  auto add = [&resk, &comp](double term) {
    const double t = resk + term;
    if (std::fabs(resk) >= std::fabs(term))
      comp += (resk - t) + term;
    else
      comp += (term - t) + resk;
    resk = t;
  };
  for (int i = 0; i < 7; ++i) add(kWgk[i] * (fv[i] + fv[14 - i]));
  add(kWgk[7] * fv[7]);
  resk += comp;

  double resg = kWg[3] * fv[7];
  for (int i = 0; i < 3; ++i) resg += kWg[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);

  // Scale-aware error estimate, as in QUADPACK.
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fv[7] - mean);
  for (int i = 0; i < 7; ++i)
    resasc += kWgk[i] * (std::fabs(fv[i] - mean) + std::fabs(fv[14 - i] - mean));
  resasc *= h;

  double err = std::fabs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  return {resk * h, err};
}

template <class F>
double refine(F&& f, double a, double b, double tol, int depth) {
  const PanelResult r = gk15(f, a, b);
  if (r.err <= tol || depth >= 48) return r.kronrod;
  const double m = 0.5 * (a + b);
  return refine(f, a, m, 0.5 * tol, depth + 1) + refine(f, m, b, 0.5 * tol, depth + 1);
}

}  // namespace detail

/// Adaptive G7-K15 integration over the panels delimited by `breaks`
/// (ascending). Refines until the estimated error of each subpanel is below
/// its share of max(rel_tol * |I|, abs_floor), where I is a first-pass
/// estimate; the pass is repeated once if the estimate was badly off.
template <class F>
double integrate(F&& f, std::span<const double> breaks, double rel_tol, double abs_floor) {
  if (breaks.size() < 2) throw std::invalid_argument("quad::integrate: need >= 2 breakpoints");
  double rough = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
    rough += detail::gk15(f, breaks[i], breaks[i + 1]).kronrod;

  for (int pass = 0; pass < 3; ++pass) {
    const double tol = std::max(rel_tol * std::fabs(rough), abs_floor);
    const double per_panel = tol / static_cast<double>(breaks.size() - 1);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
      total += detail::refine(f, breaks[i], breaks[i + 1], per_panel, 0);
    // Accept unless the first-pass scale was a gross overestimate.
    if (std::fabs(total) >= 0.125 * std::fabs(rough) || std::fabs(total) <= abs_floor) return total;
    rough = total;
  }
  return rough;
}

template <class F>
double integrate(F&& f, double a, double b, double rel_tol, double abs_floor) {
  const double breaks[2] = {a, b};
  return integrate(f, std::span<const double>(breaks, 2), rel_tol, abs_floor);
}

}  // namespace tailmix::quad

#endif  // TAILMIX_QUADRATURE_HPP
