#include "tailmix/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace tailmix::quad {

namespace {

// Legendre P_n and derivative by Newton on the Chebyshev-like initial guess
// (Numerical Recipes gauleg). Machine accurate for the orders used here.
Rule make_gauss_legendre(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) < 1e-15) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

// Symmetric tridiagonal QL with implicit shifts, rotating a single row
// vector z along (the first components of the eigenvectors are all that
// Golub-Welsch weights need). d is the diagonal, e the subdiagonal.
void tql_first_row(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  e.push_back(0.0);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    for (;;) {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= eps * dd + 1e-300) break;
      }
      if (m == l) break;
      if (iter++ == 60) throw std::runtime_error("gauss_hermite: QL failed to converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      int i = m - 1;
      for (; i >= l; --i) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      if (r == 0.0 && i >= l) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
}

// Hermite (physicists', weight exp(-t^2)) rule by Golub-Welsch: nodes are
// the eigenvalues of the Jacobi matrix (zero diagonal, offdiag sqrt(i/2)),
// weights sqrt(pi) times the squared first eigenvector components. Stable
// for any order, unlike the polynomial-recurrence Newton iteration whose
// values overflow near the extreme nodes once n is a few hundred.
Rule make_gauss_hermite(int n) {
  std::vector<double> d(n, 0.0);
  std::vector<double> e(n - 1);
  for (int i = 1; i < n; ++i) e[i - 1] = std::sqrt(0.5 * i);
  std::vector<double> z(n, 0.0);
  z[0] = 1.0;
  tql_first_row(d, e, z);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) { return d[a] < d[b]; });

  const double mu0 = std::sqrt(M_PI);
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = d[order[i]];
    r.weights[i] = mu0 * z[order[i]] * z[order[i]];
  }
  return r;
}

struct RuleCache {
  std::mutex mu;
  std::map<int, Rule> rules;

  const Rule& get(int n, Rule (*make)(int)) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = rules.find(n);
    if (it == rules.end()) it = rules.emplace(n, make(n)).first;
    return it->second;
  }
};

}  // namespace

const Rule& gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
  static RuleCache cache;
  return cache.get(n, make_gauss_legendre);
}

const Rule& gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: order must be >= 1");
  static RuleCache cache;
  return cache.get(n, make_gauss_hermite);
}

}  // namespace tailmix::quad
