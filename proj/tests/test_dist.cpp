#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tailmix/dist.hpp"

using namespace tailmix;

TEST_CASE("normal_cdf basics and symmetry") {
  CHECK(normal_cdf(0.0) == 0.5);
  // Frozen from the long-double continued-fraction oracle: Phi(8) is one
  // minus 6.22096e-16. The complement at +8 is cancellation-limited to the
  // double spacing near 1; the symmetric lower tail carries full relative
  // accuracy.
  CHECK(std::fabs((1.0 - normal_cdf(8.0)) - 6.22096e-16) < 1.2e-16);
  CHECK(normal_cdf(-8.0) == doctest::Approx(6.22096e-16).epsilon(1e-5));
  for (double x : {0.1, 0.7, 1.5, 3.0, 5.5, 7.9}) {
    CHECK(normal_cdf(-x) == doctest::Approx(1.0 - normal_cdf(x)).epsilon(1e-14));
  }
  CHECK_THROWS_AS(normal_cdf(std::nan("")), std::domain_error);
  CHECK_THROWS_AS(normal_cdf(INFINITY), std::domain_error);
}

TEST_CASE("normal_cdf against high-precision oracle") {
  // abs <= 1e-14 on |x| <= 8, rel <= 1e-10 in the far tail.
  for (double x = -8.0; x <= 8.0; x += 0.25) {
    const double ref = static_cast<double>(oracles::normal_cdf((long double)x));
    CHECK(std::fabs(normal_cdf(x) - ref) <= 1e-14);
  }
  for (double x : {-37.0, -30.0, -20.0, -12.0, -9.0}) {
    const long double ref = oracles::normal_cdf((long double)x);
    CHECK(std::fabs(normal_cdf(x) / (double)ref - 1.0) <= 1e-10);
  }
}

TEST_CASE("normal_quantile round trip and frozen oracle values") {
  CHECK(normal_quantile(0.5) == 0.0);
  // Frozen via bisection on the oracle CDF.
  CHECK(normal_quantile(0.975) == doctest::Approx(1.95996).epsilon(1e-4));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.3613).epsilon(1e-3));
  for (double lp = -12.0; lp < -0.31; lp += 0.5) {
    const double p = std::pow(10.0, lp);
    CHECK(std::fabs(normal_cdf(normal_quantile(p)) - p) <= 1e-12 * std::max(p, 1e-2));
    const double pc = 1.0 - p;
    CHECK(std::fabs(normal_cdf(normal_quantile(pc)) - pc) <= 1e-12);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
}

TEST_CASE("t_cdf closed forms at nu = 1, 2 and symmetry") {
  const Dof nu1(1.0), nu2(2.0);
  CHECK(t_cdf(0.0, nu1) == 0.5);
  CHECK(t_cdf(0.0, Dof(7.3)) == 0.5);
  CHECK(t_cdf(-std::sqrt(2.0), nu2) == doctest::Approx(0.14645).epsilon(1e-5));
  for (double x = -30.0; x <= 30.0; x += 1.37) {
    CHECK(t_cdf(x, nu1) == doctest::Approx(oracles::t_cdf_nu1(x)).epsilon(1e-13));
    CHECK(t_cdf(x, nu2) == doctest::Approx(oracles::t_cdf_nu2(x)).epsilon(1e-13));
  }
  // Deep tail, relative accuracy against the nu=2 closed form.
  for (double x : {-1e3, -1e5, -1e8}) {
    CHECK(t_cdf(x, nu2) == doctest::Approx(oracles::t_cdf_nu2(x)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(t_cdf(std::nan(""), nu1), std::domain_error);
}

TEST_CASE("t_cdf converges to normal_cdf as nu grows") {
  const Dof big(1e6);
  double worst = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.05) {
    worst = std::max(worst, std::fabs(t_cdf(x, big) - normal_cdf(x)));
  }
  CHECK(worst <= 1e-5);
  CHECK(t_cdf(1.3, Dof::infinite()) == normal_cdf(1.3));
}

TEST_CASE("t_quantile round trips including extreme tails") {
  CHECK(t_quantile(0.5, Dof(3.0)) == 0.0);
  CHECK(t_quantile(0.25, Dof(1.0)) == doctest::Approx(-1.0).epsilon(1e-12));

  // Frozen probe: v solves t_cdf(v, 5) = 1e-6; quantile must match bisection.
  const double v_bis = oracles::bisect_quantile(
      [](double x) { return t_cdf(x, Dof(5.0)); }, 1e-6, -1e6, 0.0);
  CHECK(t_quantile(1e-6, Dof(5.0)) == doctest::Approx(v_bis).epsilon(1e-9));
  CHECK(std::fabs(t_cdf(t_quantile(1e-6, Dof(5.0)), Dof(5.0)) / 1e-6 - 1.0) <= 1e-8);

  for (double nu : {1.0, 2.0, 3.7, 5.0, 12.0, 120.0, 400.0}) {
    const Dof d(nu);
    for (double lp = -12.0; lp < -0.31; lp += 0.25) {
      const double p = std::pow(10.0, lp);
      CHECK(std::fabs(t_cdf(t_quantile(p, d), d) / p - 1.0) <= 1e-11);
      const double pc = 1.0 - p;
      CHECK(std::fabs(t_cdf(t_quantile(pc, d), d) - pc) <= 1e-11);
    }
  }
  CHECK_THROWS_AS(t_quantile(1.0, Dof(2.0)), std::domain_error);
}

TEST_CASE("quantile-cdf identity on a log-spaced grid (normal and t)") {
  for (double lp = -12.0; lp <= -0.4; lp += 0.1) {
    const double p = std::pow(10.0, lp);
    CHECK(std::fabs(normal_cdf(normal_quantile(p)) / p - 1.0) <= 1e-11);
    CHECK(std::fabs(t_cdf(t_quantile(p, Dof(4.0)), Dof(4.0)) / p - 1.0) <= 1e-11);
  }
}

TEST_CASE("chi_square_cdf closed form at nu = 2") {
  const Dof nu2(2.0);
  CHECK(chi_square_cdf(0.0, nu2) == 0.0);
  CHECK(chi_square_cdf(0.0, Dof(7.0)) == 0.0);
  for (double x = 0.1; x < 30.0; x += 0.7) {
    CHECK(chi_square_cdf(x, nu2) == doctest::Approx(1.0 - std::exp(-0.5 * x)).epsilon(1e-13));
  }
  CHECK(chi_square_cdf(2.0 * std::log(2.0), nu2) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK_THROWS_AS(chi_square_cdf(-0.1, nu2), std::domain_error);
  CHECK_THROWS_AS(chi_square_cdf(1.0, Dof::infinite()), std::domain_error);
}

TEST_CASE("chi_square_quantile round trip") {
  for (double nu : {1.0, 2.0, 5.0, 17.0, 400.0}) {
    const Dof d(nu);
    for (double lp = -12.0; lp < -0.4; lp += 0.73) {
      const double p = std::pow(10.0, lp);
      CHECK(std::fabs(chi_square_cdf(chi_square_quantile(p, d), d) / p - 1.0) <= 1e-10);
      CHECK(std::fabs(chi_square_cdf(chi_square_quantile(1.0 - p, d), d) - (1.0 - p)) <= 1e-11);
    }
  }
}

TEST_CASE("bv_elliptical_cdf Gaussian median orthant closed form") {
  const auto gauss = CopulaFamily::gaussian();
  CHECK(bv_elliptical_cdf(0.0, 0.0, 0.0, gauss) == doctest::Approx(0.25).epsilon(1e-12));
  for (double rho : {-0.95, -0.5, -0.1, 0.3, 0.7, 0.99}) {
    const double expect = 0.25 + std::asin(rho) / (2.0 * M_PI);
    CHECK(bv_elliptical_cdf(0.0, 0.0, rho, gauss) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("bv_elliptical_cdf marginal reduction and monotonicity") {
  const auto gauss = CopulaFamily::gaussian();
  const auto t3 = CopulaFamily::student_t(3.0);
  const double inf = INFINITY;
  for (double x : {-3.0, -0.5, 1.2}) {
    CHECK(std::fabs(bv_elliptical_cdf(x, inf, 0.4, gauss) - normal_cdf(x)) <= 1e-10);
    CHECK(std::fabs(bv_elliptical_cdf(x, inf, -0.3, t3) - t_cdf(x, Dof(3.0))) <= 1e-10);
  }
  // Monotone in x, y, rho.
  double prev = 0.0;
  for (double x = -4.0; x <= 2.0; x += 0.5) {
    const double v = bv_elliptical_cdf(x, 0.7, 0.5, t3);
    CHECK(v >= prev);
    prev = v;
  }
  prev = 0.0;
  for (double rho = -0.9; rho <= 0.9; rho += 0.1) {
    const double v = bv_elliptical_cdf(-1.0, -1.0, rho, gauss);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(bv_elliptical_cdf(0.0, 0.0, 1.0, gauss), std::domain_error);
  CHECK_THROWS_AS(bv_elliptical_cdf(0.0, 0.0, -1.0, t3), std::domain_error);
}

TEST_CASE("bv_elliptical_cdf deep-tail consistency with nu=2 diagonal closed form" *
          doctest::description("C(q,q) stays a valid probability deep in the joint tail")) {
  // Lower bound max(2u-1,0) <= C <= u and positivity far out.
  const auto t2 = CopulaFamily::student_t(2.0);
  for (double u : {1e-4, 1e-7, 1e-10}) {
    const double q = t_quantile(u, Dof(2.0));
    const double c = bv_elliptical_cdf(q, q, 0.5, t2);
    CHECK(c > 0.0);
    CHECK(c <= u * 1.0000001);
  }
}

TEST_CASE("bv_elliptical_cdf matches Monte Carlo orthant probabilities") {
  // 20 random tuples, 1e7 draws each, 3 binomial standard errors.
  std::mt19937_64 gen(20260809ull);
  std::uniform_real_distribution<double> ux(-2.0, 2.0);
  std::uniform_real_distribution<double> urho(-0.9, 0.9);
  std::uniform_int_distribution<int> unu(0, 3);
  const double nus[4] = {2.0, 5.0, 10.0, INFINITY};
  const long n = 10'000'000;
  for (int k = 0; k < 20; ++k) {
    const double x = ux(gen), y = ux(gen), rho = urho(gen);
    const double nu = nus[unu(gen)];
    const auto fam =
        std::isinf(nu) ? CopulaFamily::gaussian() : CopulaFamily::student_t(nu);
    const auto mc = oracles::mc_orthant(x, y, rho, nu, n, 777000 + k);
    const double v = bv_elliptical_cdf(x, y, rho, fam);
    INFO("tuple ", k, ": x=", x, " y=", y, " rho=", rho, " nu=", nu, " mc=", mc.p_hat,
         " quad=", v);
    CHECK(std::fabs(v - mc.p_hat) <= 3.0 * mc.std_err + 1e-12);
  }
}

TEST_CASE("bv_t_log_density closed-form values and exchangeability") {
  for (double rho : {-0.6, 0.0, 0.4, 0.9}) {
    for (double nu : {1.0, 3.0, 8.0}) {
      const double at_origin = bv_t_log_density(0.0, 0.0, rho, Dof(nu));
      const double expect = -std::log(2.0 * M_PI * std::sqrt(1.0 - rho * rho));
      CHECK(at_origin == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  CHECK(bv_t_log_density(0.7, -1.1, 0.3, Dof(4.0)) ==
        doctest::Approx(bv_t_log_density(-1.1, 0.7, 0.3, Dof(4.0))).epsilon(1e-15));
  CHECK_THROWS_AS(bv_t_log_density(0.0, 0.0, 1.0, Dof(4.0)), std::domain_error);
}

TEST_CASE("bv_t_density integrates to one (2-D quadrature oracle)") {
  // Probability mass of the nu=5, rho=0.35 density over [-60,60]^2 via
  // nested Simpson on a tail-stretched grid; box truncation < 1e-7.
  const Dof nu(5.0);
  const double rho = 0.35;
  auto inner = [&](double x) {
    // integrate density in y for fixed x with graded panels
    const int m = 4000;
    const double lim = 60.0;
    double sum = 0.0;
    const double h = 2.0 * lim / m;
    for (int i = 0; i <= m; ++i) {
      const double y = -lim + i * h;
      const double w = (i == 0 || i == m) ? 0.5 : 1.0;
      sum += w * std::exp(bv_t_log_density(x, y, rho, nu));
    }
    return sum * h;
  };
  const int m = 2000;
  const double lim = 60.0;
  const double h = 2.0 * lim / m;
  double total = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double x = -lim + i * h;
    const double w = (i == 0 || i == m) ? 0.5 : 1.0;
    total += w * inner(x);
  }
  total *= h;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("marginal family helpers dispatch") {
  CHECK(marginal_cdf(1.1, CopulaFamily::gaussian()) == normal_cdf(1.1));
  CHECK(marginal_cdf(1.1, CopulaFamily::student_t(6.0)) == t_cdf(1.1, Dof(6.0)));
  CHECK(marginal_quantile(0.012, CopulaFamily::gaussian()) == normal_quantile(0.012));
  CHECK(marginal_quantile(0.012, CopulaFamily::student_t(6.0)) == t_quantile(0.012, Dof(6.0)));
}

TEST_CASE("Dof ordering and validation") {
  CHECK(Dof::infinite() > Dof(1e9));
  CHECK(Dof(2.0) < Dof(3.0));
  CHECK(Dof::infinite().is_infinite());
  CHECK_THROWS_AS(Dof(0.0), std::domain_error);
  CHECK_THROWS_AS(Dof(-1.0), std::domain_error);
  CHECK_THROWS_AS(Dof::infinite().value(), std::logic_error);
  CHECK_THROWS_AS(CopulaFamily::student_t(Dof::infinite()), std::domain_error);
}
