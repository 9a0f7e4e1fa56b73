#include "doctest.h"

#include "skmf/avm.hpp"
#include "skmf/oracle.hpp"

#include <Eigen/LU>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <random>

using namespace skmf;
using Point = AvmPoint<double>;
using rational = boost::multiprecision::cpp_rational;

namespace {

constexpr double pi = std::numbers::pi;

rational factorial(int n) {
  rational f = 1;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

rational binomial(int n, int j) { return factorial(n) / (factorial(j) * factorial(n - j)); }

// the defining alternating sum, exactly, for rational k
rational akp_exact(const rational& k, int p) {
  if (p == 0) return 1;
  rational sum = 0;
  for (int n = -p; n <= p; ++n) {
    if (n == 0) continue;
    const rational nn = rational(n) * n;
    const int sign = (n % 2 == 0) ? -1 : 1;
    sum += sign * nn / (nn + k * k) * binomial(2 * p, p + n);
  }
  const rational f = factorial(p);
  return sum / (f * f);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("chi traces") {
  CHECK(avm_chi(Point{2.0, 0.0}, 0.7) == 1.0);
  const double expected = bessel_i(0, 1.5) * std::exp(1.5);
  CHECK(avm_chi(Point{0.0, 1.5}, 0.0) == doctest::Approx(expected).epsilon(1e-14));
  for (double phi : {-3.0, -1.0, 0.4, 2.9}) {
    CHECK(avm_chi(Point{0.0, 2.5}, phi) ==
          doctest::Approx(bessel_i(0, 2.5) * std::exp(2.5 * std::cos(phi))).epsilon(1e-14));
  }
}

TEST_CASE("chi matches the periodic ODE oracle") {
  const auto ones = oracle::avm_chi_ode_oracle(Point{1.0, 0.0}, 128);
  CHECK((ones.array() - 1.0).abs().maxCoeff() < 1e-13);
  CHECK_THROWS_AS(oracle::avm_chi_ode_oracle(Point{1.0, 1.0}, 32), std::invalid_argument);

  for (double k : {0.0, 0.5, 1.0, 2.0, 4.0, -1.5}) {
    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const Point pt{k, r};
      const oracle::ChiOdeOracle<double> ode(pt);
      double worst = 0;
      for (int j = 0; j < 64; ++j) {
        const double phi = -pi + 2 * pi * j / 64.0;
        worst = std::max(worst, std::abs(avm_chi(pt, phi) - ode(phi)));
      }
      CHECK_MESSAGE(worst < 1e-9, "k=" << k << " r=" << r << " max diff " << worst);
    }
  }
}

TEST_CASE("chi ODE residual by spectral differentiation") {
  const Point pt{1.0, 1.0};
  const int m = 256;
  const auto grid = periodic_grid<double>(m);
  VectorX<double> chi(m);
  for (int j = 0; j < m; ++j) chi[j] = avm_chi(pt, grid[j]);
  const auto dchi = spectral_derivative<double>(chi);
  double worst = 0;
  for (int j = 0; j < m; ++j) worst = std::max(worst, std::abs(dchi[j] + (std::sin(grid[j]) + 1.0) * chi[j] - 1.0));
  CHECK(worst < 1e-9);
}

TEST_CASE("reflecting k reflects chi") {
  const auto plus = oracle::avm_chi_ode_oracle(Point{1.0, 1.0}, 1024);
  const auto minus = oracle::avm_chi_ode_oracle(Point{-1.0, 1.0}, 1024);
  // grid node j sits at -pi + 2 pi j/m; its mirror is node m - j (node 0 is its own mirror mod 2 pi)
  double worst = std::abs(plus[0] - minus[0]);
  for (int j = 1; j < 1024; ++j) worst = std::max(worst, std::abs(plus[j] - minus[1024 - j]));
  CHECK(worst < 1e-10);
  for (double phi : {0.3, 1.7, -2.2}) {
    CHECK(std::abs(avm_chi(Point{-2.0, 3.0}, -phi) - avm_chi(Point{2.0, 3.0}, phi)) < 1e-10);
  }
}

TEST_CASE("Fourier pairs at the traces") {
  const auto origin = avm_cs_n(Point{2.0, 0.0}, 0);
  CHECK(origin[0] == 1.0);
  CHECK(origin[1] == 0.0);
  const auto vm = avm_cs_n(Point{0.0, 2.0}, 0);
  CHECK(vm[0] == doctest::Approx(bessel_i(0, 2.0) * bessel_i(0, 2.0)).epsilon(1e-13));
  CHECK(vm[1] == 0.0);
}

TEST_CASE("Fourier pairs against quadrature of chi") {
  for (double k : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const Point pt{k, r};
      for (int n : {0, 1, 2, 5}) {
        const auto series = avm_cs_n(pt, n);
        const auto quad = oracle::cs_quadrature_oracle(pt, n, 2048);
        CHECK_MESSAGE((series - quad).cwiseAbs().maxCoeff() < 1e-10, "k=" << k << " r=" << r << " n=" << n);
      }
      // negative orders: C even, S odd
      const auto fwd = avm_cs_n(pt, 3);
      const auto back = avm_cs_n(pt, -3);
      CHECK(back[0] == fwd[0]);
      CHECK(back[1] == -fwd[1]);
    }
  }
}

TEST_CASE("power-series functionals against quadrature") {
  for (double k : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    for (double r : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      const Point pt{k, r};
      const auto f = avm_functionals(pt);
      const auto q = oracle::functionals_quadrature_oracle(pt, 2048);
      CHECK(std::abs(f.c0 - q.c0) < 1e-10);
      CHECK(std::abs(f.c1 - q.c1) < 1e-10);
      CHECK(std::abs(f.s1 - q.s1) < 1e-10);
      CHECK(std::abs(f.cal_c1 - q.cal_c1) < 1e-9);
      CHECK(std::abs(f.cal_s1 - q.cal_s1) < 1e-9);
      CHECK(std::abs(f.cal_r1 - q.cal_r1) < 1e-9);
    }
  }
}

TEST_CASE("three-term recursion between neighbouring Fourier pairs") {
  for (double k : {0.5, 1.0, 3.0}) {
    for (double r : {0.5, 1.0, 4.0}) {
      const Point pt{k, r};
      const auto hat = avm_fourier_coefficients(pt, 16);
      auto pair = [&](int n) { return FourierPair<double>(hat[n].real(), -hat[n].imag()); };
      auto perp = [](const FourierPair<double>& x) { return FourierPair<double>(-x[1], x[0]); };
      for (int n = 1; n <= 15; ++n) {
        Eigen::Matrix2d a;
        a << k, n, -n, k;
        const FourierPair<double> residual = a * pair(n) + 0.5 * r * (perp(pair(n - 1)) - perp(pair(n + 1)));
        CHECK_MESSAGE(residual.norm() < 1e-10, "k=" << k << " r=" << r << " n=" << n);
      }
    }
  }
}

TEST_CASE("telescoping sums of the normalized moduli") {
  for (double k : {0.5, 1.0, 2.0}) {
    for (double r : {0.5, 1.0, 3.0}) {
      const Point pt{k, r};
      const auto f = avm_functionals(pt);
      const auto hat = avm_fourier_coefficients(pt, 60);
      double cos_sum = 0, sin_sum = 0;
      for (int n = 1; n <= 60; ++n) {
        const double mod2 = std::norm(hat[n]) / (r * r * f.c0 * f.c0);
        cos_sum += 2.0 * n * mod2;
        sin_sum += 2.0 * k * ((n % 2 == 1) ? 1.0 : -1.0) * mod2;
      }
      CHECK(std::abs(cos_sum - f.cal_c1) < 1e-8);
      CHECK(std::abs(sin_sum - f.cal_s1) < 1e-8);
    }
  }
}

TEST_CASE("sine moment from the zeroth moment") {
  for (double k : {-2.0, 0.0, 0.5, 1.0, 3.0}) {
    for (double r : {0.2, 1.0, 2.5, 6.0}) {
      const auto f = avm_functionals(Point{k, r});
      CHECK(std::abs(f.s1 + (k / r) * (f.c0 - 1.0)) < 1e-12 * std::max(1.0, std::abs(f.s1)));
    }
  }
}

TEST_CASE("cosine moment is half the r-derivative of the zeroth") {
  const double h = 1e-5;
  for (double k : {0.0, 0.7, 2.0}) {
    for (double r : {0.3, 1.0, 3.0}) {
      const double up = avm_c0_series(Point{k, r + h}, 60).value;
      const double down = avm_c0_series(Point{k, r - h}, 60).value;
      CHECK(std::abs(0.5 * (up - down) / (2 * h) - avm_functionals(Point{k, r}).c1) < 1e-8);
    }
  }
}

TEST_CASE("zeroth moment series") {
  CHECK(avm_c0_series(Point{3.0, 0.0}, 5).value == 1.0);
  for (double r : {0.5, 2.0, 4.0}) {
    const double i0 = bessel_i(0, r);
    CHECK(std::abs(avm_c0_series(Point{0.0, r}, 40).value - i0 * i0) < 1e-12 * i0 * i0);
  }
  const auto s = avm_c0_series(Point{1.5, 2.0}, 40);
  CHECK(s.converged);
  CHECK(std::abs(s.value - oracle::functionals_quadrature_oracle(Point{1.5, 2.0}, 2048).c0) < 1e-10);
  CHECK_FALSE(avm_c0_series(Point{0.0, 30.0}, 3).converged);
  CHECK_THROWS_AS(avm_c0_series(Point{1.0, 1.0}, 0), std::invalid_argument);
}

TEST_CASE("power-series coefficients three ways") {
  CHECK(avm_akp(2.5, 0) == 1.0);
  CHECK_THROWS_AS(avm_akp(1.0, -1), std::invalid_argument);
  CHECK(std::abs(avm_akp(2.0, 3) - oracle::akp_alternating_sum(2.0L, 3)) < 1e-12);

  for (const rational& k : {rational(0), rational(1, 2), rational(1), rational(2), rational(5)}) {
    const double kd = static_cast<double>(k);
    for (int p = 0; p <= 15; ++p) {
      const double product = avm_akp(kd, p);
      const double exact = static_cast<double>(akp_exact(k, p));
      const double summed = static_cast<double>(oracle::akp_alternating_sum(static_cast<long double>(kd), p));
      const double integral = avm_akp_from_eta(kd, p);
      CHECK_MESSAGE(rel(product, exact) < 1e-13, "k=" << kd << " p=" << p);
      CHECK_MESSAGE(rel(summed, exact) < 1e-10, "k=" << kd << " p=" << p);
      CHECK_MESSAGE(rel(integral, exact) < 1e-10, "k=" << kd << " p=" << p);
    }
  }
}

TEST_CASE("coefficients at zero speed are the squared-I0 series, exactly") {
  for (int p = 0; p <= 10; ++p) {
    const rational f = factorial(p);
    const rational closed = factorial(2 * p) / (f * f * f * f);
    // Cauchy product of I_0's series with itself, coefficient of (r/2)^{2p}
    rational cauchy = 0;
    for (int j = 0; j <= p; ++j) {
      const rational a = factorial(j), b = factorial(p - j);
      cauchy += 1 / (a * a * b * b);
    }
    CHECK(cauchy == closed);
    CHECK(akp_exact(0, p) == closed);
    CHECK(avm_akp<rational>(rational(0), p) == closed);
  }
}

TEST_CASE("eta and sigma integrals") {
  const auto base = avm_eta_sigma(1.0, 0);
  CHECK(rel(base.eta, 2 * std::sinh(pi)) < 1e-12);
  CHECK_FALSE(base.sigma.has_value());
  CHECK_THROWS_AS(avm_eta_sigma(1.0, -1), std::invalid_argument);

  for (double k : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    for (int p = 1; p <= 15; ++p) {
      const auto es = avm_eta_sigma(k, p);
      CHECK_MESSAGE(rel(es.eta, avm_eta_closed_form(k, p)) < 1e-10, "k=" << k << " p=" << p);
      // the recursion runs over the product index n, ending in (p^2 + k^2)
      const double prev = avm_eta_closed_form(k, p - 1);
      CHECK(rel(es.eta, 2.0 * p * (2 * p - 1) / (4 * (p * p + k * k)) * prev) < 1e-13);
      REQUIRE(es.sigma.has_value());
      // integration by parts gives sigma = (k/p) eta
      CHECK(std::abs(*es.sigma - k / p * es.eta) < 1e-10 * std::max(1.0, es.eta));
    }
  }
  // at small r, T_1 -> k through sigma/eta: T_1(k, 0) = p sigma/eta at p = 1
  const auto first = avm_eta_sigma(1.0, 1);
  CHECK(std::abs(*first.sigma / first.eta - avm_functionals(Point{1.0, 0.0}).cal_t1) < 1e-10);
}

TEST_CASE("symmetries and signs") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> kd(-5.0, 5.0), rd(-8.0, 8.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double k = kd(gen), r = rd(gen);
    const auto f = avm_functionals(Point{k, r});
    const auto fk = avm_functionals(Point{-k, r});
    const auto fr = avm_functionals(Point{k, -r});
    auto same = [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); };
    CHECK(same(fk.c0, f.c0));
    CHECK(same(fr.c0, f.c0));
    CHECK(same(fk.c1, f.c1));
    CHECK(same(fr.c1, -f.c1));
    CHECK(same(fk.s1, -f.s1));
    CHECK(same(fr.s1, -f.s1));
    CHECK(same(fk.cal_t1, -f.cal_t1));
    CHECK(same(fr.cal_t1, f.cal_t1));
    CHECK(f.c0 >= 1.0);
    CHECK(f.c1 * r >= 0.0);
    if (k * r >= 0) CHECK(f.s1 <= 0.0);
  }
  CHECK(avm_functionals(Point{2.0, 0.0}).c0 == 1.0);
  CHECK(avm_functionals(Point{2.0, 1e-3}).c0 > 1.0);
}

TEST_CASE("limits at the origin in r") {
  const auto f = avm_functionals(Point{3.0, 0.0});
  CHECK(f.cal_c1 == doctest::Approx(1.0 / 20).epsilon(1e-15));
  CHECK(f.cal_s1 == doctest::Approx(3.0 / 20).epsilon(1e-15));
  CHECK(f.cal_t1 == doctest::Approx(3.0).epsilon(1e-15));
  const auto g = avm_functionals(Point{0.0, 0.0});
  CHECK(g.cal_c1 == 0.5);
  CHECK(g.cal_s1 == 0.0);
  CHECK(g.cal_t1 == 0.0);
  CHECK(g.cal_r1 == 0.0);
}

TEST_CASE("speed ratio decreases in r") {
  for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    CHECK(avm_functionals(Point{k, 0.0}).cal_t1 == doctest::Approx(k).epsilon(1e-15));
    double prev = k;
    for (int j = 1; j <= 200; ++j) {
      const double t = avm_functionals(Point{k, 0.05 * j}).cal_t1;
      CHECK(t < prev);
      CHECK(t > 0.0);
      prev = t;
    }
  }
}

TEST_CASE("speed ratio over k increases in k toward one") {
  for (double r : {0.5, 1.0, 3.0, 8.0}) {
    const double i0 = bessel_i(0, r), i1 = bessel_i(1, r);
    const double floor = (i0 * i0 - 1) / (r * i0 * i1);
    double prev = floor;
    CHECK(avm_functionals(Point{1e-6, r}).cal_t1 / 1e-6 == doctest::Approx(floor).epsilon(1e-8));
    for (int j = 1; j <= 200; ++j) {
      const double k = 0.05 * j;
      const double ratio = avm_functionals(Point{k, r}).cal_t1 / k;
      CHECK(ratio > prev);
      CHECK(ratio < 1.0);
      prev = ratio;
    }
  }
}

TEST_CASE("cosine functional decreases in k") {
  for (double r : {0.0, 0.5, 2.0, 6.0, 10.0}) {
    double prev = avm_functionals(Point{0.0, r}).cal_c1;
    for (int j = 1; j <= 100; ++j) {
      const double c = avm_functionals(Point{0.08 * j, r}).cal_c1;
      CHECK(c < prev);
      prev = c;
    }
  }
}

TEST_CASE("large-argument limits of the speed ratio") {
  for (double k : {0.5, 1.0, 2.0}) {
    const double at200 = 200.0 / k * avm_functionals(Point{k, 200.0}).cal_t1;
    CHECK(at200 >= 0.99);
    CHECK(at200 <= 1.01);
    // past the initial hump the approach is monotone from above
    double prev = std::numeric_limits<double>::infinity();
    for (double r = 4.0; r <= 200.0; r *= 1.25) {
      const double v = r / k * avm_functionals(Point{k, r}).cal_t1;
      CHECK(v < prev);
      CHECK(v > 1.0);
      prev = v;
    }
  }
  for (double r : {1.0, 2.0, 5.0}) {
    const double at200 = avm_functionals(Point{200.0, r}).cal_t1 / 200.0;
    CHECK(at200 >= 0.99);
    CHECK(at200 <= 1.0);
  }
}

TEST_CASE("Jacobian determinant signs") {
  const double h = 1e-5;
  auto cs = [](double k, double r) {
    const auto f = avm_functionals(Point{k, r});
    return Eigen::Vector2d(f.cal_s1, f.cal_c1);
  };
  for (double k : {0.25, 1.0, 3.0}) {
    for (double r : {0.3, 1.0, 4.0, 9.0}) {
      const Eigen::Vector2d v = cs(k, r);
      const Eigen::Vector2d dr = (cs(k, r + h) - cs(k, r - h)) / (2 * h);
      const Eigen::Vector2d dk = (cs(k + h, r) - cs(k - h, r)) / (2 * h);
      Eigen::Matrix2d m1, m2, m3;
      m1 << dr, v;
      m2 << dk, v;
      m3 << dr, dk;
      CHECK(m1.transpose().determinant() < 0);
      CHECK(m2.transpose().determinant() > 0);
      CHECK(m3.transpose().determinant() > 0);
    }
  }
}

TEST_CASE("density is normalized and satisfies the travelling-wave equation") {
  const auto uniform = avm_density(Point{0.0, 0.0});
  CHECK(uniform(1.0) == doctest::Approx(1.0 / (2 * pi)).epsilon(1e-15));

  const auto vm = avm_density(Point{0.0, 2.0});
  for (double phi : {-2.0, 0.0, 1.3}) {
    CHECK(vm(phi) == doctest::Approx(std::exp(2 * std::cos(phi)) / (2 * pi * bessel_i(0, 2.0))).epsilon(1e-13));
  }

  for (const Point pt : {Point{1.0, 1.0}, Point{2.0, 5.0}, Point{-0.5, 3.0}}) {
    const auto rho = avm_density(pt);
    const double mass = periodic_mean<double>([&](double phi) { return rho(phi); }, 1024) * 2 * pi;
    CHECK(std::abs(mass - 1.0) < 1e-10);
    CHECK(travelling_wave_residual(rho, 1024) < 1e-9);
    CHECK(rho.sample(256).minCoeff() > 0.0);
    // the two expressions for the flux constant
    const double mean_sin = periodic_mean<double>([&](double phi) { return std::sin(phi) * rho(phi); }, 1024) * 2 * pi;
    CHECK(std::abs(rho.flux_constant() - (pt.r * mean_sin + pt.k) / (2 * pi)) < 1e-10);
  }
}
