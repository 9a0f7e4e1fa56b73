#include "doctest.h"

#include "skmf/consistency.hpp"
#include "skmf/oracle.hpp"
#include "skmf/roots.hpp"

#include <cmath>
#include <numbers>

using namespace skmf;

namespace {

constexpr double pi = std::numbers::pi;

// plain bisection, for oracles
template <typename F>
double bisect(F&& f, double lo, double hi) {
  double f_lo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if ((f_mid > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double quadrature_residual(const BranchPoint& p) {
  const auto q = oracle::functionals_quadrature_oracle(AvmPoint<double>{p.k, p.r}, 2048);
  return std::max(std::abs(q.cal_t1 - std::tan(p.alpha)), std::abs(std::hypot(q.cal_c1, q.cal_s1) - 1 / std::abs(p.mu)));
}

}  // namespace

TEST_CASE("bracketed root finder") {
  auto cubic = [](double x) { return x * x * x - 2 * x - 5; };
  const auto root = bracketed_root<double>(cubic, 2.0, 3.0, cubic(2.0), cubic(3.0), 1e-14);
  CHECK(root.x == doctest::Approx(2.0945514815423265).epsilon(1e-14));
  CHECK(root.iterations < 30);
  // a badly scaled function still converges through the bisection fallback
  auto steep = [](double x) { return std::exp(40 * x) - 2; };
  const auto s = bracketed_root<double>(steep, -1.0, 1.0, steep(-1.0), steep(1.0), 1e-13);
  CHECK(s.x == doctest::Approx(std::log(2.0) / 40).epsilon(1e-12));
  CHECK_THROWS_AS(bracketed_root<double>(cubic, 3.0, 4.0, cubic(3.0), cubic(4.0), 1e-14), SolverError);
  const auto exact = bracketed_root<double>(cubic, 0.0, 1.0, 0.0, 1.0, 1e-14);
  CHECK(exact.x == 0.0);
}

TEST_CASE("bifurcation point") {
  const auto zero = bifurcation_point(0.0);
  CHECK(zero.mu == 2.0);
  CHECK(zero.k == 0.0);
  const auto sixth = bifurcation_point(pi / 6);
  CHECK(sixth.mu == doctest::Approx(4 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(sixth.k == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  const auto flat = bifurcation_point(pi);
  CHECK(flat.mu == -2.0);
  CHECK(flat.k == 0.0);
  CHECK_THROWS_AS(bifurcation_point(pi / 2), DegenerateAngle);
  CHECK_THROWS_AS(bifurcation_point(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(bifurcation_point(4.0), std::invalid_argument);
}

TEST_CASE("wave speed at fixed amplitude") {
  CHECK(solve_k_given_r(0.0, 3.0) == 0.0);
  CHECK(solve_k_given_r(pi / 6, 0.0) == doctest::Approx(std::tan(pi / 6)).epsilon(1e-15));
  CHECK(std::abs(solve_k_given_r(pi / 6, 1e-6) - std::tan(pi / 6)) < 1e-9);

  // oracle: bisection on the quadrature form of T_1
  const double target = std::tan(pi / 6);
  const double oracle_k = bisect(
      [&](double k) { return oracle::functionals_quadrature_oracle(AvmPoint<double>{k, 1.0}, 2048).cal_t1 - target; },
      target, 2.0);
  int iterations = 0;
  const double k = solve_k_given_r(pi / 6, 1.0, &iterations);
  CHECK(std::abs(k - oracle_k) < 1e-10);
  CHECK(k == doctest::Approx(0.6751).epsilon(1e-4));
  CHECK(iterations > 0);
  CHECK(iterations < 60);

  for (double alpha : {0.1, pi / 4, 1.3, 1.55}) {
    for (double r : {0.01, 0.5, 3.0, 20.0}) {
      const double kk = solve_k_given_r(alpha, r);
      const double t1 = avm_functionals(AvmPoint<double>{kk, r}).cal_t1;
      CHECK(std::abs(t1 - std::tan(alpha)) < 1e-12 * std::max(1.0, std::tan(alpha)));
      CHECK(kk > std::tan(alpha));
    }
  }
  CHECK_THROWS_AS(solve_k_given_r(pi / 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_k_given_r(2.0, 1.0), std::invalid_argument);
}

TEST_CASE("coupling along the branch") {
  for (double alpha : {0.0, pi / 6, pi / 4, pi / 3}) {
    CHECK(mu_on_branch(alpha, 0.0) == doctest::Approx(2 / std::cos(alpha)).epsilon(1e-14));
    CHECK(std::abs(mu_on_branch(alpha, 1e-4) / (2 / std::cos(alpha)) - 1) < 1e-3);
  }
  for (double r : {0.5, 2.0, 7.0}) {
    CHECK(mu_on_branch(0.0, r) == doctest::Approx(r * bessel_i(0, r) / bessel_i(1, r)).epsilon(1e-13));
  }
  const double mu = mu_on_branch(pi / 6, 1.0);
  CHECK(mu > 4 / std::sqrt(3.0));
  CHECK(mu == doctest::Approx(2.5619).epsilon(1e-4));
  CHECK(mu_on_branch(pi / 6, 2.0) == doctest::Approx(3.1931).epsilon(1e-4));
}

TEST_CASE("solving below and above onset") {
  CHECK_FALSE(solve_selfconsistency(2.0, pi / 6).has_value());
  CHECK_FALSE(solve_selfconsistency(bifurcation_point(pi / 6).mu, pi / 6).has_value());
  CHECK_FALSE(solve_selfconsistency(-1.0, 0.3).has_value());
  CHECK_FALSE(solve_selfconsistency(100.0, pi / 2).has_value());

  const auto vm = solve_selfconsistency(4.0, 0.0);
  REQUIRE(vm.has_value());
  CHECK(vm->k == 0.0);
  const double oracle_r =
      bisect([](double r) { return bessel_i(1, r) / (r * bessel_i(0, r)) - 0.25; }, 0.1, 20.0);
  CHECK(vm->r == doctest::Approx(oracle_r).epsilon(1e-12));

  const auto p = solve_selfconsistency(3.0, pi / 6);
  REQUIRE(p.has_value());
  CHECK(p->k > 1 / std::sqrt(3.0));
  CHECK(p->residual < 1e-10);
  CHECK(quadrature_residual(*p) < 1e-10);
  CHECK(p->r == doctest::Approx(1.732683).epsilon(1e-6));
  CHECK(p->k == doctest::Approx(0.857725).epsilon(1e-6));
  const auto density = avm_density(AvmPoint<double>{p->k, p->r});
  CHECK(std::abs(p->c - density.flux_constant()) < 1e-15);
  CHECK(travelling_wave_residual(density, 1024) < 1e-8);

  // both printed expressions for the flux constant
  const double mean_sin = periodic_mean<double>([&](double phi) { return std::sin(phi) * density(phi); }, 2048) * 2 * pi;
  CHECK(std::abs(p->c - (p->r * mean_sin + p->k) / (2 * pi)) < 1e-10);

  for (double mu : {2.5, 5.0, 20.0, 80.0}) {
    for (double alpha : {0.0, 0.2, pi / 4, 1.2}) {
      const auto q = solve_selfconsistency(mu, alpha);
      if (mu <= 2 / std::cos(alpha)) {
        CHECK_FALSE(q.has_value());
        continue;
      }
      REQUIRE(q.has_value());
      CHECK(q->residual < 1e-10);
      CHECK(q->r > 0);
      if (alpha > 0) CHECK(q->k > std::tan(alpha));
    }
  }
}

TEST_CASE("obtuse angles mirror acute ones") {
  for (double alpha : {pi / 6, pi / 3}) {
    for (double mu : {5.0, 8.0}) {
      const auto acute = solve_selfconsistency(mu, alpha);
      const auto obtuse = solve_selfconsistency(-mu, pi - alpha);
      REQUIRE(acute.has_value());
      REQUIRE(obtuse.has_value());
      CHECK(obtuse->mu == -mu);
      CHECK(obtuse->alpha == pi - alpha);
      // pi - (pi - alpha) need not round-trip exactly
      CHECK(obtuse->k == doctest::Approx(-acute->k).epsilon(1e-12));
      CHECK(obtuse->r == doctest::Approx(acute->r).epsilon(1e-12));
      CHECK(obtuse->c == doctest::Approx(-acute->c).epsilon(1e-12));
      CHECK(obtuse->residual < 1e-10);
    }
  }
  const auto flat = solve_selfconsistency(-4.0, pi);
  REQUIRE(flat.has_value());
  CHECK(flat->k == 0.0);
  CHECK_FALSE(solve_selfconsistency(-1.0, pi).has_value());
  // past pi/2 a wave needs mu < 2 sec(alpha), which is negative
  CHECK_FALSE(solve_selfconsistency(1.0, 2.5).has_value());
}

TEST_CASE("exactly one solution amplitude at fixed coupling") {
  for (double mu : {2.5, 3.0, 6.0}) {
    const double alpha = pi / 6;
    if (mu <= 2 / std::cos(alpha)) continue;
    int sign_changes = 0;
    double prev = 0;
    for (int j = 1; j <= 400; ++j) {
      const double r = 0.05 * j;
      const double k = solve_k_given_r(alpha, r);
      const auto f = avm_functionals(AvmPoint<double>{k, r});
      const double g = std::hypot(f.cal_c1, f.cal_s1) - 1 / mu;
      if (j > 1 && (g > 0) != (prev > 0)) ++sign_changes;
      prev = g;
    }
    CHECK(sign_changes == 1);
  }
}

TEST_CASE("branch tracing") {
  const auto near = trace_branch(pi / 6, 1e-3, 2);
  REQUIRE(near.points.size() == 2);
  CHECK(std::abs(near.points.back().mu - 4 / std::sqrt(3.0)) < 1e-4);
  CHECK(std::abs(near.points.back().k - 1 / std::sqrt(3.0)) < 1e-4);
  CHECK(near.points.front().r == 0.0);

  const auto flat = trace_branch(0.0, 5.0, 50);
  REQUIRE(flat.points.size() == 50);
  CHECK_FALSE(flat.failure_index.has_value());
  for (const auto& p : flat.points) CHECK(p.k == 0.0);

  const auto steep = trace_branch(pi / 3, 8.0, 80);
  REQUIRE(steep.points.size() == 80);
  CHECK(steep.iterations.size() == 80);
  for (std::size_t j = 1; j < steep.points.size(); ++j) {
    const auto& a = steep.points[j - 1];
    const auto& b = steep.points[j];
    CHECK(b.r > a.r);
    CHECK(b.k > a.k);
    CHECK(b.mu > a.mu);
    CHECK(b.k > std::tan(pi / 3));
    CHECK(b.residual < 1e-10);
  }
  CHECK(steep.points.back().mu > 2.5 * steep.points.front().mu);

  CHECK_THROWS_AS(trace_branch(pi / 2, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(trace_branch(0.3, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(trace_branch(0.3, -1.0, 5), std::invalid_argument);
}

TEST_CASE("speed diverges as the angle approaches a right angle at proportional coupling") {
  double prev = 0;
  for (double alpha : {1.0, 1.2, 1.4, 1.5, 1.55}) {
    const auto p = solve_selfconsistency(1.5 * 2 / std::cos(alpha), alpha);
    REQUIRE(p.has_value());
    CHECK(p->k > prev);
    prev = p->k;
  }
  CHECK(prev > 40);
}

TEST_CASE("von Mises steady states") {
  CHECK_FALSE(stationary_vonmises(2.0).has_value());
  CHECK_FALSE(stationary_vonmises(1.0).has_value());
  const auto s = stationary_vonmises(4.0);
  REQUIRE(s.has_value());
  CHECK(bessel_i(1, s->r) / (s->r * bessel_i(0, s->r)) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s->density(0.0) == doctest::Approx(std::exp(s->r) / (2 * pi * bessel_i(0, s->r))).epsilon(1e-12));
  double prev = 0;
  for (double mu : {2.1, 3.0, 10.0, 50.0, 200.0}) {
    const auto v = stationary_vonmises(mu);
    REQUIRE(v.has_value());
    CHECK(v->r > prev);
    prev = v->r;
  }
}
