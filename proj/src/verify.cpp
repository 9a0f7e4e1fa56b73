#include "skmf/verify.hpp"

#include "skmf/avm.hpp"
#include "skmf/bessel.hpp"
#include "skmf/consistency.hpp"
#include "skmf/meanfield.hpp"
#include "skmf/oracle.hpp"
#include "skmf/particles.hpp"

#include <Eigen/LU>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

namespace skmf {
namespace {

constexpr double pi = std::numbers::pi;
using Point = AvmPoint<double>;
using rational = boost::multiprecision::cpp_rational;

class Recorder {
 public:
  Recorder(std::string suite, std::vector<CheckResult>& out) : suite_(std::move(suite)), out_(out) {}

  template <typename F>
  void check(const std::string& name, double tolerance, F&& measure) {
    CheckResult c{suite_, name, std::numeric_limits<double>::quiet_NaN(), tolerance, false, {}};
    try {
      c.value = measure();
      c.passed = c.value <= tolerance;  // NaN fails
    } catch (const std::exception& e) {
      c.note = e.what();
    }
    out_.push_back(std::move(c));
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
};

double relative(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

rational factorial(int n) {
  rational f = 1;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

// ---------------------------------------------------------------- identities

void identities(std::vector<CheckResult>& out) {
  Recorder rec("identities", out);
  const double radii[] = {0.1, 1.0, 5.0, 10.0};

  rec.check("bessel_i vs trapezoid quadrature", 1e-12, [] {
    double worst = 0;
    for (double r : {-3.0, 0.5, 2.0, 5.0, 12.0}) {
      const double scale = std::max(1.0, bessel_i(0, std::abs(r)));
      for (int n = 0; n <= 12; ++n) {
        worst = std::max(worst, std::abs(bessel_i(n, r) - oracle::bessel_quadrature_oracle(n, r, 2048)) / scale);
      }
    }
    return worst;
  });

  rec.check("order and argument symmetry (violations)", 0, [] {
    std::mt19937_64 gen(20240611);
    std::uniform_int_distribution<int> order(-25, 25);
    std::uniform_real_distribution<double> arg(-40.0, 40.0);
    int bad = 0;
    for (int trial = 0; trial < 300; ++trial) {
      const int n = order(gen);
      const double r = arg(gen);
      const double parity = (std::abs(n) % 2 == 0) ? 1.0 : -1.0;
      if (bessel_i(-n, r) != bessel_i(n, r) || bessel_i(n, -r) != parity * bessel_i(n, r)) ++bad;
    }
    return static_cast<double>(bad);
  });

  // extended precision keeps the cancellation against I_0(r)^2 below 1e-12
  rec.check("alternating square sum equals one", 1e-12, [&] {
    double worst = 0;
    for (double r : radii) {
      const auto t = bessel_i_range<long double>(static_cast<long double>(r));
      long double sum = t(0) * t(0);
      for (int n = 1; n <= t.n_max; ++n) sum += 2.0L * ((n % 2 == 0) ? 1.0L : -1.0L) * t(n) * t(n);
      worst = std::max(worst, static_cast<double>(std::abs(sum - 1.0L)));
    }
    return worst;
  });

  rec.check("three-term recursion, relative to I_0", 1e-12, [&] {
    double worst = 0;
    for (double r : radii) {
      const auto t = bessel_i_range(25, r);
      for (int n = 1; n <= 20; ++n) {
        worst = std::max(worst, std::abs(2.0 * n * t(n) - r * (t(n - 1) - t(n + 1))) / t(0));
      }
    }
    return worst;
  });

  rec.check("derivative recursion 2 I_n' = I_{n-1} + I_{n+1}", 1e-8, [] {
    const double h = 1e-6;
    double worst = 0;
    for (double r : {0.5, 2.0, 6.0}) {
      for (int n = 1; n <= 8; ++n) {
        const double derivative = (bessel_i(n, r + h) - bessel_i(n, r - h)) / (2.0 * h);
        const double rhs = bessel_i(n - 1, r) + bessel_i(n + 1, r);
        worst = std::max(worst, std::abs(2.0 * derivative - rhs) / std::max(1.0, rhs));
      }
    }
    return worst;
  });

  rec.check("strict positivity and ordering in n (violations)", 0, [] {
    int bad = 0;
    for (double r : {0.5, 2.0, 8.0}) {
      const auto t = bessel_i_range(16, r);
      for (int n = 0; n <= 15; ++n) {
        if (!(t(n + 1) > 0.0) || !(t(n + 1) < t(n))) ++bad;
      }
    }
    return static_cast<double>(bad);
  });

  rec.check("Jacobi-Anger expansion", 1e-11, [&] {
    double worst = 0;
    for (double r : radii) {
      const auto t = bessel_i_range(r);
      for (double phi : {0.0, 1.0, 2.5}) {
        double sum = t(0);
        for (int n = 1; n <= t.n_max; ++n) sum += 2.0 * t(n) * std::cos(n * phi);
        worst = std::max(worst, std::abs(std::exp(r * std::cos(phi)) - sum));
      }
    }
    return worst;
  });
}

// ---------------------------------------------------------------- avm

void avm(std::vector<CheckResult>& out) {
  Recorder rec("avm", out);
  const double ks[] = {0.0, 0.5, 1.0, 2.0, 4.0};
  const double rs[] = {0.1, 0.5, 1.0, 2.0, 5.0};

  rec.check("chi vs periodic ODE oracle", 1e-9, [&] {
    double worst = 0;
    for (double k : ks) {
      for (double r : rs) {
        const Point pt{k, r};
        const oracle::ChiOdeOracle<double> ode(pt);
        for (int j = 0; j < 32; ++j) {
          const double phi = -pi + 2 * pi * j / 32.0;
          worst = std::max(worst, std::abs(avm_chi(pt, phi) - ode(phi)));
        }
      }
    }
    return worst;
  });

  rec.check("C0, C1, S1 vs quadrature", 1e-10, [&] {
    double worst = 0;
    for (double k : ks) {
      for (double r : rs) {
        const auto f = avm_functionals(Point{k, r});
        const auto q = oracle::functionals_quadrature_oracle(Point{k, r}, 2048);
        worst = std::max({worst, std::abs(f.c0 - q.c0), std::abs(f.c1 - q.c1), std::abs(f.s1 - q.s1)});
      }
    }
    return worst;
  });

  rec.check("Fourier-pair three-term recursion", 1e-10, [] {
    double worst = 0;
    for (double k : {0.5, 1.0, 3.0}) {
      for (double r : {0.5, 1.0, 4.0}) {
        const auto hat = avm_fourier_coefficients(Point{k, r}, 16);
        auto pair = [&](int n) { return FourierPair<double>(hat[n].real(), -hat[n].imag()); };
        auto perp = [](const FourierPair<double>& x) { return FourierPair<double>(-x[1], x[0]); };
        for (int n = 1; n <= 15; ++n) {
          Eigen::Matrix2d a;
          a << k, n, -n, k;
          const FourierPair<double> res = a * pair(n) + 0.5 * r * (perp(pair(n - 1)) - perp(pair(n + 1)));
          worst = std::max(worst, res.norm());
        }
      }
    }
    return worst;
  });

  rec.check("telescoping sums of squared moduli", 1e-8, [] {
    double worst = 0;
    for (double k : {0.5, 1.0, 2.0}) {
      for (double r : {0.5, 1.0, 3.0}) {
        const auto f = avm_functionals(Point{k, r});
        const auto hat = avm_fourier_coefficients(Point{k, r}, 60);
        double cos_sum = 0, sin_sum = 0;
        for (int n = 1; n <= 60; ++n) {
          const double mod2 = std::norm(hat[n]) / (r * r * f.c0 * f.c0);
          cos_sum += 2.0 * n * mod2;
          sin_sum += 2.0 * k * ((n % 2 == 1) ? 1.0 : -1.0) * mod2;
        }
        worst = std::max({worst, std::abs(cos_sum - f.cal_c1), std::abs(sin_sum - f.cal_s1)});
      }
    }
    return worst;
  });

  rec.check("S1 = -(k/r)(C0 - 1)", 1e-12, [] {
    double worst = 0;
    for (double k : {-2.0, 0.0, 0.5, 1.0, 3.0}) {
      for (double r : {0.2, 1.0, 2.5, 6.0}) {
        const auto f = avm_functionals(Point{k, r});
        worst = std::max(worst, std::abs(f.s1 + (k / r) * (f.c0 - 1.0)) / std::max(1.0, std::abs(f.s1)));
      }
    }
    return worst;
  });

  rec.check("C1 = (1/2) dC0/dr by central differences", 1e-8, [] {
    const double h = 1e-5;
    double worst = 0;
    for (double k : {0.0, 0.7, 2.0}) {
      for (double r : {0.3, 1.0, 3.0}) {
        const double up = avm_c0_series(Point{k, r + h}, 60).value;
        const double down = avm_c0_series(Point{k, r - h}, 60).value;
        worst = std::max(worst, std::abs(0.5 * (up - down) / (2 * h) - avm_functionals(Point{k, r}).c1));
      }
    }
    return worst;
  });

  rec.check("a_{k,p}: product, alternating sum, eta integral", 1e-10, [] {
    double worst = 0;
    for (double k : {0.0, 0.5, 1.0, 2.0, 5.0}) {
      for (int p = 0; p <= 15; ++p) {
        const double product = avm_akp(k, p);
        const double summed = static_cast<double>(oracle::akp_alternating_sum(static_cast<long double>(k), p));
        worst = std::max({worst, relative(summed, product), relative(avm_akp_from_eta(k, p), product)});
      }
    }
    return worst;
  });

  rec.check("a_{0,p} = (2p)!/(p!)^4 exactly (mismatches)", 0, [] {
    int bad = 0;
    for (int p = 0; p <= 10; ++p) {
      const rational f = factorial(p);
      const rational closed = factorial(2 * p) / (f * f * f * f);
      rational cauchy = 0;
      for (int j = 0; j <= p; ++j) {
        const rational a = factorial(j), b = factorial(p - j);
        cauchy += 1 / (a * a * b * b);
      }
      if (cauchy != closed || avm_akp<rational>(rational(0), p) != closed) ++bad;
    }
    return static_cast<double>(bad);
  });

  rec.check("parity in k and r", 1e-12, [] {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> kd(-5.0, 5.0), rd(-8.0, 8.0);
    double worst = 0;
    auto gap = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(a)); };
    for (int trial = 0; trial < 200; ++trial) {
      const double k = kd(gen), r = rd(gen);
      const auto f = avm_functionals(Point{k, r});
      const auto fk = avm_functionals(Point{-k, r});
      const auto fr = avm_functionals(Point{k, -r});
      worst = std::max({worst, gap(fk.c0, f.c0), gap(fr.c0, f.c0), gap(fk.c1, f.c1), gap(fr.c1, -f.c1),
                        gap(fk.s1, -f.s1), gap(fr.s1, -f.s1), gap(fk.cal_t1, -f.cal_t1), gap(fr.cal_t1, f.cal_t1)});
    }
    return worst;
  });

  rec.check("signs C0 >= 1, C1 r >= 0, S1 <= 0 (violations)", 0, [] {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> kd(-5.0, 5.0), rd(-8.0, 8.0);
    int bad = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const double k = kd(gen), r = rd(gen);
      const auto f = avm_functionals(Point{k, r});
      if (f.c0 < 1.0 || f.c1 * r < 0.0 || (k * r >= 0 && f.s1 > 0.0)) ++bad;
    }
    return static_cast<double>(bad);
  });

  rec.check("T1 decreasing in r from T1(k,0) = k (violations)", 0, [] {
    int bad = 0;
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      double prev = avm_functionals(Point{k, 0.0}).cal_t1;
      if (std::abs(prev - k) > 1e-15 * k) ++bad;
      for (int j = 1; j <= 200; ++j) {
        const double t = avm_functionals(Point{k, 0.05 * j}).cal_t1;
        if (!(t < prev) || !(t > 0)) ++bad;
        prev = t;
      }
    }
    return static_cast<double>(bad);
  });

  rec.check("T1/k increasing in k below 1 (violations)", 0, [] {
    int bad = 0;
    for (double r : {0.5, 1.0, 3.0, 8.0}) {
      double prev = 0;
      for (int j = 1; j <= 200; ++j) {
        const double k = 0.05 * j;
        const double ratio = avm_functionals(Point{k, r}).cal_t1 / k;
        if (!(ratio > prev) || !(ratio < 1.0)) ++bad;
        prev = ratio;
      }
    }
    return static_cast<double>(bad);
  });

  rec.check("cal_C1 decreasing in k (violations)", 0, [] {
    int bad = 0;
    for (double r : {0.0, 0.5, 2.0, 6.0, 10.0}) {
      double prev = avm_functionals(Point{0.0, r}).cal_c1;
      for (int j = 1; j <= 100; ++j) {
        const double c = avm_functionals(Point{0.08 * j, r}).cal_c1;
        if (!(c < prev)) ++bad;
        prev = c;
      }
    }
    return static_cast<double>(bad);
  });

  // distance outside the accepted interval, 0 when inside
  rec.check("(r/k) T1 at r = 200 outside [0.99, 1.01]", 0, [] {
    double worst = 0;
    for (double k : {0.5, 1.0, 2.0}) {
      const double v = 200.0 / k * avm_functionals(Point{k, 200.0}).cal_t1;
      worst = std::max({worst, 0.99 - v, v - 1.01});
    }
    return worst;
  });

  rec.check("(r/k) T1 decreasing toward 1 for r >= 4 (violations)", 0, [] {
    int bad = 0;
    for (double k : {0.5, 1.0, 2.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double r = 4.0; r <= 200.0; r *= 1.25) {
        const double v = r / k * avm_functionals(Point{k, r}).cal_t1;
        if (!(v < prev) || !(v > 1.0)) ++bad;
        prev = v;
      }
    }
    return static_cast<double>(bad);
  });

  rec.check("T1/k at k = 200 outside [0.99, 1]", 0, [] {
    double worst = 0;
    for (double r : {1.0, 2.0, 5.0}) {
      const double v = avm_functionals(Point{200.0, r}).cal_t1 / 200.0;
      worst = std::max({worst, 0.99 - v, v - 1.0});
    }
    return worst;
  });

  rec.check("Jacobian determinant signs (violations)", 0, [] {
    const double h = 1e-5;
    auto cs = [](double k, double r) {
      const auto f = avm_functionals(Point{k, r});
      return Eigen::Vector2d(f.cal_s1, f.cal_c1);
    };
    int bad = 0;
    for (double k : {0.25, 1.0, 3.0}) {
      for (double r : {0.3, 1.0, 4.0, 9.0}) {
        const Eigen::Vector2d v = cs(k, r);
        const Eigen::Vector2d dr = (cs(k, r + h) - cs(k, r - h)) / (2 * h);
        const Eigen::Vector2d dk = (cs(k + h, r) - cs(k - h, r)) / (2 * h);
        Eigen::Matrix2d m1, m2, m3;
        m1 << dr, v;
        m2 << dk, v;
        m3 << dr, dk;
        if (!(m1.determinant() < 0) || !(m2.determinant() > 0) || !(m3.determinant() > 0)) ++bad;
      }
    }
    return static_cast<double>(bad);
  });

  rec.check("density mass and travelling-wave residual", 1e-9, [] {
    double worst = 0;
    for (const Point pt : {Point{1.0, 1.0}, Point{2.0, 5.0}, Point{-0.5, 3.0}}) {
      const auto rho = avm_density(pt);
      const double mass = periodic_mean<double>([&](double phi) { return rho(phi); }, 1024) * 2 * pi;
      worst = std::max({worst, std::abs(mass - 1.0), travelling_wave_residual(rho, 1024)});
    }
    return worst;
  });
}

// ---------------------------------------------------------------- consistency

void consistency(std::vector<CheckResult>& out) {
  Recorder rec("consistency", out);

  rec.check("onset: mu(1e-4)/(2 sec alpha) - 1 and k - tan alpha", 1e-3, [] {
    double worst = 0;
    for (double alpha : {0.0, pi / 6, pi / 4, pi / 3}) {
      const auto onset = bifurcation_point(alpha);
      worst = std::max({worst, std::abs(mu_on_branch(alpha, 1e-4) / onset.mu - 1),
                        std::abs(solve_k_given_r(alpha, 1e-4) - onset.k)});
    }
    return worst;
  });

  const auto point = solve_selfconsistency(3.0, pi / 6);

  rec.check("residual at (3, pi/6), series", 1e-10, [&] {
    if (!point) throw std::runtime_error("no coherent solution found");
    return point->residual;
  });

  rec.check("residual at (3, pi/6), quadrature", 1e-10, [&] {
    if (!point) throw std::runtime_error("no coherent solution found");
    const auto q = oracle::functionals_quadrature_oracle(Point{point->k, point->r}, 2048);
    return std::max(std::abs(q.cal_t1 - std::tan(pi / 6)), std::abs(std::hypot(q.cal_c1, q.cal_s1) - 1 / 3.0));
  });

  rec.check("travelling-wave residual at the solution", 1e-8, [&] {
    if (!point) throw std::runtime_error("no coherent solution found");
    return travelling_wave_residual(avm_density(Point{point->k, point->r}), 1024);
  });

  rec.check("two flux-constant formulas agree", 1e-10, [&] {
    if (!point) throw std::runtime_error("no coherent solution found");
    const auto rho = avm_density(Point{point->k, point->r});
    const double mean_sin = periodic_mean<double>([&](double phi) { return std::sin(phi) * rho(phi); }, 1024) * 2 * pi;
    return std::abs(point->c - (point->r * mean_sin + point->k) / (2 * pi));
  });

  rec.check("incoherent only below onset (violations)", 0, [] {
    int bad = 0;
    if (solve_selfconsistency(2.0, pi / 6)) ++bad;
    if (solve_selfconsistency(1.9, 0.0)) ++bad;
    if (solve_selfconsistency(50.0, pi / 2)) ++bad;
    return static_cast<double>(bad);
  });

  rec.check("obtuse angles mirror acute ones", 1e-10, [] {
    double worst = 0;
    for (double alpha : {pi / 6, pi / 3}) {
      const auto acute = solve_selfconsistency(5.0, alpha);
      const auto obtuse = solve_selfconsistency(-5.0, pi - alpha);
      if (!acute || !obtuse) throw std::runtime_error("missing solution");
      worst = std::max({worst, std::abs(obtuse->k + acute->k), std::abs(obtuse->r - acute->r)});
    }
    return worst;
  });

  rec.check("one amplitude per coupling (extra sign changes)", 0, [] {
    int extra = 0;
    for (double mu : {3.0, 5.0}) {
      int changes = 0;
      double prev = mu_on_branch(pi / 6, 1e-3) - mu;
      for (int j = 1; j <= 300; ++j) {
        const double g = mu_on_branch(pi / 6, 0.05 * j) - mu;
        if ((g > 0) != (prev > 0)) ++changes;
        prev = g;
      }
      extra += std::abs(changes - 1);
    }
    return static_cast<double>(extra);
  });

  rec.check("branch at pi/3 monotone, k > tan alpha (violations)", 0, [] {
    const auto curve = trace_branch(pi / 3, 8.0, 80);
    if (curve.failure_index) throw std::runtime_error(curve.message);
    int bad = 0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
      const auto& a = curve.points[i - 1];
      const auto& b = curve.points[i];
      if (!(b.r > a.r) || !(b.k > a.k) || !(b.mu > a.mu) || !(b.k > std::tan(pi / 3)) || b.residual > 1e-10) ++bad;
    }
    return static_cast<double>(bad);
  });

  rec.check("von Mises state at mu = 4", 1e-12, [] {
    const auto vm = stationary_vonmises(4.0);
    if (!vm) throw std::runtime_error("no von Mises state");
    return std::abs(bessel_i(1, vm->r) / (vm->r * bessel_i(0, vm->r)) - 0.25);
  });
}

// ---------------------------------------------------------------- meanfield

void meanfield(std::vector<CheckResult>& out) {
  Recorder rec("meanfield", out);

  rec.check("uniform state is stationary", 0, [] {
    return rhs(SpectralState::uniform(16, PdeParams{3.0, pi / 6, 1.0})).cwiseAbs().maxCoeff();
  });

  rec.check("linear growth and drift of mode 1", 1e-4, [] {
    double worst = 0;
    for (double mu : {1.0, 2.0, 3.0}) {
      for (double alpha : {0.0, pi / 6, pi / 3}) {
        const auto start = SpectralState::perturbed(16, PdeParams{mu, alpha, 1.0}, 2e-9);
        const auto end = evolve(start, 1.0, 1e-3, 1000).final_state;
        const std::complex<double> ratio = end.coeffs[1] / start.coeffs[1];
        worst = std::max({worst, std::abs(std::log(std::abs(ratio)) - (-1 + mu / 2 * std::cos(alpha))),
                          std::abs(-std::arg(ratio) - mu / 2 * std::sin(alpha))});
      }
    }
    return worst;
  });

  rec.check("travelling wave is a rotation under the right-hand side", 1e-8, [] {
    const auto bp = solve_selfconsistency(3.0, pi / 6);
    if (!bp) throw std::runtime_error("no coherent solution found");
    const auto s = avm_state(Point{bp->k, bp->r}, 64, PdeParams{3.0, pi / 6, 1.0}, 0.3);
    const Eigen::VectorXcd d = rhs(s);
    double worst = 0;
    for (int n = 0; n <= 64; ++n) worst = std::max(worst, std::abs(d[n] - std::complex<double>(0, -bp->k * n) * s.coeffs[n]));
    return worst;
  });

  rec.check("travelling wave rotates rigidly over t = 2 (L1)", 1e-5, [] {
    const auto bp = solve_selfconsistency(3.0, pi / 6);
    if (!bp) throw std::runtime_error("no coherent solution found");
    const auto start = avm_state(Point{bp->k, bp->r}, 64, PdeParams{3.0, pi / 6, 1.0});
    const auto end = evolve(start, 2.0, 1e-3, 1000).final_state;
    return l1_distance(end, rotated(start, 2.0 * bp->k));
  });

  rec.check("mass conserved over 200 steps", 0, [] {
    auto s = SpectralState::perturbed(32, PdeParams{3.0, pi / 6, 1.0}, 0.3);
    const auto mass = s.coeffs[0];
    for (int i = 0; i < 200; ++i) s = step(s, 0.01);
    return std::abs(s.coeffs[0] - mass);
  });

  rec.check("step halving error ratio, |ratio - 16|", 4, [] {
    const PdeParams p{3.0, pi / 6, 1.0};
    auto start = SpectralState::perturbed(24, p, 0.3);
    start.coeffs[2] = {0.02, 0.03};
    const auto reference = evolve(start, 1.0, 1.0 / 1280, 1 << 30).final_state;
    const auto coarse = evolve(start, 1.0, 1.0 / 20, 1 << 30).final_state;
    const auto fine = evolve(start, 1.0, 1.0 / 40, 1 << 30).final_state;
    const double ratio = (coarse.coeffs - reference.coeffs).cwiseAbs().maxCoeff() /
                         (fine.coeffs - reference.coeffs).cwiseAbs().maxCoeff();
    return std::abs(ratio - 16);
  });
}

// ---------------------------------------------------------------- particles

void particles(std::vector<CheckResult>& out) {
  Recorder rec("particles", out);

  rec.check("mean-field drift vs pairwise sum", 1e-12, [] {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> angle(-pi, pi);
    double worst = 0;
    for (int n : {2, 17, 128}) {
      const ParticleParams p{3.0, pi / 6, 0.0};
      Eigen::ArrayXd phases(n);
      for (int i = 0; i < n; ++i) phases[i] = angle(gen);
      const Eigen::ArrayXd drift = coupling_drift(phases, p);
      for (int i = 0; i < n; ++i) {
        double sum = 0;
        for (int j = 0; j < n; ++j) sum += std::sin(phases[j] - phases[i] + p.alpha);
        worst = std::max(worst, std::abs(drift[i] - p.mu * sum / n));
      }
    }
    return worst;
  });

  rec.check("lone oscillator drifts at mu sin(alpha)", 1e-12, [] {
    Eigen::ArrayXd one(1);
    one << 1.2;
    auto ens = ParticleEnsemble::from_phases(one, ParticleParams{2.5, 0.7, 0.0}, 1);
    for (int i = 0; i < 100; ++i) em_step(ens, 0.01);
    return std::abs(std::remainder(ens.phases[0] - (1.2 + 2.5 * std::sin(0.7)), 2 * pi));
  });

  rec.check("same seed, same trajectory (differing phases)", 0, [] {
    const ParticleParams p{3.0, pi / 6, 1.0};
    SimulationOptions o;
    o.T = 0.5;
    o.dt = 1e-2;
    auto a = ParticleEnsemble::uniform(500, p, 42);
    auto b = ParticleEnsemble::uniform(500, p, 42);
    simulate(a, o);
    simulate(b, o);
    return static_cast<double>((a.phases != b.phases).count());
  });

  rec.check("sub-onset R sqrt(N)", 3, [] {
    const int n = 4000;
    auto ens = ParticleEnsemble::uniform(n, ParticleParams{1.0, pi / 6, 1.0}, 5);
    SimulationOptions o;
    o.T = 10;
    o.dt = 1e-2;
    return simulate(ens, o).mean_R * std::sqrt(static_cast<double>(n));
  });
}

}  // namespace

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"identities", "avm", "consistency", "meanfield", "particles", "all"};
  return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "identities") identities(out), known = true;
  if (all || suite == "avm") avm(out), known = true;
  if (all || suite == "consistency") consistency(out), known = true;
  if (all || suite == "meanfield") meanfield(out), known = true;
  if (all || suite == "particles") particles(out), known = true;
  if (!known) throw std::invalid_argument("unknown verify suite: " + suite);
  return out;
}

void print_check_table(std::ostream& out, const std::vector<CheckResult>& checks) {
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %-58s %12s %10s  %s\n", "suite", "check", "value", "tolerance", "result");
  out << line;
  int failed = 0;
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "%-12s %-58s %12.3e %10.1e  %s\n", c.suite.c_str(), c.name.c_str(), c.value,
                  c.tolerance, c.passed ? "PASS" : "FAIL");
    out << line;
    if (!c.note.empty()) out << "             error: " << c.note << '\n';
    if (!c.passed) ++failed;
  }
  out << checks.size() << " checks, " << failed << " failed\n";
}

}  // namespace skmf
