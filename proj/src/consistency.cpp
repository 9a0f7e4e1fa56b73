#include "skmf/consistency.hpp"

#include "skmf/roots.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace skmf {
namespace {

constexpr double pi = std::numbers::pi;

bool is_right_angle(double alpha) { return std::abs(alpha - pi / 2) <= 1e-14; }

void check_angle(double alpha) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha > pi) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " lies outside [0, pi]";
    throw std::invalid_argument(msg.str());
  }
}

void check_acute(double alpha) {
  check_angle(alpha);
  if (alpha >= pi / 2 || is_right_angle(alpha)) {
    std::ostringstream msg;
    msg << "alpha = " << alpha << " lies outside [0, pi/2)";
    throw std::invalid_argument(msg.str());
  }
}

double normalized_speed(double k, double r) { return avm_functionals(AvmPoint<double>{k, r}).cal_t1; }

BranchPoint assemble(double mu, double alpha, double k, double r) {
  const auto f = avm_functionals(AvmPoint<double>{k, r});
  BranchPoint p;
  p.mu = mu;
  p.alpha = alpha;
  p.k = k;
  p.r = r;
  p.c = k / (2 * pi * f.c0);
  p.residual = branch_residual(mu, alpha, k, r);
  return p;
}

}  // namespace

Onset bifurcation_point(double alpha) {
  check_angle(alpha);
  if (is_right_angle(alpha)) {
    throw DegenerateAngle("alpha = pi/2: the incoherent state is the unique solution for every mu");
  }
  if (alpha == pi) return {-2.0, 0.0};
  return {2.0 / std::cos(alpha), std::tan(alpha)};
}

double solve_k_given_r(double alpha, double r, int* iterations) {
  check_acute(alpha);
  if (!std::isfinite(r)) throw std::invalid_argument("solve_k_given_r: r must be finite");
  if (iterations) *iterations = 0;
  const double target = std::tan(alpha);
  if (target == 0.0) return 0.0;
  if (r == 0.0) return target;

  auto f = [&](double k) { return normalized_speed(k, r) - target; };
  const double lo = target;
  const double f_lo = f(lo);  // T_1 <= k, so this is <= 0
  double hi = 2 * target + 1;
  double f_hi = f(hi);
  int doublings = 0;
  while (f_hi < 0) {
    if (++doublings > 200) throw SolverError("solve_k_given_r: could not bracket the wave speed", hi, f_hi);
    hi *= 2;
    f_hi = f(hi);
  }
  const auto root = bracketed_root<double>(f, lo, hi, f_lo, f_hi, 1e-14 * std::max(1.0, target));
  if (iterations) *iterations = root.iterations + doublings;
  return root.x;
}

double mu_on_branch(double alpha, double r) {
  const double k = solve_k_given_r(alpha, r);
  return std::cos(alpha) / avm_functionals(AvmPoint<double>{k, r}).cal_c1;
}

double branch_residual(double mu, double alpha, double k, double r) {
  const auto f = avm_functionals(AvmPoint<double>{k, r});
  const double speed = std::abs(f.cal_t1 - std::tan(alpha));
  const double modulus = std::abs(std::hypot(f.cal_c1, f.cal_s1) - 1.0 / std::abs(mu));
  return std::max(speed, modulus);
}

std::optional<BranchPoint> solve_selfconsistency(double mu, double alpha) {
  check_angle(alpha);
  if (!std::isfinite(mu)) throw std::invalid_argument("solve_selfconsistency: mu must be finite");
  if (is_right_angle(alpha)) return std::nullopt;
  if (alpha > pi / 2) {
    auto mirrored = solve_selfconsistency(-mu, pi - alpha);
    if (!mirrored) return std::nullopt;
    mirrored->mu = mu;
    mirrored->alpha = alpha;
    mirrored->k = -mirrored->k;
    mirrored->c = -mirrored->c;
    return mirrored;
  }

  const double onset = 2.0 / std::cos(alpha);
  if (mu <= onset) return std::nullopt;

  auto g = [&](double r) { return mu_on_branch(alpha, r) - mu; };
  double hi = std::max(1.0, mu);
  double g_hi = g(hi);
  int doublings = 0;
  while (g_hi < 0) {
    if (++doublings > 60) throw SolverError("solve_selfconsistency: could not bracket the amplitude", hi, g_hi);
    hi *= 2;
    g_hi = g(hi);
  }
  const auto root = bracketed_root<double>(g, 0.0, hi, onset - mu, g_hi, 1e-13 * mu);
  const double k = solve_k_given_r(alpha, root.x);
  return assemble(mu, alpha, k, root.x);
}

BranchCurve trace_branch(double alpha, double r_max, int n_points) {
  check_acute(alpha);
  if (!(r_max > 0) || !std::isfinite(r_max)) throw std::invalid_argument("trace_branch: r_max must be positive");
  if (n_points < 2) throw std::invalid_argument("trace_branch: n_points must be >= 2");
  BranchCurve curve;
  curve.alpha = alpha;
  for (int j = 0; j < n_points; ++j) {
    const double r = r_max * j / (n_points - 1);
    try {
      int iterations = 0;
      const double k = solve_k_given_r(alpha, r, &iterations);
      const double mu = std::cos(alpha) / avm_functionals(AvmPoint<double>{k, r}).cal_c1;
      curve.points.push_back(assemble(mu, alpha, k, r));
      curve.iterations.push_back(iterations);
    } catch (const std::exception& e) {
      curve.failure_index = static_cast<std::size_t>(j);
      curve.message = e.what();
      break;
    }
  }
  return curve;
}

std::optional<VonMisesState> stationary_vonmises(double mu) {
  const auto p = solve_selfconsistency(mu, 0.0);
  if (!p) return std::nullopt;
  return VonMisesState{mu, p->r, AvmDensity<double>(AvmPoint<double>{0.0, p->r})};
}

}  // namespace skmf
