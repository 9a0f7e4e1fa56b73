#pragma once

// Scalar root finding on a sign-changing bracket.

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace skmf {

/// Raised when an iterative solver stops short of its tolerance.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double last_iterate, double residual)
      : std::runtime_error(what), last_iterate_(last_iterate), residual_(residual) {}
  double last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }

 private:
  double last_iterate_;
  double residual_;
};

template <typename Scalar>
struct RootResult {
  Scalar x{0};
  Scalar residual{0};
  int iterations{0};
};

/// Root of f in [lo, hi] given f(lo) <= 0 <= f(hi) or the reverse.
/// Regula falsi with the Illinois weight update, falling back to bisection
/// whenever the bracket fails to halve. Stops when |f| <= ftol or the bracket
/// collapses to a few ulps.
template <typename Scalar, typename F>
RootResult<Scalar> bracketed_root(F&& f, Scalar lo, Scalar hi, Scalar f_lo, Scalar f_hi, Scalar ftol,
                                  int max_iterations = 200) {
  if (f_lo == Scalar(0)) return {lo, Scalar(0), 0};
  if (f_hi == Scalar(0)) return {hi, Scalar(0), 0};
  if ((f_lo > 0) == (f_hi > 0)) {
    std::ostringstream msg;
    msg << "bracketed_root: no sign change on [" << static_cast<double>(lo) << ", " << static_cast<double>(hi) << "]";
    throw SolverError(msg.str(), static_cast<double>(lo), static_cast<double>(std::min(std::abs(f_lo), std::abs(f_hi))));
  }
  Scalar x = lo, fx = f_lo;
  int side = 0;  // which end was kept last time
  Scalar width = hi - lo;
  for (int it = 1; it <= max_iterations; ++it) {
    x = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
    if (!(x > lo && x < hi)) x = Scalar(0.5) * (lo + hi);
    fx = f(x);
    if (std::abs(fx) <= ftol) return {x, fx, it};
    if ((fx > 0) == (f_hi > 0)) {
      hi = x;
      f_hi = fx;
      if (side == -1) f_lo /= Scalar(2);
      side = -1;
    } else {
      lo = x;
      f_lo = fx;
      if (side == 1) f_hi /= Scalar(2);
      side = 1;
    }
    const Scalar new_width = hi - lo;
    if (new_width > Scalar(0.5) * width) {
      // slow progress: bisect once
      const Scalar mid = Scalar(0.5) * (lo + hi);
      const Scalar f_mid = f(mid);
      if (std::abs(f_mid) <= ftol) return {mid, f_mid, it};
      if ((f_mid > 0) == (f_hi > 0)) {
        hi = mid;
        f_hi = f_mid;
      } else {
        lo = mid;
        f_lo = f_mid;
      }
      side = 0;
    }
    width = hi - lo;
    if (width <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      const bool low_side = std::abs(f_lo) < std::abs(f_hi);
      return {low_side ? lo : hi, low_side ? f_lo : f_hi, it};
    }
  }
  std::ostringstream msg;
  msg << "bracketed_root: no convergence after " << max_iterations << " iterations; last iterate "
      << static_cast<double>(x) << ", residual " << static_cast<double>(fx);
  throw SolverError(msg.str(), static_cast<double>(x), static_cast<double>(fx));
}

}  // namespace skmf
