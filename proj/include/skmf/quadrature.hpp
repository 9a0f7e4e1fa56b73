#pragma once

// Quadrature rules shared by the oracles and by the eta/sigma integrals.

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace skmf {

/// Raised when an adaptive rule cannot reach its tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

template <typename Scalar>
struct QuadratureResult {
  Scalar value{0};
  Scalar error_estimate{0};
  int evaluations{0};
};

/// Uniform nodes phi_j = -pi + 2 pi j / m, j = 0..m-1.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> periodic_grid(int m) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> grid(m);
  for (int j = 0; j < m; ++j) grid[j] = -std::numbers::pi_v<Scalar> + two_pi * Scalar(j) / Scalar(m);
  return grid;
}

/// (1/2pi) int_{-pi}^{pi} f by the m-point trapezoid rule (spectrally
/// accurate for smooth periodic f).
template <typename Scalar, typename F>
Scalar periodic_mean(F&& f, int m) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar sum = 0;
  for (int j = 0; j < m; ++j) sum += f(-std::numbers::pi_v<Scalar> + two_pi * Scalar(j) / Scalar(m));
  return sum / Scalar(m);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
template <typename Scalar>
struct GaussLegendre {
  std::vector<Scalar> nodes;
  std::vector<Scalar> weights;

  explicit GaussLegendre(int order) : nodes(order), weights(order) {
    const Scalar pi = std::numbers::pi_v<Scalar>;
    for (int i = 0; i < (order + 1) / 2; ++i) {
      Scalar x = std::cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(order) + Scalar(0.5)));
      Scalar dp = 1;
      for (int iter = 0; iter < 100; ++iter) {
        Scalar p0 = 1, p1 = x;
        for (int j = 2; j <= order; ++j) {
          const Scalar p2 = ((Scalar(2 * j - 1)) * x * p1 - Scalar(j - 1) * p0) / Scalar(j);
          p0 = p1;
          p1 = p2;
        }
        dp = Scalar(order) * (x * p1 - p0) / (x * x - Scalar(1));
        const Scalar dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < Scalar(4) * std::numeric_limits<Scalar>::epsilon()) break;
      }
      // refresh the derivative at the converged node
      Scalar p0 = 1, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const Scalar p2 = ((Scalar(2 * j - 1)) * x * p1 - Scalar(j - 1) * p0) / Scalar(j);
        p0 = p1;
        p1 = p2;
      }
      dp = Scalar(order) * (x * p1 - p0) / (x * x - Scalar(1));
      const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[order - 1 - i] = x;
      weights[i] = w;
      weights[order - 1 - i] = w;
    }
  }
};

/// int_a^b f by `panels` equal panels of an `order`-point Gauss rule.
template <typename Scalar, typename F>
Scalar composite_gauss(F&& f, Scalar a, Scalar b, int panels, const GaussLegendre<Scalar>& rule) {
  const Scalar h = (b - a) / Scalar(panels);
  Scalar sum = 0;
  for (int p = 0; p < panels; ++p) {
    const Scalar mid = a + (Scalar(p) + Scalar(0.5)) * h;
    Scalar panel = 0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) panel += rule.weights[i] * f(mid + Scalar(0.5) * h * rule.nodes[i]);
    sum += panel;
  }
  return sum * Scalar(0.5) * h;
}

/// Romberg integration: trapezoid refinements with Richardson extrapolation.
/// Converged once successive diagonal entries agree to rel_tol (relative to
/// the running value, or absolutely when the value vanishes).
template <typename Scalar, typename F>
QuadratureResult<Scalar> romberg(F&& f, Scalar a, Scalar b, Scalar rel_tol = Scalar(1e-13), int max_levels = 20) {
  std::vector<std::vector<Scalar>> table;
  Scalar h = b - a;
  table.push_back({Scalar(0.5) * h * (f(a) + f(b))});
  int evaluations = 2;
  Scalar estimate = std::numeric_limits<Scalar>::infinity();
  for (int level = 1; level < max_levels; ++level) {
    const int new_points = 1 << (level - 1);
    h /= Scalar(2);
    Scalar sum = 0;
    for (int i = 0; i < new_points; ++i) sum += f(a + (Scalar(2 * i + 1)) * h);
    evaluations += new_points;

    std::vector<Scalar> row(level + 1);
    row[0] = Scalar(0.5) * table.back()[0] + h * sum;
    Scalar factor = 1;
    for (int j = 1; j <= level; ++j) {
      factor *= Scalar(4);
      row[j] = row[j - 1] + (row[j - 1] - table.back()[j - 1]) / (factor - Scalar(1));
    }
    estimate = std::abs(row[level] - table.back()[level - 1]);
    const Scalar scale = std::max(std::abs(row[level]), std::numeric_limits<Scalar>::min());
    table.push_back(std::move(row));
    if (level >= 4 && (estimate <= rel_tol * scale || estimate == Scalar(0))) {
      return {table.back().back(), estimate, evaluations};
    }
  }
  std::ostringstream msg;
  msg << "romberg: no convergence after " << max_levels << " levels; achieved error estimate "
      << static_cast<double>(estimate);
  throw QuadratureError(msg.str(), static_cast<double>(estimate));
}

}  // namespace skmf
