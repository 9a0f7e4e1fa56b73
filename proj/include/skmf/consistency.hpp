#pragma once

// Coherent travelling waves of the Sakaguchi-Kuramoto mean-field equation.
//
// A wave of speed k and rescaled amplitude r = mu r_0 exists at coupling mu and
// frustration alpha exactly when
//     T_1(k, r) = tan(alpha),   hypot(cal_C1, cal_S1)(k, r) = 1 / |mu|.
// For alpha in [0, pi/2) the first equation fixes k = K(r) >= tan(alpha), and
// the second then reads mu = cos(alpha) / cal_C1(K(r), r), which increases
// from 2 sec(alpha) at r = 0. Angles in (pi/2, pi] reduce to this case
// through (mu, alpha, k) -> (-mu, pi - alpha, -k).

#include "skmf/avm.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace skmf {

/// alpha = pi/2: the incoherent state is the only solution for every mu.
class DegenerateAngle : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct BranchPoint {
  double mu{0};
  double alpha{0};
  double k{0};
  double r{0};
  double c{0};         // flux constant k / (2 pi C_0)
  double residual{0};  // max-norm residual of the two equations
};

struct BranchCurve {
  double alpha{0};
  std::vector<BranchPoint> points;  // increasing r, starting at the onset r = 0
  std::vector<int> iterations;      // root-finder iterations per point
  std::optional<std::size_t> failure_index;
  std::string message;
};

struct Onset {
  double mu{0};
  double k{0};
};

struct VonMisesState {
  double mu{0};
  double r{0};
  AvmDensity<double> density;
};

/// (2 sec alpha, tan alpha). Throws DegenerateAngle at pi/2 and
/// std::invalid_argument outside [0, pi].
Onset bifurcation_point(double alpha);

/// The k >= tan(alpha) with T_1(k, r) = tan(alpha), for alpha in [0, pi/2), r >= 0.
double solve_k_given_r(double alpha, double r, int* iterations = nullptr);

/// Coupling at which the wave of amplitude r exists: cos(alpha) / cal_C1(K(r), r).
double mu_on_branch(double alpha, double r);

/// max(|T_1 - tan alpha|, |hypot(cal_C1, cal_S1) - 1/|mu||) at (k, r).
double branch_residual(double mu, double alpha, double k, double r);

/// The coherent wave at (mu, alpha), or nothing when only the incoherent state
/// exists. Returns the r >= 0 representative.
std::optional<BranchPoint> solve_selfconsistency(double mu, double alpha);

/// Branch sampled at r_j = r_max j / (n_points - 1). On a solver failure the
/// curve holds the points computed so far and records where it stopped.
BranchCurve trace_branch(double alpha, double r_max, int n_points);

/// Von Mises steady state for alpha = 0 and mu > 2.
std::optional<VonMisesState> stationary_vonmises(double mu);

}  // namespace skmf
