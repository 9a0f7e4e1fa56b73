#pragma once

// Fourier-Galerkin solver for the mean-field equation
//     d_t rho = D d_theta^2 rho + d_theta(rho d_theta V),
//     V = mu W * rho,  W(theta) = -cos(theta - alpha).
// rho = sum_n rhohat_n e^{i n theta}; only n = 0..N are stored and
// rhohat_{-n} = conj(rhohat_n). The potential has the single mode
//     Vhat_1 = -mu pi e^{-i alpha} rhohat_1,
// so the transport term couples each mode to its two neighbours:
//     d_t rhohat_n = -D n^2 rhohat_n + n (Vhat_{-1} rhohat_{n+1} - Vhat_1 rhohat_{n-1}),
// with rhohat_{N+1} = 0. The order parameter is <e^{i theta}> = 2 pi conj(rhohat_1).

#include "skmf/avm.hpp"
#include "skmf/spectral.hpp"

#include <Eigen/Core>

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace skmf {

struct PdeParams {
  double mu{0};
  double alpha{0};
  double diffusion{1};
};

/// Raised when a coefficient leaves the stable range; retry with a smaller dt.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectralState {
  int n_modes{0};
  Eigen::VectorXcd coeffs;  // rhohat_0 .. rhohat_N, rhohat_0 = 1/(2 pi)
  double t{0};
  PdeParams params;

  static SpectralState uniform(int n_modes, const PdeParams& params);
  /// 1/(2 pi) + amplitude cos(theta)
  static SpectralState perturbed(int n_modes, const PdeParams& params, double amplitude);

  double density(double theta) const;
  Eigen::VectorXd sample(int m) const;
};

/// The travelling wave rho_{k,r}(theta - alpha - shift) as a spectral state.
SpectralState avm_state(const AvmPoint<double>& point, int n_modes, const PdeParams& params, double shift = 0);

/// Multiply rhohat_n by e^{-i n angle}, i.e. rotate the profile forward by angle.
SpectralState rotated(const SpectralState& state, double angle);

Eigen::VectorXcd rhs(const SpectralState& state);

/// One integrating-factor RK4 step (diffusion exact, transport by RK4).
SpectralState step(const SpectralState& state, double dt);

struct OrderParameter {
  double r0{0};
  double psi{0};
  bool psi_defined{false};  // false when r0 = 0; psi is then 0
};

OrderParameter order_parameter(const SpectralState& state);

/// d psi / dt = -Im(d_t rhohat_1 / rhohat_1); 0 when r0 = 0.
double instantaneous_speed(const SpectralState& state);

struct Diagnostics {
  std::vector<double> t;
  std::vector<double> r0;
  std::vector<double> psi;  // unwrapped
  std::vector<double> speed;
};

struct EvolveResult {
  Diagnostics diagnostics;
  SpectralState final_state;
};

/// Integrate to time T with step dt, recording every observe_every steps and at the end.
EvolveResult evolve(const SpectralState& initial, double T, double dt, int observe_every = 100);

/// Raised when the phase is meaningless over the requested window.
class UndefinedSpeed : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Least-squares slope of the unwrapped phase over t in [t_begin, t_end].
double wave_speed_estimate(const Diagnostics& diag, double t_begin, double t_end, double min_r0 = 1e-8);

/// (1/m) sum |a - b| * 2 pi on an m-point grid.
double l1_distance(const SpectralState& a, const SpectralState& b, int m = 1024);
double l1_distance(const SpectralState& a, const std::function<double(double)>& reference, int m = 1024);
double linf_distance(const SpectralState& a, const SpectralState& b, int m = 1024);

/// Plain-text coefficient table: header `n,re,im`, one row per stored mode.
void write_coefficients(std::ostream& out, const SpectralState& state);

}  // namespace skmf
