#include "skmf/meanfield.hpp"

#include <cmath>
#include <complex>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

namespace skmf {
namespace {

using Complex = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double blow_up = 1e6;

void check_modes(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("spectral state needs at least one mode");
}

Eigen::VectorXcd transport(const Eigen::VectorXcd& c, const PdeParams& p) {
  const int n_max = static_cast<int>(c.size()) - 1;
  const Complex v1 = -p.mu * pi * std::polar(1.0, -p.alpha) * c[1];
  const Complex vm1 = std::conj(v1);
  Eigen::VectorXcd out(n_max + 1);
  out[0] = 0;
  for (int n = 1; n <= n_max; ++n) {
    const Complex up = n < n_max ? c[n + 1] : Complex(0);
    out[n] = double(n) * (vm1 * up - v1 * c[n - 1]);
  }
  return out;
}

Eigen::ArrayXd decay(int n_max, double diffusion, double h) {
  Eigen::ArrayXd e(n_max + 1);
  for (int n = 0; n <= n_max; ++n) e[n] = std::exp(-diffusion * double(n) * double(n) * h);
  return e;
}

}  // namespace

SpectralState SpectralState::uniform(int n_modes, const PdeParams& params) {
  check_modes(n_modes);
  SpectralState s;
  s.n_modes = n_modes;
  s.coeffs = Eigen::VectorXcd::Zero(n_modes + 1);
  s.coeffs[0] = 1 / (2 * pi);
  s.params = params;
  return s;
}

SpectralState SpectralState::perturbed(int n_modes, const PdeParams& params, double amplitude) {
  SpectralState s = uniform(n_modes, params);
  s.coeffs[1] = amplitude / 2;
  return s;
}

double SpectralState::density(double theta) const {
  double value = coeffs[0].real();
  for (int n = 1; n <= n_modes; ++n) value += 2 * (coeffs[n] * std::polar(1.0, n * theta)).real();
  return value;
}

Eigen::VectorXd SpectralState::sample(int m) const {
  int grid = m;
  // synthesize needs more nodes than modes; subsample a finer grid if asked for fewer
  int stride = 1;
  while (grid <= 2 * n_modes) {
    grid *= 2;
    stride *= 2;
  }
  const Eigen::VectorXd fine = synthesize<double>(coeffs, grid);
  Eigen::VectorXd out(m);
  for (int j = 0; j < m; ++j) out[j] = fine[j * stride];
  return out;
}

SpectralState avm_state(const AvmPoint<double>& point, int n_modes, const PdeParams& params, double shift) {
  check_modes(n_modes);
  const ComplexVectorX<double> hat = avm_fourier_coefficients(point, n_modes);
  const double norm = 2 * pi * hat[0].real();
  SpectralState s = SpectralState::uniform(n_modes, params);
  for (int n = 1; n <= n_modes; ++n) s.coeffs[n] = std::polar(1.0, -n * (params.alpha + shift)) * hat[n] / norm;
  return s;
}

SpectralState rotated(const SpectralState& state, double angle) {
  SpectralState s = state;
  for (int n = 1; n <= s.n_modes; ++n) s.coeffs[n] *= std::polar(1.0, -n * angle);
  return s;
}

Eigen::VectorXcd rhs(const SpectralState& state) {
  Eigen::VectorXcd out = transport(state.coeffs, state.params);
  for (int n = 1; n <= state.n_modes; ++n) out[n] -= state.params.diffusion * double(n) * double(n) * state.coeffs[n];
  return out;
}

SpectralState step(const SpectralState& state, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("step: dt must be positive");
  const PdeParams& p = state.params;
  const Eigen::ArrayXd half = decay(state.n_modes, p.diffusion, dt / 2);
  const Eigen::ArrayXd full = half * half;
  const Eigen::VectorXcd& u = state.coeffs;

  const Eigen::VectorXcd k1 = transport(u, p);
  const Eigen::VectorXcd u_half = (half * u.array()).matrix();
  const Eigen::VectorXcd k2 = transport((half * (u + dt / 2 * k1).array()).matrix(), p);
  const Eigen::VectorXcd k3 = transport(u_half + dt / 2 * k2, p);
  const Eigen::VectorXcd k4 = transport((full * u.array()).matrix() + dt * (half * k3.array()).matrix(), p);

  SpectralState next = state;
  next.coeffs = (full * u.array() +
                 dt / 6 * (full * k1.array() + 2 * half * (k2 + k3).array() + k4.array()))
                    .matrix();
  next.coeffs[0] = state.coeffs[0];
  next.t = state.t + dt;
  for (int n = 1; n <= next.n_modes; ++n) {
    const double size = std::abs(next.coeffs[n]);
    if (!(size <= blow_up)) {
      std::ostringstream msg;
      msg << "spectral solver blew up at t = " << next.t << " (mode " << n << "); try a smaller dt than " << dt;
      throw InstabilityError(msg.str());
    }
  }
  return next;
}

OrderParameter order_parameter(const SpectralState& state) {
  OrderParameter op;
  op.r0 = 2 * pi * std::abs(state.coeffs[1]);
  if (op.r0 > 0) {
    op.psi = -std::arg(state.coeffs[1]);
    op.psi_defined = true;
  }
  return op;
}

double instantaneous_speed(const SpectralState& state) {
  const Complex c1 = state.coeffs[1];
  if (c1 == Complex(0)) return 0;
  return -(rhs(state)[1] / c1).imag();
}

EvolveResult evolve(const SpectralState& initial, double T, double dt, int observe_every) {
  if (!(T > 0)) throw std::invalid_argument("evolve: T must be positive");
  if (!(dt > 0)) throw std::invalid_argument("evolve: dt must be positive");
  if (observe_every < 1) throw std::invalid_argument("evolve: observe_every must be >= 1");
  const long steps = std::max(1L, std::lround(T / dt));

  EvolveResult result;
  Diagnostics& d = result.diagnostics;
  double unwrapped = 0;
  bool have_phase = false;
  auto record = [&](const SpectralState& s) {
    const OrderParameter op = order_parameter(s);
    if (op.psi_defined) {
      if (!have_phase) {
        unwrapped = op.psi;
        have_phase = true;
      } else {
        unwrapped += std::remainder(op.psi - unwrapped, 2 * pi);
      }
    }
    d.t.push_back(s.t);
    d.r0.push_back(op.r0);
    d.psi.push_back(have_phase ? unwrapped : 0.0);
    d.speed.push_back(instantaneous_speed(s));
  };

  SpectralState s = initial;
  record(s);
  for (long i = 1; i <= steps; ++i) {
    s = step(s, dt);
    if (i % observe_every == 0 || i == steps) record(s);
  }
  result.final_state = std::move(s);
  return result;
}

double wave_speed_estimate(const Diagnostics& diag, double t_begin, double t_end, double min_r0) {
  double sum_t = 0, sum_p = 0, sum_tt = 0, sum_tp = 0;
  int count = 0;
  for (std::size_t i = 0; i < diag.t.size(); ++i) {
    if (diag.t[i] < t_begin || diag.t[i] > t_end) continue;
    if (diag.r0[i] < min_r0) {
      std::ostringstream msg;
      msg << "wave speed undefined: order parameter " << diag.r0[i] << " at t = " << diag.t[i];
      throw UndefinedSpeed(msg.str());
    }
    sum_t += diag.t[i];
    sum_p += diag.psi[i];
    sum_tt += diag.t[i] * diag.t[i];
    sum_tp += diag.t[i] * diag.psi[i];
    ++count;
  }
  if (count < 2) throw UndefinedSpeed("wave speed undefined: fewer than two samples in the window");
  const double mean_t = sum_t / count;
  const double var = sum_tt / count - mean_t * mean_t;
  if (!(var > 0)) throw UndefinedSpeed("wave speed undefined: window has zero length");
  return (sum_tp / count - mean_t * sum_p / count) / var;
}

double l1_distance(const SpectralState& a, const SpectralState& b, int m) {
  return (a.sample(m) - b.sample(m)).cwiseAbs().sum() * 2 * pi / m;
}

double l1_distance(const SpectralState& a, const std::function<double(double)>& reference, int m) {
  const Eigen::VectorXd values = a.sample(m);
  double sum = 0;
  for (int j = 0; j < m; ++j) sum += std::abs(values[j] - reference(-pi + 2 * pi * j / m));
  return sum * 2 * pi / m;
}

double linf_distance(const SpectralState& a, const SpectralState& b, int m) {
  return (a.sample(m) - b.sample(m)).cwiseAbs().maxCoeff();
}

void write_coefficients(std::ostream& out, const SpectralState& state) {
  out << "n,re,im\n" << std::setprecision(17);
  for (int n = 0; n <= state.n_modes; ++n) out << n << ',' << state.coeffs[n].real() << ',' << state.coeffs[n].imag() << '\n';
}

}  // namespace skmf
