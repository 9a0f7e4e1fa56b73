#include "skmf/particles.hpp"

#include "skmf/avm.hpp"

#include <cmath>
#include <numbers>
#include <thread>

namespace skmf {
namespace {

constexpr double pi = std::numbers::pi;

constexpr int sync_interval = 64;

// e^{i x} by its Taylor series for the small per-step increments, libm otherwise
std::complex<double> unit_rotation(double x) {
  if (std::abs(x) > 0.5) return std::polar(1.0, x);
  const double x2 = x * x;
  // truncation below 0.5^18 / 18! ~ 6e-22
  double c = 1.0 / 20922789888000.0, s = 1.0 / 355687428096000.0;  // 1/16!, 1/17!
  constexpr double even[] = {1.0 / 87178291200.0, 1.0 / 479001600.0, 1.0 / 3628800.0, 1.0 / 40320.0,
                             1.0 / 720.0,         1.0 / 24.0,          1.0 / 2.0,        1.0};
  constexpr double odd[] = {1.0 / 1307674368000.0, 1.0 / 6227020800.0, 1.0 / 39916800.0, 1.0 / 362880.0,
                            1.0 / 5040.0,          1.0 / 120.0,          1.0 / 6.0,        1.0};
  for (int j = 0; j < 8; ++j) {
    c = even[j] - x2 * c;
    s = odd[j] - x2 * s;
  }
  return {c, s * x};
}

// one step for particles [lo, lo + len), given the rotated mean w = Z e^{i alpha}
void advance(ParticleEnsemble& ens, Eigen::Index lo, Eigen::Index len, std::complex<double> w, double dt, double noise,
             std::mt19937_64& rng, boost::random::normal_distribution<double>& normal) {
  const double mu = ens.params.mu;
  for (Eigen::Index i = lo; i < lo + len; ++i) {
    const double c = ens.cos_phase[i], s = ens.sin_phase[i];
    const double delta = mu * (w.imag() * c - w.real() * s) * dt + noise * normal(rng);
    double x = ens.phases[i] + delta;
    if (x >= pi) x -= 2 * pi;
    if (x < -pi) x += 2 * pi;
    ens.phases[i] = (x >= -pi && x < pi) ? x : wrap_angle(x);
    const std::complex<double> turn = unit_rotation(delta);
    ens.cos_phase[i] = c * turn.real() - s * turn.imag();
    ens.sin_phase[i] = s * turn.real() + c * turn.imag();
  }
}

void finish_step(ParticleEnsemble& ens, double dt) {
  ens.t += dt;
  if (++ens.steps_since_sync >= sync_interval) ens.resync();
}

struct Stream {
  std::mt19937_64 rng;
  boost::random::normal_distribution<double> normal{0.0, 1.0};
};

// per-chunk streams for the threaded mode, derived from the seed
std::vector<Stream> make_streams(std::uint64_t seed, int count) {
  std::vector<Stream> streams(count);
  for (int j = 0; j < count; ++j) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(j)};
    streams[j].rng.seed(seq);
  }
  return streams;
}

double slope(const std::vector<double>& t, const std::vector<double>& y, std::size_t begin, std::size_t end) {
  const double n = static_cast<double>(end - begin);
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = begin; i < end; ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  const double var = stt / n - (st / n) * (st / n);
  return var > 0 ? (sty / n - (st / n) * (sy / n)) / var : 0.0;
}

}  // namespace

double wrap_angle(double theta) {
  double x = theta - 2 * pi * std::floor((theta + pi) / (2 * pi));
  // rounding can land exactly on +pi
  if (x >= pi) x -= 2 * pi;
  return x;
}

ParticleEnsemble ParticleEnsemble::uniform(int n, const ParticleParams& params, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("particle ensemble needs at least one particle");
  ParticleEnsemble ens;
  ens.params = params;
  ens.seed = seed;
  ens.rng.seed(seed);
  std::uniform_real_distribution<double> angle(-pi, pi);
  ens.phases.resize(n);
  for (int i = 0; i < n; ++i) ens.phases[i] = angle(ens.rng);
  ens.resync();
  return ens;
}

ParticleEnsemble ParticleEnsemble::from_phases(const Eigen::ArrayXd& phases, const ParticleParams& params,
                                               std::uint64_t seed) {
  if (phases.size() < 1) throw std::invalid_argument("particle ensemble needs at least one particle");
  ParticleEnsemble ens;
  ens.params = params;
  ens.seed = seed;
  ens.rng.seed(seed);
  ens.phases = phases.unaryExpr([](double x) { return wrap_angle(x); });
  ens.resync();
  return ens;
}

void ParticleEnsemble::resync() {
  cos_phase.resize(phases.size());
  sin_phase.resize(phases.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    cos_phase[i] = std::cos(phases[i]);
    sin_phase[i] = std::sin(phases[i]);
  }
  steps_since_sync = 0;
}

std::complex<double> ParticleEnsemble::mean_field() const {
  double c = 0, s = 0;
  for (Eigen::Index i = 0; i < cos_phase.size(); ++i) {
    c += cos_phase[i];
    s += sin_phase[i];
  }
  const double n = static_cast<double>(cos_phase.size());
  return {c / n, s / n};
}

std::complex<double> mean_field(const Eigen::ArrayXd& phases) {
  double c = 0, s = 0;
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    c += std::cos(phases[i]);
    s += std::sin(phases[i]);
  }
  const double n = static_cast<double>(phases.size());
  return {c / n, s / n};
}

Eigen::ArrayXd coupling_drift(const Eigen::ArrayXd& phases, const ParticleParams& params) {
  const std::complex<double> w = mean_field(phases) * std::polar(1.0, params.alpha);
  return params.mu * (w.imag() * phases.cos() - w.real() * phases.sin());
}

void em_step(ParticleEnsemble& ens, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("em_step: dt must be positive");
  const std::complex<double> w = ens.mean_field() * std::polar(1.0, ens.params.alpha);
  const double noise = std::sqrt(2 * ens.params.diffusion * dt);
  advance(ens, 0, ens.phases.size(), w, dt, noise, ens.rng, ens.normal);
  finish_step(ens, dt);
}

EnsembleDiagnostics simulate(ParticleEnsemble& ens, const SimulationOptions& options) {
  if (!(options.T > 0) || !(options.dt > 0)) throw std::invalid_argument("simulate: T and dt must be positive");
  if (options.observe_every < 1 || options.bins < 1 || options.batches < 1) {
    throw std::invalid_argument("simulate: observe_every, bins and batches must be >= 1");
  }
  const long steps = std::max(1L, std::lround(options.T / options.dt));
  const double t_start = ens.t;
  const double t_transient = t_start + options.transient_fraction * options.T;
  const int threads = std::max(1, options.threads);
  const Eigen::Index n = ens.phases.size();

  std::vector<Stream> streams;
  if (threads > 1) streams = make_streams(ens.seed, threads);

  EnsembleDiagnostics d;
  d.histogram = Eigen::ArrayXd::Zero(options.bins);
  double unwrapped = 0;
  bool have_phase = false;
  std::size_t first_kept = 0;
  bool kept_any = false;

  auto observe = [&]() {
    const std::complex<double> z = ens.mean_field();
    const double psi = std::arg(z);
    if (!have_phase) {
      unwrapped = psi;
      have_phase = true;
    } else {
      unwrapped += std::remainder(psi - unwrapped, 2 * pi);
    }
    d.t.push_back(ens.t);
    d.R.push_back(std::abs(z));
    d.psi.push_back(unwrapped);
    if (ens.t >= t_transient - 1e-12 * options.T) {
      if (!kept_any) {
        first_kept = d.t.size() - 1;
        kept_any = true;
      }
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = wrap_angle(ens.phases[i] - psi);
        int bin = static_cast<int>((x + pi) / (2 * pi) * options.bins);
        bin = std::min(std::max(bin, 0), options.bins - 1);
        d.histogram[bin] += 1;
      }
      d.histogram_samples += n;
    }
  };

  observe();
  for (long step = 1; step <= steps; ++step) {
    if (threads == 1) {
      em_step(ens, options.dt);
    } else {
      const std::complex<double> w = ens.mean_field() * std::polar(1.0, ens.params.alpha);
      const double noise = std::sqrt(2 * ens.params.diffusion * options.dt);
      std::vector<std::jthread> workers;
      const Eigen::Index chunk = (n + threads - 1) / threads;
      for (int j = 0; j < threads; ++j) {
        const Eigen::Index lo = std::min<Eigen::Index>(n, j * chunk);
        const Eigen::Index len = std::min<Eigen::Index>(n, lo + chunk) - lo;
        if (len <= 0) break;
        workers.emplace_back([&, lo, len, j] {
          advance(ens, lo, len, w, options.dt, noise, streams[j].rng, streams[j].normal);
        });
      }
      workers.clear();  // joins
      finish_step(ens, options.dt);
    }
    if (step % options.observe_every == 0 || step == steps) observe();
  }

  if (kept_any) {
    const std::size_t count = d.t.size() - first_kept;
    double sum = 0;
    for (std::size_t i = first_kept; i < d.t.size(); ++i) sum += d.R[i];
    d.mean_R = sum / static_cast<double>(count);
    d.drift = slope(d.t, d.psi, first_kept, d.t.size());

    const int batches = static_cast<int>(std::min<std::size_t>(options.batches, count / 2));
    if (batches >= 2) {
      std::vector<double> means(batches), slopes(batches);
      for (int b = 0; b < batches; ++b) {
        const std::size_t lo = first_kept + count * b / batches;
        const std::size_t hi = first_kept + count * (b + 1) / batches;
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += d.R[i];
        means[b] = s / static_cast<double>(hi - lo);
        slopes[b] = slope(d.t, d.psi, lo, hi);
      }
      auto standard_error = [&](const std::vector<double>& v) {
        double m = 0;
        for (double x : v) m += x;
        m /= batches;
        double var = 0;
        for (double x : v) var += (x - m) * (x - m);
        return std::sqrt(var / (batches - 1) / batches);
      };
      d.stderr_R = standard_error(means);
      d.stderr_drift = standard_error(slopes);
    }
  }
  return d;
}

EmpiricalDensity empirical_density(const EnsembleDiagnostics& diag, const std::function<double(double)>& reference) {
  if (diag.histogram_samples <= 0 || diag.histogram.size() == 0) {
    throw std::invalid_argument("empirical_density: the histogram is empty");
  }
  const int bins = static_cast<int>(diag.histogram.size());
  const double width = 2 * pi / bins;
  EmpiricalDensity out;
  out.centers.resize(bins);
  out.density.resize(bins);
  double l1 = 0;
  for (int b = 0; b < bins; ++b) {
    out.centers[b] = -pi + (b + 0.5) * width;
    out.density[b] = diag.histogram[b] / (static_cast<double>(diag.histogram_samples) * width);
    l1 += std::abs(out.density[b] - reference(out.centers[b])) * width;
  }
  out.l1_distance = l1;
  return out;
}

std::function<double(double)> corotating_reference(double k, double r) {
  const AvmPoint<double> point{k, r};
  const auto f = avm_functionals(point);
  const double offset = std::atan2(-f.s1, f.c1);
  return [density = avm_density(point), offset](double x) { return density(x - offset); };
}

}  // namespace skmf
