#pragma once

// Euler-Maruyama simulation of N noisy Sakaguchi-Kuramoto oscillators,
//     d theta_i = (mu/N) sum_j sin(theta_j - theta_i + alpha) dt + sqrt(2D) dB_i.
// The single-harmonic coupling collapses onto the complex mean
// Z = R e^{i Psi} = (1/N) sum_j e^{i theta_j}:
//     (1/N) sum_j sin(theta_j - theta_i + alpha) = R sin(Psi - theta_i + alpha).
// The sum includes j = i. The drift is the one of the mean-field PDE, so a
// coherent cloud rotates at +k.

#include <Eigen/Core>
#include <boost/random/normal_distribution.hpp>

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace skmf {

struct ParticleParams {
  double mu{0};
  double alpha{0};
  double diffusion{1};
};

/// Generator recorded in output metadata.
inline constexpr const char* kParticleRng = "std::mt19937_64+boost::random::normal_distribution(ziggurat)";

struct ParticleEnsemble {
  Eigen::ArrayXd phases;  // wrapped to [-pi, pi)
  // cos and sin of the phases, advanced by rotation and resynchronized every few steps
  Eigen::ArrayXd cos_phase;
  Eigen::ArrayXd sin_phase;
  int steps_since_sync{0};
  ParticleParams params;
  std::uint64_t seed{0};
  std::mt19937_64 rng;
  boost::random::normal_distribution<double> normal{0.0, 1.0};
  double t{0};

  /// N phases drawn uniformly from the circle with the given seed.
  static ParticleEnsemble uniform(int n, const ParticleParams& params, std::uint64_t seed);
  /// Given phases (wrapped on entry) with a seeded noise stream.
  static ParticleEnsemble from_phases(const Eigen::ArrayXd& phases, const ParticleParams& params, std::uint64_t seed);

  /// Recompute cos_phase and sin_phase from the phases.
  void resync();
  /// Z from the cached unit vectors.
  std::complex<double> mean_field() const;
};

/// Z = (1/N) sum e^{i theta_j}, summed in index order.
std::complex<double> mean_field(const Eigen::ArrayXd& phases);

/// mu R sin(Psi - theta_i + alpha) for every particle.
Eigen::ArrayXd coupling_drift(const Eigen::ArrayXd& phases, const ParticleParams& params);

/// theta wrapped to [-pi, pi)
double wrap_angle(double theta);

/// One Euler-Maruyama step, in place.
void em_step(ParticleEnsemble& ens, double dt);

struct SimulationOptions {
  double T{50};
  double dt{1e-3};
  int observe_every{10};
  int bins{64};
  double transient_fraction{0.5};  // observations before T * fraction are discarded
  int batches{20};                 // for batch-means standard errors
  int threads{1};                  // > 1 splits particles over threads with their own streams
};

struct EnsembleDiagnostics {
  std::vector<double> t;
  std::vector<double> R;
  std::vector<double> psi;  // unwrapped
  Eigen::ArrayXd histogram;  // counts of theta - Psi over the post-transient window
  long long histogram_samples{0};
  double mean_R{0};
  double stderr_R{0};
  double drift{0};  // least-squares slope of psi over the post-transient window
  double stderr_drift{0};
};

EnsembleDiagnostics simulate(ParticleEnsemble& ens, const SimulationOptions& options);

struct EmpiricalDensity {
  Eigen::VectorXd centers;  // bin centres in [-pi, pi), relative to Psi
  Eigen::VectorXd density;  // integrates to 1
  double l1_distance{0};    // against the reference at the bin centres
};

/// Normalized histogram and its L1 distance to a co-rotating reference density.
/// Throws std::invalid_argument on an empty histogram.
EmpiricalDensity empirical_density(const EnsembleDiagnostics& diag, const std::function<double(double)>& reference);

/// Reference for the super-onset comparison: the travelling-wave profile at
/// (k, r), placed so that its mean phase sits at 0.
std::function<double(double)> corotating_reference(double k, double r);

}  // namespace skmf
