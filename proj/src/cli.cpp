#include "skmf/cli.hpp"

#include "skmf/avm.hpp"
#include "skmf/bessel.hpp"
#include "skmf/consistency.hpp"
#include "skmf/csv.hpp"
#include "skmf/meanfield.hpp"
#include "skmf/particles.hpp"
#include "skmf/verify.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

namespace skmf::cli {
namespace {

constexpr double pi = std::numbers::pi;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --alpha in radians or --alpha-deg, at most one
struct Angle {
  std::optional<double> radians;
  std::optional<double> degrees;

  void attach(CLI::App* app, bool required) {
    auto* rad = app->add_option("--alpha", radians, "frustration angle in radians");
    auto* deg = app->add_option("--alpha-deg", degrees, "frustration angle in degrees");
    rad->excludes(deg);
    deg->excludes(rad);
    required_ = required;
  }

  double value() const {
    if (radians) return *radians;
    if (degrees) return *degrees * pi / 180.0;
    if (required_) throw UsageError("one of --alpha or --alpha-deg is required");
    return 0.0;
  }

 private:
  bool required_{false};
};

struct Sink {
  std::ostream* stream{nullptr};
  std::unique_ptr<std::ofstream> file;
  std::string path;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string out_dir;

  std::filesystem::path resolve(const std::string& path) const {
    std::filesystem::path p(path);
    if (!out_dir.empty() && p.is_relative()) p = std::filesystem::path(out_dir) / p;
    return p;
  }

  // An explicit path, else a default name under --out-dir, else stdout.
  Sink open(const std::string& path, const std::string& default_name, bool stdout_fallback = true) const {
    Sink sink;
    std::string chosen = path;
    if (chosen.empty() && !out_dir.empty()) chosen = default_name;
    if (chosen.empty()) {
      if (stdout_fallback) sink.stream = &out;
      return sink;
    }
    const auto full = resolve(chosen);
    if (full.has_parent_path()) std::filesystem::create_directories(full.parent_path());
    sink.file = std::make_unique<std::ofstream>(full);
    if (!*sink.file) throw UsageError("cannot open " + full.string() + " for writing");
    sink.file->exceptions(std::ios::badbit);
    sink.stream = sink.file.get();
    sink.path = full.string();
    return sink;
  }
};

void common_metadata(CsvWriter& csv, const std::string& command) {
  csv.meta("program", "skmf").meta("version", kVersion).meta("command", command);
  csv.meta("eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION));
}

void write_branch_row(CsvWriter& csv, const BranchPoint& p) { csv.row({p.r, p.k, p.mu, p.c, p.residual}); }

const std::vector<std::string> kBranchColumns{"r", "k", "mu", "c", "residual"};

// ---------------------------------------------------------------- commands

struct BesselArgs {
  std::optional<int> n;
  std::optional<int> n_max;
  double r{0};
  std::string out;
};

int cmd_bessel(const Context& ctx, const BesselArgs& a) {
  if (!a.n && !a.n_max) throw UsageError("one of --n or --n-max is required");
  if (a.n_max && *a.n_max < 0) throw UsageError("--n-max must be >= 0");

  std::vector<std::vector<double>> rows;
  if (a.n) {
    rows.push_back({static_cast<double>(*a.n), bessel_i(*a.n, a.r)});
  } else {
    const auto t = bessel_i_range(*a.n_max, a.r);
    for (int n = 0; n <= *a.n_max; ++n) rows.push_back({static_cast<double>(n), t(n)});
  }

  auto sink = ctx.open(a.out, "bessel.csv");
  CsvWriter csv(*sink.stream);
  common_metadata(csv, "bessel");
  csv.meta("r", a.r);
  if (a.n) csv.meta("n", std::to_string(*a.n));
  if (a.n_max) {
    csv.meta("n_max", std::to_string(*a.n_max));
    // I_0^2 + 2 sum (-1)^n I_n^2 - 1 over all orders past the truncation point,
    // in extended precision
    const auto wide = bessel_i_range<long double>(static_cast<long double>(a.r));
    long double sum = wide(0) * wide(0);
    for (int n = 1; n <= wide.n_max; ++n) sum += 2.0L * ((n % 2 == 0) ? 1.0L : -1.0L) * wide(n) * wide(n);
    csv.meta("alternating_square_residual", static_cast<double>(sum - 1.0L));
    csv.meta("alternating_square_orders", std::to_string(wide.n_max));
  }
  csv.header({"n", "value"});
  for (const auto& row : rows) csv.row(row);
  return kSuccess;
}

struct AvmArgs {
  double k{0};
  double r{0};
  std::optional<int> grid;
  std::string out;
};

int cmd_avm(const Context& ctx, const AvmArgs& a) {
  if (a.grid && *a.grid < 2) throw UsageError("--grid must be >= 2");
  const AvmPoint<double> point{a.k, a.r};
  const auto f = avm_functionals(point);

  auto sink = ctx.open(a.out, "avm.csv");
  CsvWriter csv(*sink.stream);
  common_metadata(csv, "avm");
  csv.meta("k", a.k).meta("r", a.r);
  if (!a.grid) {
    csv.header({"k", "r", "c0", "c1", "s1", "cal_c1", "cal_s1", "cal_t1", "cal_r1"});
    csv.row({a.k, a.r, f.c0, f.c1, f.s1, f.cal_c1, f.cal_s1, f.cal_t1, f.cal_r1});
    return kSuccess;
  }
  const auto density = avm_density(point);
  csv.meta("grid", std::to_string(*a.grid));
  csv.meta("c0", f.c0).meta("c1", f.c1).meta("s1", f.s1);
  csv.meta("cal_c1", f.cal_c1).meta("cal_s1", f.cal_s1).meta("cal_t1", f.cal_t1).meta("cal_r1", f.cal_r1);
  csv.meta("flux_constant", density.flux_constant());
  csv.header({"phi", "chi", "rho"});
  const auto grid = periodic_grid<double>(*a.grid);
  for (int j = 0; j < *a.grid; ++j) {
    const double chi = density.chi(grid[j]);
    csv.row({grid[j], chi, chi / density.normalization()});
  }
  return kSuccess;
}

struct SolveArgs {
  double mu{0};
  Angle alpha;
  std::string out;
};

int cmd_solve(const Context& ctx, const SolveArgs& a) {
  const double alpha = a.alpha.value();
  const auto point = solve_selfconsistency(a.mu, alpha);

  auto sink = ctx.open(a.out, "solve.csv");
  CsvWriter csv(*sink.stream);
  common_metadata(csv, "solve");
  csv.meta("mu", a.mu).meta("alpha", alpha);
  if (!point) {
    csv.meta("solution", "incoherent_only");
    csv.header(kBranchColumns);
    csv.row({0, 0, a.mu, 0, 0});
    return kSuccess;
  }
  csv.meta("solution", "coherent");
  csv.header(kBranchColumns);
  write_branch_row(csv, *point);
  return kSuccess;
}

struct TraceArgs {
  Angle alpha;
  double r_max{0};
  int n_points{50};
  std::string out;
};

int cmd_trace(const Context& ctx, const TraceArgs& a) {
  const double alpha = a.alpha.value();
  if (!(a.r_max > 0)) throw UsageError("--r-max must be positive");
  if (a.n_points < 2) throw UsageError("-n must be >= 2");
  const auto curve = trace_branch(alpha, a.r_max, a.n_points);

  auto sink = ctx.open(a.out, "trace.csv");
  CsvWriter csv(*sink.stream);
  common_metadata(csv, "trace");
  csv.meta("alpha", alpha).meta("r_max", a.r_max).meta("n_points", std::to_string(a.n_points));
  if (curve.failure_index) {
    csv.meta("failure_index", std::to_string(*curve.failure_index)).meta("failure", curve.message);
  }
  csv.header(kBranchColumns);
  for (const auto& p : curve.points) write_branch_row(csv, p);
  if (curve.failure_index) {
    ctx.err << "trace stopped at point " << *curve.failure_index << ": " << curve.message << '\n';
    return kNumericalFailure;
  }
  return kSuccess;
}

struct PdeArgs {
  double mu{0};
  Angle alpha;
  double diffusion{1};
  double T{50};
  double dt{1e-3};
  int n_modes{128};
  double amplitude{0.05};
  int observe_every{100};
  std::string out;
  std::string coeffs_out;
};

int cmd_pde(const Context& ctx, const PdeArgs& a) {
  const double alpha = a.alpha.value();
  if (!(a.T > 0) || !(a.dt > 0)) throw UsageError("--T and --dt must be positive");
  if (a.n_modes < 1 || a.observe_every < 1) throw UsageError("--n-modes and --observe-every must be >= 1");
  const PdeParams params{a.mu, alpha, a.diffusion};
  const auto run = evolve(SpectralState::perturbed(a.n_modes, params, a.amplitude), a.T, a.dt, a.observe_every);
  const auto& d = run.diagnostics;

  std::string speed_fit = "undefined";
  try {
    speed_fit = format_number(wave_speed_estimate(d, 0.8 * a.T, a.T));
  } catch (const UndefinedSpeed&) {
  }

  auto sink = ctx.open(a.out, "pde.csv");
  CsvWriter csv(*sink.stream);
  common_metadata(csv, "pde");
  csv.meta("mu", a.mu).meta("alpha", alpha).meta("D", a.diffusion).meta("T", a.T).meta("dt", a.dt);
  csv.meta("n_modes", std::to_string(a.n_modes)).meta("amplitude", a.amplitude);
  csv.meta("observe_every", std::to_string(a.observe_every));
  csv.meta("initial", "uniform + amplitude cos(theta)").meta("integrator", "integrating-factor RK4");
  csv.meta("final_r0", d.r0.back()).meta("speed_fit_last_fifth", speed_fit);
  csv.header({"t", "r0", "psi", "speed_est"});
  for (std::size_t i = 0; i < d.t.size(); ++i) csv.row({d.t[i], d.r0[i], d.psi[i], d.speed[i]});

  if (!a.coeffs_out.empty()) {
    auto coeffs = ctx.open(a.coeffs_out, "", false);
    write_coefficients(*coeffs.stream, run.final_state);
  }
  return kSuccess;
}

struct ParticleArgs {
  double mu{0};
  Angle alpha;
  double diffusion{1};
  int n{50000};
  double T{50};
  double dt{1e-3};
  std::uint64_t seed{42};
  int bins{64};
  int observe_every{10};
  double transient{0.5};
  int batches{20};
  int threads{1};
  std::string out;
  std::string hist_out;
};

int cmd_particles(const Context& ctx, const ParticleArgs& a) {
  const double alpha = a.alpha.value();
  if (a.n < 1) throw UsageError("--N must be >= 1");
  if (!(a.transient >= 0 && a.transient < 1)) throw UsageError("--transient must lie in [0, 1)");
  SimulationOptions o;
  o.T = a.T;
  o.dt = a.dt;
  o.observe_every = a.observe_every;
  o.bins = a.bins;
  o.transient_fraction = a.transient;
  o.batches = a.batches;
  o.threads = a.threads;
  const ParticleParams params{a.mu, alpha, a.diffusion};
  auto ens = ParticleEnsemble::uniform(a.n, params, a.seed);
  const auto d = simulate(ens, o);

  Metadata meta{{"mu", format_number(a.mu)},
                {"alpha", format_number(alpha)},
                {"D", format_number(a.diffusion)},
                {"N", std::to_string(a.n)},
                {"T", format_number(a.T)},
                {"dt", format_number(a.dt)},
                {"seed", std::to_string(a.seed)},
                {"rng", kParticleRng},
                {"threads", std::to_string(a.threads)},
                {"observe_every", std::to_string(a.observe_every)},
                {"transient", format_number(a.transient)},
                {"batches", std::to_string(a.batches)},
                {"bins", std::to_string(a.bins)},
                {"initial", "uniform"},
                {"mean_R", format_number(d.mean_R)},
                {"stderr_R", format_number(d.stderr_R)},
                {"drift", format_number(d.drift)},
                {"stderr_drift", format_number(d.stderr_drift)}};

  // the travelling wave, when one exists, as the reference profile
  std::function<double(double)> reference = [](double) { return 1 / (2 * pi); };
  std::string reference_name = "uniform";
  if (a.mu > 0) {
    if (const auto bp = solve_selfconsistency(a.mu, alpha)) {
      reference = corotating_reference(bp->k, bp->r);
      reference_name = "travelling_wave";
      meta.emplace_back("predicted_R", format_number(bp->r / a.mu));
      meta.emplace_back("predicted_speed", format_number(bp->k));
    }
  }
  const auto density = empirical_density(d, reference);
  meta.emplace_back("reference", reference_name);
  meta.emplace_back("histogram_l1", format_number(density.l1_distance));

  {
    auto sink = ctx.open(a.out, "particles.csv");
    CsvWriter csv(*sink.stream);
    common_metadata(csv, "particles");
    csv.meta(meta).meta("Psi", "unwrapped");
    csv.header({"t", "R", "Psi"});
    for (std::size_t i = 0; i < d.t.size(); ++i) csv.row({d.t[i], d.R[i], d.psi[i]});
  }
  auto hist = ctx.open(a.hist_out, "particles_histogram.csv", false);
  if (hist.stream) {
    CsvWriter csv(*hist.stream);
    common_metadata(csv, "particles");
    csv.meta(meta).meta("bin_center", "theta - Psi");
    csv.header({"bin_center", "density"});
    for (Eigen::Index b = 0; b < density.centers.size(); ++b) csv.row({density.centers[b], density.density[b]});
  }
  return kSuccess;
}

struct VerifyArgs {
  std::string suite{"all"};
  std::string out;
};

int cmd_verify(const Context& ctx, const VerifyArgs& a) {
  const auto checks = run_verify_suite(a.suite);
  auto sink = ctx.open(a.out, "verify.txt");
  print_check_table(*sink.stream, checks);
  for (const auto& c : checks) {
    if (!c.passed) return kVerificationFailure;
  }
  return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Travelling waves of the noisy Sakaguchi-Kuramoto model", "skmf"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  app.fallthrough();  // --out-dir may follow the subcommand
  std::string out_dir;
  app.add_option("--out-dir", out_dir, "directory for output files (relative --out paths resolve here)");
  app.set_version_flag("--version", std::string("skmf ") + kVersion);

  BesselArgs bessel;
  auto* c_bessel = app.add_subcommand("bessel", "modified Bessel functions I_n(r)");
  auto* o_n = c_bessel->add_option("--n", bessel.n, "single order");
  auto* o_nmax = c_bessel->add_option("--n-max", bessel.n_max, "orders 0..n_max");
  o_n->excludes(o_nmax);
  o_nmax->excludes(o_n);
  c_bessel->add_option("--r", bessel.r, "argument")->required();
  c_bessel->add_option("-o,--out", bessel.out, "output CSV");

  AvmArgs avm;
  auto* c_avm = app.add_subcommand("avm", "extended von Mises density and its functionals");
  c_avm->add_option("--k", avm.k, "wave speed")->required();
  c_avm->add_option("--r", avm.r, "rescaled order parameter")->required();
  c_avm->add_option("--grid", avm.grid, "tabulate chi and rho on this many points");
  c_avm->add_option("-o,--out", avm.out, "output CSV");

  SolveArgs solve;
  auto* c_solve = app.add_subcommand("solve", "coherent wave at given coupling and frustration");
  c_solve->add_option("--mu", solve.mu, "coupling strength")->required();
  solve.alpha.attach(c_solve, true);
  c_solve->add_option("-o,--out", solve.out, "output CSV");

  TraceArgs trace;
  auto* c_trace = app.add_subcommand("trace", "branch of coherent waves from onset");
  trace.alpha.attach(c_trace, true);
  c_trace->add_option("--r-max", trace.r_max, "largest rescaled order parameter")->required();
  c_trace->add_option("-n,--n-points", trace.n_points, "number of samples, including r = 0")->capture_default_str();
  c_trace->add_option("-o,--out", trace.out, "output CSV");

  PdeArgs pde;
  auto* c_pde = app.add_subcommand("pde", "spectral solution of the mean-field equation");
  c_pde->add_option("--mu", pde.mu, "coupling strength")->required();
  pde.alpha.attach(c_pde, false);
  c_pde->add_option("--D", pde.diffusion, "diffusion coefficient")->capture_default_str();
  c_pde->add_option("--T", pde.T, "final time")->capture_default_str();
  c_pde->add_option("--dt", pde.dt, "time step")->capture_default_str();
  c_pde->add_option("--n-modes", pde.n_modes, "Fourier modes")->capture_default_str();
  c_pde->add_option("--amplitude", pde.amplitude, "initial cos(theta) perturbation")->capture_default_str();
  c_pde->add_option("--observe-every", pde.observe_every, "steps between diagnostics rows")->capture_default_str();
  c_pde->add_option("--coeffs-out", pde.coeffs_out, "write final coefficients n,re,im");
  c_pde->add_option("-o,--out", pde.out, "output CSV");

  ParticleArgs part;
  auto* c_part = app.add_subcommand("particles", "Euler-Maruyama simulation of N oscillators");
  c_part->add_option("--mu", part.mu, "coupling strength")->required();
  part.alpha.attach(c_part, false);
  c_part->add_option("--D", part.diffusion, "diffusion coefficient")->capture_default_str();
  c_part->add_option("--N", part.n, "number of oscillators")->capture_default_str();
  c_part->add_option("--T", part.T, "final time")->capture_default_str();
  c_part->add_option("--dt", part.dt, "time step")->capture_default_str();
  c_part->add_option("--seed", part.seed, "random seed")->capture_default_str();
  c_part->add_option("--bins", part.bins, "histogram bins")->capture_default_str();
  c_part->add_option("--observe-every", part.observe_every, "steps between rows")->capture_default_str();
  c_part->add_option("--transient", part.transient, "fraction of T discarded from averages")->capture_default_str();
  c_part->add_option("--batches", part.batches, "batches for standard errors")->capture_default_str();
  c_part->add_option("--threads", part.threads, "worker threads; changes the random streams")->capture_default_str();
  c_part->add_option("--hist-out", part.hist_out, "histogram CSV of theta - Psi");
  c_part->add_option("-o,--out", part.out, "output CSV");

  VerifyArgs verify;
  auto* c_verify = app.add_subcommand("verify", "run the invariant checks");
  c_verify->add_option("--suite", verify.suite, "suite name")
      ->check(CLI::IsMember(verify_suite_names()))
      ->capture_default_str();
  c_verify->add_option("-o,--out", verify.out, "write the table here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  const Context ctx{out, err, out_dir};
  try {
    if (*c_bessel) return cmd_bessel(ctx, bessel);
    if (*c_avm) return cmd_avm(ctx, avm);
    if (*c_solve) return cmd_solve(ctx, solve);
    if (*c_trace) return cmd_trace(ctx, trace);
    if (*c_pde) return cmd_pde(ctx, pde);
    if (*c_part) return cmd_particles(ctx, part);
    if (*c_verify) return cmd_verify(ctx, verify);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DegenerateAngle& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const InstabilityError& e) {
    err << "numerical failure: " << e.what() << " (try a smaller --dt)\n";
    return kNumericalFailure;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kUsageError;
}

}  // namespace skmf::cli
