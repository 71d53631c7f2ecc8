// dtc: command-line front end for the Floquet chain simulator.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dtc/csv.hpp"
#include "dtc/errors.hpp"
#include "dtc/floquet_model.hpp"
#include "dtc/ion_chain.hpp"
#include "dtc/parallel.hpp"
#include "dtc/pulse_control.hpp"
#include "dtc/rng.hpp"
#include "dtc/spectral_analysis.hpp"
#include "dtc/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kAlphaReference = 1.51;

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed on " + path.string());
}

struct SimulateArgs {
  int sites = 10;
  int periods = 100;
  double epsilon = 0.0;
  double j0t2 = 0.0;
  double alpha = 1.51;
  double wt3 = std::numbers::pi;
  std::uint64_t seed = 2024;
  std::uint64_t instance = 0;
  std::string pulse_model = "ideal";
  double rabi_offset = 0.0;
  double noise_rms = 0.0;
  double period_us = 75.0;
  std::string out = "simulate_out";
};

int run_simulate(const SimulateArgs& a) {
  dtc::floquet::FloquetConfig cfg;
  cfg.sites = a.sites;
  cfg.periods = a.periods;
  cfg.epsilon = a.epsilon;
  cfg.couplings = dtc::floquet::PowerLawCouplings{a.j0t2, a.alpha};
  cfg.disorder_scale = a.wt3;
  cfg.pulse_model = dtc::floquet::pulse_model_from_string(a.pulse_model);
  cfg.period_seconds = a.period_us * 1e-6;
  if (a.rabi_offset != 0.0) {
    cfg.rabi_error = dtc::pulse::RabiErrorModel::uniform_static(a.sites, a.rabi_offset);
  }
  cfg.rabi_error.noise_rms = a.noise_rms;
  cfg.rabi_error.noise_seed = dtc::derive_seed(a.seed, a.instance, 0xB1ULL);
  cfg.validate();
  if (auto w = cfg.regime_warning()) std::cerr << "warning: " << *w << '\n';

  const auto inst = dtc::floquet::disorder_for_instance(a.sites, a.wt3, a.seed, a.instance);
  const auto traj = dtc::floquet::run_trajectory(cfg, inst);
  const auto spec = dtc::spectral::dft_spectrum(traj);
  const auto peak = dtc::spectral::central_peak(spec);

  fs::create_directories(a.out);
  dtc::sweep::write_trajectory_csv(traj, fs::path(a.out) / "trajectory.csv");
  dtc::sweep::write_spectrum_csv(spec, cfg.period_seconds, fs::path(a.out) / "spectrum.csv");

  json summary;
  summary["sites"] = a.sites;
  summary["periods"] = a.periods;
  summary["epsilon"] = a.epsilon;
  summary["j0t2"] = a.j0t2;
  summary["alpha"] = a.alpha;
  summary["wt3"] = a.wt3;
  summary["pulse_model"] = a.pulse_model;
  summary["master_seed"] = a.seed;
  summary["instance"] = a.instance;
  summary["instance_seed"] = inst.seed;
  summary["disorder_phases"] = inst.phases;
  summary["central_amplitudes"] = peak.amplitudes;
  summary["central_mean"] = peak.mean;
  summary["site_variance"] = peak.variance;
  std::vector<int> bins;
  int locked = 0;
  for (int i = 0; i < spec.sites; ++i) {
    bins.push_back(spec.peak_bin(i));
    if (bins.back() == spec.samples / 2) ++locked;
  }
  summary["peak_bins"] = bins;
  summary["sites_locked"] = locked;
  summary["version"] = dtc::sweep::kVersion;
  write_json(summary, fs::path(a.out) / "summary.json");

  std::printf("central amplitude mean %.6f  site variance %.6g  locked sites %d/%d\n", peak.mean,
              peak.variance, locked, spec.sites);
  return 0;
}

int run_sweep_cmd(const std::string& config_path, int threads, const std::string& out) {
  auto cfg = dtc::sweep::load_sweep_config(config_path);
  if (threads > 0) cfg.threads = threads;
  if (!out.empty()) cfg.output_dir = out;
  if (cfg.output_dir.empty()) cfg.output_dir = "sweep_out";
  const auto store = dtc::sweep::run_sweep(cfg);

  int failed = 0;
  for (const auto& r : store.records) failed += r.ok() ? 0 : 1;
  std::printf("%zu trajectories (%d failed) written to %s\n", store.records.size(), failed,
              cfg.output_dir.string().c_str());
  bool clean = failed == 0;
  for (const auto& c : store.curves) {
    if (c.fit) {
      std::printf("J0t2 %-8g eps_p %.5f  gamma %.4f  interior max %s\n", c.curve.j0t2,
                  c.fit->shape.center, c.fit->shape.gamma, c.interior_maximum ? "yes" : "no");
    } else if (!c.error.empty()) {
      std::printf("J0t2 %-8g failed: %s\n", c.curve.j0t2, c.error.c_str());
      clean = false;
    }
  }
  for (const auto& b : store.bootstraps) {
    if (b.error.empty()) {
      std::printf("bootstrap J0t2 %-8g mean eps_p %.5f  sd %.5f  failures %d\n", b.j0t2,
                  b.result.mean_center, b.result.stddev_center, b.result.failures);
    } else {
      std::printf("bootstrap J0t2 %-8g failed: %s\n", b.j0t2, b.error.c_str());
      clean = false;
    }
  }
  return clean ? 0 : 1;
}

int run_fit_boundary(const std::string& store, std::string out) {
  if (out.empty()) out = store;
  auto curves = dtc::sweep::load_variance_curves(fs::path(store) / "variance_curves.csv");
  if (curves.empty()) throw std::runtime_error("no variance curves in " + store);
  dtc::spectral::FitOptions opts;
  const fs::path manifest = fs::path(store) / "manifest.json";
  if (fs::exists(manifest)) {
    std::ifstream in(manifest);
    const json m = json::parse(in);
    if (m.contains("config")) opts = dtc::sweep::sweep_config_from_json(m["config"]).fit;
  }
  dtc::sweep::fit_curves(curves, opts);
  fs::create_directories(out);
  dtc::sweep::write_fits_csv(curves, out);
  bool clean = true;
  for (const auto& c : curves) {
    if (c.fit) {
      std::printf("J0t2 %-8g eps_p %.5f  gamma %.4f  converged %s\n", c.curve.j0t2,
                  c.fit->shape.center, c.fit->shape.gamma, c.fit->converged ? "yes" : "no");
      clean = clean && c.fit->converged;
    } else {
      std::printf("J0t2 %-8g failed: %s\n", c.curve.j0t2, c.error.c_str());
      clean = false;
    }
  }
  return clean ? 0 : 1;
}

struct BootstrapArgs {
  int pool_size = 100;
  int sample_size = 10;
  int reps = 10000;
  std::uint64_t seed = 1;
  std::uint64_t master_seed = 2024;
  double j0t2 = 0.036;
  double wt3 = std::numbers::pi;
  int threads = 1;
  bool with_replacement = false;
  std::string config;
  std::string out = "bootstrap_out";
};

int run_bootstrap(const BootstrapArgs& a) {
  dtc::sweep::SweepConfig cfg;
  if (!a.config.empty()) cfg = dtc::sweep::load_sweep_config(a.config);
  cfg.base.disorder_scale = a.wt3;
  cfg.master_seed = a.master_seed;
  cfg.threads = a.threads;
  cfg.j0t2_values = {a.j0t2};
  cfg.bootstrap = dtc::sweep::BootstrapSettings{a.pool_size, a.sample_size, a.reps, a.seed,
                                                a.with_replacement};
  cfg.validate();

  const auto pool = dtc::sweep::build_instance_pool(cfg, a.j0t2, a.pool_size);
  fs::create_directories(a.out);
  {
    std::vector<std::string> header{"instance", "seed"};
    for (std::size_t g = 0; g < pool.epsilons.size(); ++g) {
      header.push_back("eps_" + dtc::io::format_double(pool.epsilons[g]));
    }
    dtc::io::CsvWriter w(fs::path(a.out) / "pool_variances.csv", header);
    for (std::size_t k = 0; k < pool.site_variances.size(); ++k) {
      w.cell(static_cast<unsigned long long>(k));
      w.cell(static_cast<unsigned long long>(dtc::derive_seed(cfg.master_seed, k)));
      for (double v : pool.site_variances[k]) w.cell(v);
      w.end_row();
    }
    w.close();
  }

  dtc::spectral::BootstrapOptions opts;
  opts.sample_size = a.sample_size;
  opts.repetitions = a.reps;
  opts.seed = a.seed;
  opts.with_replacement = a.with_replacement;
  opts.threads = dtc::resolve_threads(a.threads);
  opts.fit = cfg.fit;
  dtc::sweep::BootstrapRecord rec;
  rec.j0t2 = a.j0t2;
  rec.settings = *cfg.bootstrap;
  rec.result = dtc::spectral::bootstrap_boundary(pool, opts);
  dtc::sweep::write_bootstrap_csv({rec}, a.out);

  std::printf("mean eps_p %.5f  sd %.5f  reps %d  failures %d%s\n", rec.result.mean_center,
              rec.result.stddev_center, rec.result.repetitions, rec.result.failures,
              rec.result.degenerate ? "  (degenerate)" : "");
  return rec.result.degenerate ? 1 : 0;
}

int run_modes(int sites, double anisotropy, double mu, const std::string& out) {
  const auto geom = dtc::ions::equilibrium_positions(sites);
  const auto modes = dtc::ions::transverse_modes(geom, anisotropy);
  const auto profile = dtc::ions::coupling_from_modes(modes, mu);
  const auto by_distance = dtc::ions::mean_coupling_by_distance(profile.couplings);

  fs::create_directories(out);
  {
    dtc::io::CsvWriter w(fs::path(out) / "positions.csv", {"ion", "position"});
    for (int i = 0; i < sites; ++i) {
      w.cell(i).cell(geom.positions[i]);
      w.end_row();
    }
    w.close();
  }
  {
    std::vector<std::string> header{"mode", "frequency"};
    for (int i = 0; i < sites; ++i) header.push_back("b_" + std::to_string(i));
    dtc::io::CsvWriter w(fs::path(out) / "modes.csv", header);
    for (int m = 0; m < sites; ++m) {
      w.cell(m).cell(modes.frequencies[m]);
      for (int i = 0; i < sites; ++i) w.cell(modes.b(i, m));
      w.end_row();
    }
    w.close();
  }
  {
    std::vector<std::string> header{"ion"};
    for (int j = 0; j < sites; ++j) header.push_back("j_" + std::to_string(j));
    dtc::io::CsvWriter w(fs::path(out) / "couplings.csv", header);
    for (int i = 0; i < sites; ++i) {
      w.cell(i);
      for (int j = 0; j < sites; ++j) w.cell(profile.couplings(i, j));
      w.end_row();
    }
    w.close();
  }
  {
    dtc::io::CsvWriter w(fs::path(out) / "coupling_by_distance.csv",
                         {"distance", "mean_abs_coupling", "power_law"});
    for (std::size_t d = 0; d < by_distance.size(); ++d) {
      const double r = static_cast<double>(d + 1);
      w.cell(static_cast<int>(d + 1)).cell(by_distance[d]);
      w.cell(profile.fit.pairs > 0 ? profile.fit.prefactor * std::pow(r, -profile.fit.alpha)
                                   : 0.0);
      w.end_row();
    }
    w.close();
  }
  json summary;
  summary["sites"] = sites;
  summary["anisotropy"] = anisotropy;
  summary["mu"] = mu;
  summary["newton_iterations"] = geom.iterations;
  summary["max_force_residual"] = geom.max_force_residual;
  summary["alpha"] = profile.fit.alpha;
  summary["alpha_reference"] = kAlphaReference;
  summary["alpha_fit_residual"] = profile.fit.residual;
  summary["alpha_fit_pairs"] = profile.fit.pairs;
  write_json(summary, fs::path(out) / "summary.json");

  std::printf("COM %.6f  lowest %.6f  mu %.6f\n", modes.frequencies.front(),
              modes.frequencies.back(), mu);
  if (profile.fit.pairs > 0) {
    std::printf("fitted alpha %.4f (reference %.2f, deviation %+.3f, rms log residual %.3f)\n",
                profile.fit.alpha, kAlphaReference, profile.fit.alpha - kAlphaReference,
                profile.fit.residual);
  } else {
    std::printf("chain too short for a power-law fit\n");
  }
  return 0;
}

int run_bb1(const std::vector<double>& deltas, double noise_rms, double epsilon, int trials,
            std::uint64_t seed, const std::string& out) {
  const auto rep = dtc::pulse::bb1_suppression(deltas, epsilon, noise_rms, trials, seed);
  if (!out.empty()) {
    fs::create_directories(out);
    dtc::io::CsvWriter w(fs::path(out) / "bb1.csv",
                         {"delta", "plain_infidelity", "bb1_infidelity", "ratio"});
    for (const auto& r : rep.rows) {
      w.cell(r.delta).cell(r.plain_infidelity).cell(r.bb1_infidelity);
      w.cell(r.bb1_infidelity > 0.0 ? r.plain_infidelity / r.bb1_infidelity : INFINITY);
      w.end_row();
    }
    w.close();
  }
  std::printf("%10s %14s %14s %10s\n", "delta", "plain", "bb1", "ratio");
  for (const auto& r : rep.rows) {
    std::printf("%10.5f %14.6e %14.6e %10.3g\n", r.delta, r.plain_infidelity, r.bb1_infidelity,
                r.bb1_infidelity > 0.0 ? r.plain_infidelity / r.bb1_infidelity : INFINITY);
  }
  std::printf("log-log slope: plain %.3f  bb1 %.3f\n", rep.plain_slope, rep.bb1_slope);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet spin-chain time-crystal simulator"};
  app.set_version_flag("--version", dtc::sweep::kVersion);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one trajectory and its spectrum");
  simulate->add_option("--sites", sim.sites, "Chain length")->check(CLI::Range(1, 24));
  simulate->add_option("--periods", sim.periods, "Floquet periods N")->check(CLI::PositiveNumber);
  simulate->add_option("--epsilon", sim.epsilon, "Flip-angle error")->check(CLI::Range(0.0, 0.5));
  simulate->add_option("--j0t2", sim.j0t2, "Nearest-neighbour Ising phase (rad)");
  simulate->add_option("--alpha", sim.alpha, "Power-law exponent");
  simulate->add_option("--wt3", sim.wt3, "Disorder width W t3 (rad)")->check(CLI::NonNegativeNumber);
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--instance", sim.instance, "Disorder instance index");
  simulate->add_option("--pulse-model", sim.pulse_model, "ideal or bb1")
      ->check(CLI::IsMember({"ideal", "bb1"}));
  simulate->add_option("--rabi-offset", sim.rabi_offset, "Static fractional Rabi error");
  simulate->add_option("--noise-rms", sim.noise_rms, "Per-pulse Rabi noise rms")
      ->check(CLI::NonNegativeNumber);
  simulate->add_option("--period-us", sim.period_us, "Floquet period for frequency axes")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "Output directory");

  std::string sweep_config, sweep_out;
  int sweep_threads = 0;
  auto* sweep = app.add_subcommand("sweep", "Phase-diagram sweep from a JSON config");
  sweep->add_option("--config", sweep_config, "Sweep config file")->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--threads", sweep_threads, "Worker threads (overrides config)")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--out", sweep_out, "Output directory (overrides config)");

  std::string fit_store, fit_out;
  auto* fit = app.add_subcommand("fit-boundary", "Fit the variance curves of a result store");
  fit->add_option("--store", fit_store, "Result store directory")->required()
      ->check(CLI::ExistingDirectory);
  fit->add_option("--out", fit_out, "Output directory (default: the store)");

  BootstrapArgs boot;
  auto* bootstrap = app.add_subcommand("bootstrap", "Instance pool and boundary resampling");
  bootstrap->add_option("--pool-size", boot.pool_size, "Pool instances")->check(CLI::PositiveNumber);
  bootstrap->add_option("--sample-size", boot.sample_size, "Instances per resample")
      ->check(CLI::PositiveNumber);
  bootstrap->add_option("--reps", boot.reps, "Repetitions")->check(CLI::PositiveNumber);
  bootstrap->add_option("--seed", boot.seed, "Resampling seed");
  bootstrap->add_option("--master-seed", boot.master_seed, "Disorder master seed");
  bootstrap->add_option("--j0t2", boot.j0t2, "Nearest-neighbour Ising phase (rad)");
  bootstrap->add_option("--wt3", boot.wt3, "Disorder width W t3 (rad)")
      ->check(CLI::NonNegativeNumber);
  bootstrap->add_option("--threads", boot.threads, "Worker threads")->check(CLI::NonNegativeNumber);
  bootstrap->add_flag("--with-replacement", boot.with_replacement, "Resample with replacement");
  bootstrap->add_option("--config", boot.config, "Sweep config supplying grid and chain")
      ->check(CLI::ExistingFile);
  bootstrap->add_option("--out", boot.out, "Output directory");

  int mode_sites = 10;
  double anisotropy = 4.8 / 0.44;
  double mu = -1.0;
  std::string modes_out = "modes_out";
  auto* modes = app.add_subcommand("modes", "Ion-chain modes and coupling profile");
  modes->add_option("--sites", mode_sites, "Number of ions")
      ->check(CLI::Range(dtc::ions::kMinIons, dtc::ions::kMaxIons));
  modes->add_option("--anisotropy", anisotropy, "Transverse/axial trap frequency ratio")
      ->check(CLI::PositiveNumber);
  modes->add_option("--mu", mu, "Beat-note detuning in axial units (default COM + 0.155/0.44)");
  modes->add_option("--out", modes_out, "Output directory");

  std::vector<double> deltas{0.002, 0.004, 0.006, 0.008, 0.010, 0.012, 0.014, 0.016};
  double bb1_noise = 0.0, bb1_eps = 0.0;
  int bb1_trials = 200;
  std::uint64_t bb1_seed = 7;
  std::string bb1_out;
  auto* bb1 = app.add_subcommand("bb1", "BB1 versus plain pulse error suppression");
  bb1->add_option("--delta-grid", deltas, "Comma-separated static Rabi errors")->delimiter(',');
  bb1->add_option("--noise-rms", bb1_noise, "Shot-to-shot Rabi noise rms")
      ->check(CLI::NonNegativeNumber);
  bb1->add_option("--epsilon", bb1_eps, "Target flip-angle error")->check(CLI::Range(0.0, 0.5));
  bb1->add_option("--trials", bb1_trials, "Noise draws per point")->check(CLI::PositiveNumber);
  bb1->add_option("--seed", bb1_seed, "Noise seed");
  bb1->add_option("--out", bb1_out, "Output directory for bb1.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*sweep) return run_sweep_cmd(sweep_config, sweep_threads, sweep_out);
    if (*fit) return run_fit_boundary(fit_store, fit_out);
    if (*bootstrap) return run_bootstrap(boot);
    if (*modes) {
      if (mu < 0.0) {
        const auto g = dtc::ions::equilibrium_positions(mode_sites);
        mu = dtc::ions::transverse_modes(g, anisotropy).frequencies.front() + 0.155 / 0.44;
      }
      return run_modes(mode_sites, anisotropy, mu, modes_out);
    }
    if (*bb1) return run_bb1(deltas, bb1_noise, bb1_eps, bb1_trials, bb1_seed, bb1_out);
  } catch (const dtc::ChainUnstable& e) {
    std::cerr << "error: chain unstable: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
