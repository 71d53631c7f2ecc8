#include "dtc/sweep.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dtc/csv.hpp"
#include "dtc/parallel.hpp"
#include "dtc/rng.hpp"

namespace dtc::sweep {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0 && hi > lo) || points < 2) {
    throw std::invalid_argument("log grid needs 0 < lo < hi and at least 2 points");
  }
  std::vector<double> g(static_cast<std::size_t>(points));
  const double ratio = std::log(hi / lo);
  for (int k = 0; k < points; ++k) g[k] = lo * std::exp(ratio * k / (points - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> default_epsilon_grid() { return log_grid(0.005, 0.15, 16); }

std::vector<double> default_j0t2_ladder() { return {0.006, 0.012, 0.024, 0.036}; }

void SweepConfig::validate() const {
  if (instances < 1) throw std::invalid_argument("instance count must be >= 1");
  if (epsilons.empty()) throw std::invalid_argument("epsilon grid is empty");
  if (j0t2_values.empty()) throw std::invalid_argument("J0t2 list is empty");
  for (std::size_t g = 0; g < epsilons.size(); ++g) {
    if (g > 0 && !(epsilons[g] > epsilons[g - 1])) {
      throw std::invalid_argument("epsilon grid must be strictly increasing");
    }
    if (fit_curves && !(epsilons[g] > 0.0)) {
      throw std::invalid_argument("fit sweeps need every epsilon > 0");
    }
  }
  for (double e : epsilons) cell_config(j0t2_values.front(), e).validate();
  for (double j : j0t2_values) cell_config(j, epsilons.front()).validate();
  if (bootstrap) {
    if (bootstrap->pool_size < 1 || bootstrap->sample_size < 1 || bootstrap->repetitions < 1) {
      throw std::invalid_argument("bootstrap sizes must be >= 1");
    }
    if (!bootstrap->with_replacement && bootstrap->sample_size > bootstrap->pool_size) {
      throw std::invalid_argument("bootstrap sample size exceeds pool size");
    }
  }
}

floquet::FloquetConfig SweepConfig::cell_config(double j0t2, double epsilon) const {
  floquet::FloquetConfig c = base;
  c.epsilon = epsilon;
  c.couplings = floquet::PowerLawCouplings{j0t2, alpha};
  return c;
}

namespace {

template <typename T>
T take(json& obj, const char* key, T fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  T v = it->get<T>();
  obj.erase(it);
  return v;
}

void reject_unknown(const json& obj, const std::string& where) {
  if (!obj.empty()) {
    throw std::invalid_argument("unknown key '" + obj.begin().key() + "' in " + where);
  }
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

SweepConfig sweep_config_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("sweep config must be a JSON object");
  json obj = doc;
  SweepConfig c;
  c.base.sites = take(obj, "sites", c.base.sites);
  c.base.periods = take(obj, "periods", c.base.periods);
  c.alpha = take(obj, "alpha", c.alpha);
  c.base.disorder_scale = take(obj, "wt3", c.base.disorder_scale);
  c.base.period_seconds = take(obj, "period_seconds", c.base.period_seconds);
  c.base.pulse_model =
      floquet::pulse_model_from_string(take<std::string>(obj, "pulse_model", "ideal"));
  if (auto it = obj.find("rabi"); it != obj.end()) {
    json rabi = *it;
    obj.erase(it);
    if (auto s = rabi.find("static_offset"); s != rabi.end()) {
      if (s->is_array()) {
        c.base.rabi_error.static_offset = s->get<std::vector<double>>();
      } else {
        c.base.rabi_error = pulse::RabiErrorModel::uniform_static(c.base.sites, s->get<double>());
      }
      rabi.erase(s);
    }
    c.base.rabi_error.noise_rms = take(rabi, "noise_rms", 0.0);
    c.base.rabi_error.noise_seed = take<std::uint64_t>(rabi, "noise_seed", 0);
    reject_unknown(rabi, "rabi");
  }
  if (auto it = obj.find("epsilons"); it != obj.end()) {
    c.epsilons = it->get<std::vector<double>>();
    obj.erase(it);
  } else if (auto g = obj.find("epsilon_grid"); g != obj.end()) {
    json grid = *g;
    obj.erase(g);
    const double lo = take(grid, "min", 0.005);
    const double hi = take(grid, "max", 0.15);
    const int points = take(grid, "points", 16);
    reject_unknown(grid, "epsilon_grid");
    c.epsilons = log_grid(lo, hi, points);
  }
  c.j0t2_values = take(obj, "j0t2", c.j0t2_values);
  c.instances = take(obj, "instances", c.instances);
  c.master_seed = take(obj, "master_seed", c.master_seed);
  c.threads = take(obj, "threads", c.threads);
  c.output_dir = take<std::string>(obj, "output_dir", c.output_dir.string());
  c.save_trajectories = take(obj, "save_trajectories", c.save_trajectories);
  c.fit_curves = take(obj, "fit_curves", c.fit_curves);
  if (auto it = obj.find("fit"); it != obj.end()) {
    json fit = *it;
    obj.erase(it);
    c.fit.sem_floor = take(fit, "sem_floor", c.fit.sem_floor);
    c.fit.diameter_tolerance = take(fit, "diameter_tolerance", c.fit.diameter_tolerance);
    c.fit.max_evaluations = take(fit, "max_evaluations", c.fit.max_evaluations);
    reject_unknown(fit, "fit");
  }
  if (auto it = obj.find("bootstrap"); it != obj.end()) {
    json b = *it;
    obj.erase(it);
    BootstrapSettings s;
    s.pool_size = take(b, "pool_size", s.pool_size);
    s.sample_size = take(b, "sample_size", s.sample_size);
    s.repetitions = take(b, "repetitions", s.repetitions);
    s.seed = take(b, "seed", s.seed);
    s.with_replacement = take(b, "with_replacement", s.with_replacement);
    reject_unknown(b, "bootstrap");
    c.bootstrap = s;
  }
  reject_unknown(obj, "sweep config");
  c.validate();
  return c;
}

json to_json(const SweepConfig& c) {
  json j;
  j["sites"] = c.base.sites;
  j["periods"] = c.base.periods;
  j["alpha"] = c.alpha;
  j["wt3"] = c.base.disorder_scale;
  j["period_seconds"] = c.base.period_seconds;
  j["pulse_model"] = floquet::to_string(c.base.pulse_model);
  j["rabi"] = {{"static_offset", c.base.rabi_error.static_offset},
               {"noise_rms", c.base.rabi_error.noise_rms},
               {"noise_seed", c.base.rabi_error.noise_seed}};
  j["epsilons"] = c.epsilons;
  j["j0t2"] = c.j0t2_values;
  j["instances"] = c.instances;
  j["master_seed"] = c.master_seed;
  j["threads"] = c.threads;
  j["output_dir"] = c.output_dir.string();
  j["save_trajectories"] = c.save_trajectories;
  j["fit_curves"] = c.fit_curves;
  j["fit"] = {{"sem_floor", c.fit.sem_floor},
              {"diameter_tolerance", c.fit.diameter_tolerance},
              {"max_evaluations", c.fit.max_evaluations}};
  if (c.bootstrap) {
    j["bootstrap"] = {{"pool_size", c.bootstrap->pool_size},
                      {"sample_size", c.bootstrap->sample_size},
                      {"repetitions", c.bootstrap->repetitions},
                      {"seed", c.bootstrap->seed},
                      {"with_replacement", c.bootstrap->with_replacement}};
  }
  return j;
}

SweepConfig load_sweep_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return sweep_config_from_json(doc);
  } catch (const json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
}

const TrajectoryRecord& ResultStore::record(std::size_t j, std::size_t e, std::size_t m) const {
  for (const auto& r : records) {
    if (r.j_index == j && r.eps_index == e && r.instance_index == m) return r;
  }
  throw std::out_of_range("no record for the requested cell");
}

std::string record_stem(std::size_t j, std::size_t e, std::uint64_t m) {
  return "j" + std::to_string(j) + "_e" + std::to_string(e) + "_m" + std::to_string(m);
}

floquet::Trajectory regenerate_trajectory(const SweepConfig& config, double j0t2, double epsilon,
                                          std::uint64_t instance_index) {
  const auto instance = floquet::disorder_for_instance(
      config.base.sites, config.base.disorder_scale, config.master_seed, instance_index);
  return floquet::run_trajectory(config.cell_config(j0t2, epsilon), instance);
}

namespace {

TrajectoryRecord run_cell(const SweepConfig& config, std::size_t j, std::size_t e,
                          std::uint64_t m, bool keep_series) {
  TrajectoryRecord r;
  r.j_index = j;
  r.eps_index = e;
  r.j0t2 = config.j0t2_values[j];
  r.epsilon = config.epsilons[e];
  r.instance_index = m;
  r.instance_seed = derive_seed(config.master_seed, m);
  try {
    auto t = regenerate_trajectory(config, r.j0t2, r.epsilon, m);
    auto s = spectral::dft_spectrum(t);
    r.peak = spectral::central_peak(s);
    for (int i = 0; i < s.sites; ++i) r.peak_bins.push_back(s.peak_bin(i));
    if (keep_series) {
      r.trajectory = std::move(t);
      r.spectrum = std::move(s);
    }
  } catch (const std::exception& ex) {
    r.error = ex.what();
  }
  return r;
}

std::vector<CurveRecord> build_curves(const SweepConfig& config,
                                      const std::vector<TrajectoryRecord>& records) {
  std::vector<CurveRecord> curves;
  const std::size_t ne = config.epsilons.size();
  const auto m = static_cast<std::size_t>(config.instances);
  for (std::size_t j = 0; j < config.j0t2_values.size(); ++j) {
    CurveRecord cr;
    cr.curve.j0t2 = config.j0t2_values[j];
    cr.curve.epsilons = config.epsilons;
    std::vector<std::vector<spectral::PeakStats>> by_point(ne);
    for (std::size_t e = 0; e < ne; ++e) {
      for (std::size_t k = 0; k < m; ++k) {
        const auto& r = records[(j * ne + e) * m + k];
        if (r.ok()) by_point[e].push_back(r.peak);
      }
    }
    try {
      cr.curve = spectral::variance_curve(config.j0t2_values[j], config.epsilons, by_point);
      cr.interior_maximum = spectral::has_interior_maximum(cr.curve);
    } catch (const std::exception& ex) {
      cr.error = ex.what();
    }
    curves.push_back(std::move(cr));
  }
  return curves;
}

}  // namespace

void fit_curves(std::vector<CurveRecord>& curves, const spectral::FitOptions& options) {
  for (auto& c : curves) {
    if (!c.error.empty()) continue;
    try {
      c.fit = spectral::fit_variance_curve(c.curve, options);
    } catch (const std::exception& ex) {
      c.error = ex.what();
    }
  }
}

spectral::InstancePool build_instance_pool(const SweepConfig& config, double j0t2, int instances) {
  if (instances < 1) throw std::invalid_argument("pool needs at least one instance");
  const std::size_t ne = config.epsilons.size();
  const auto m = static_cast<std::size_t>(instances);
  std::vector<double> variances(ne * m, 0.0);
  parallel_for(ne * m, resolve_threads(config.threads), [&](std::size_t task) {
    const std::size_t k = task / ne;
    const std::size_t e = task % ne;
    const auto t = regenerate_trajectory(config, j0t2, config.epsilons[e], k);
    variances[task] = spectral::central_peak(spectral::dft_spectrum(t)).variance;
  });
  spectral::InstancePool pool;
  pool.j0t2 = j0t2;
  pool.epsilons = config.epsilons;
  for (std::size_t k = 0; k < m; ++k) {
    pool.site_variances.emplace_back(variances.begin() + static_cast<std::ptrdiff_t>(k * ne),
                                     variances.begin() + static_cast<std::ptrdiff_t>((k + 1) * ne));
  }
  return pool;
}

namespace {

json manifest_skeleton(const SweepConfig& config) {
  json m;
  m["tool"] = "dtc";
  m["version"] = kVersion;
  m["status"] = "running";
  m["started_utc"] = utc_now();
  m["config"] = to_json(config);
  json inst = json::array();
  for (int k = 0; k < config.instances; ++k) {
    inst.push_back({{"index", k}, {"seed", derive_seed(config.master_seed, static_cast<std::uint64_t>(k))}});
  }
  m["instances"] = inst;
  return m;
}

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed on " + path.string());
}

}  // namespace

ResultStore run_sweep(const SweepConfig& config) {
  config.validate();
  ResultStore store;
  store.manifest = manifest_skeleton(config);
  const bool persist = !config.output_dir.empty();
  if (persist) {
    fs::create_directories(config.output_dir);
    write_json(store.manifest, config.output_dir / "manifest.json");
  }

  const std::size_t nj = config.j0t2_values.size();
  const std::size_t ne = config.epsilons.size();
  const auto m = static_cast<std::size_t>(config.instances);
  const bool keep = persist && config.save_trajectories;
  store.records.resize(nj * ne * m);
  parallel_for(store.records.size(), resolve_threads(config.threads), [&](std::size_t task) {
    const std::size_t k = task % m;
    const std::size_t e = (task / m) % ne;
    const std::size_t j = task / (m * ne);
    store.records[task] = run_cell(config, j, e, k, keep);
  });

  store.curves = build_curves(config, store.records);
  if (config.fit_curves) fit_curves(store.curves, config.fit);

  if (config.bootstrap) {
    for (double j0t2 : config.j0t2_values) {
      BootstrapRecord br;
      br.j0t2 = j0t2;
      br.settings = *config.bootstrap;
      try {
        const auto pool = build_instance_pool(config, j0t2, config.bootstrap->pool_size);
        spectral::BootstrapOptions opts;
        opts.sample_size = config.bootstrap->sample_size;
        opts.repetitions = config.bootstrap->repetitions;
        opts.seed = config.bootstrap->seed;
        opts.with_replacement = config.bootstrap->with_replacement;
        opts.threads = resolve_threads(config.threads);
        opts.fit = config.fit;
        br.result = spectral::bootstrap_boundary(pool, opts);
      } catch (const std::exception& ex) {
        br.error = ex.what();
      }
      store.bootstraps.push_back(std::move(br));
    }
  }

  json recs = json::array();
  for (const auto& r : store.records) {
    recs.push_back({{"file", record_stem(r.j_index, r.eps_index, r.instance_index)},
                    {"j0t2", r.j0t2},
                    {"epsilon", r.epsilon},
                    {"instance", r.instance_index},
                    {"seed", r.instance_seed},
                    {"status", r.ok() ? std::string("ok") : r.error}});
  }
  store.manifest["records"] = recs;
  if (persist) write_store(store, config, config.output_dir);
  return store;
}

void write_trajectory_csv(const floquet::Trajectory& t, const fs::path& path) {
  std::vector<std::string> header{"n", "time_us"};
  for (int i = 0; i < t.sites; ++i) header.push_back("site_" + std::to_string(i));
  io::CsvWriter w(path, header);
  for (int n = 0; n < t.periods; ++n) {
    w.cell(n).cell(n * t.period_seconds * 1e6);
    for (int i = 0; i < t.sites; ++i) w.cell(t.at(i, n));
    w.end_row();
  }
  w.close();
}

void write_spectrum_csv(const spectral::Spectrum& s, double period_seconds, const fs::path& path) {
  std::vector<std::string> header{"k", "nu_cycles_per_period", "frequency_khz"};
  for (int i = 0; i < s.sites; ++i) header.push_back("site_" + std::to_string(i));
  io::CsvWriter w(path, header);
  for (int k = 0; k < s.samples; ++k) {
    w.cell(k).cell(s.frequency(k)).cell(s.frequency(k) / period_seconds * 1e-3);
    for (int i = 0; i < s.sites; ++i) w.cell(s.at(i, k));
    w.end_row();
  }
  w.close();
}

void write_variance_curves_csv(const std::vector<CurveRecord>& curves, const fs::path& path) {
  io::CsvWriter w(path, {"j0t2", "epsilon", "mean_variance", "sem", "instances"});
  for (const auto& c : curves) {
    if (!c.error.empty() && c.curve.mean.size() != c.curve.epsilons.size()) continue;
    for (std::size_t g = 0; g < c.curve.epsilons.size(); ++g) {
      w.cell(c.curve.j0t2).cell(c.curve.epsilons[g]).cell(c.curve.mean[g]).cell(c.curve.sem[g]);
      w.cell(c.curve.instances);
      w.end_row();
    }
  }
  w.close();
}

void write_fits_csv(const std::vector<CurveRecord>& curves, const fs::path& dir) {
  io::CsvWriter fits(dir / "fits.csv", {"j0t2", "amplitude", "offset", "gamma", "eps_p",
                                        "objective", "converged", "degenerate", "iterations",
                                        "evaluations", "interior_maximum", "error"});
  io::CsvWriter boundary(dir / "boundary.csv", {"j0t2", "eps_p", "converged"});
  for (const auto& c : curves) {
    fits.cell(c.curve.j0t2);
    if (c.fit) {
      const auto& f = *c.fit;
      fits.cell(f.shape.amplitude).cell(f.shape.offset).cell(f.shape.gamma).cell(f.shape.center);
      fits.cell(f.objective).cell(f.converged ? 1 : 0).cell(f.degenerate ? 1 : 0);
      fits.cell(f.iterations).cell(f.evaluations);
      boundary.cell(c.curve.j0t2).cell(f.shape.center).cell(f.converged ? 1 : 0);
      boundary.end_row();
    } else {
      for (int k = 0; k < 9; ++k) fits.cell(std::string_view(""));
    }
    fits.cell(c.interior_maximum ? 1 : 0).cell(std::string_view(c.error));
    fits.end_row();
  }
  fits.close();
  boundary.close();
}

void write_bootstrap_csv(const std::vector<BootstrapRecord>& boots, const fs::path& dir) {
  io::CsvWriter w(dir / "bootstrap.csv",
                  {"j0t2", "mean_eps_p", "sd_eps_p", "repetitions", "sample_size", "pool_size",
                   "failures", "degenerate", "seed", "with_replacement", "error"});
  io::CsvWriter centers(dir / "bootstrap_centers.csv", {"j0t2", "eps_p"});
  for (const auto& b : boots) {
    w.cell(b.j0t2).cell(b.result.mean_center).cell(b.result.stddev_center);
    w.cell(b.settings.repetitions).cell(b.settings.sample_size).cell(b.settings.pool_size);
    w.cell(b.result.failures).cell(b.result.degenerate ? 1 : 0);
    w.cell(static_cast<unsigned long long>(b.settings.seed));
    w.cell(b.settings.with_replacement ? 1 : 0).cell(std::string_view(b.error));
    w.end_row();
    for (double c : b.result.centers) {
      centers.cell(b.j0t2).cell(c);
      centers.end_row();
    }
  }
  w.close();
  centers.close();
}

void write_store(const ResultStore& store, const SweepConfig& config, const fs::path& dir) {
  fs::create_directories(dir);
  std::vector<std::string> header{"j0t2", "epsilon", "instance", "seed", "status",
                                  "mean_amplitude", "site_variance"};
  for (int i = 0; i < config.base.sites; ++i) header.push_back("a_" + std::to_string(i));
  for (int i = 0; i < config.base.sites; ++i) header.push_back("peak_bin_" + std::to_string(i));
  io::CsvWriter peaks(dir / "peaks.csv", header);
  const bool series = config.save_trajectories;
  if (series) {
    fs::create_directories(dir / "trajectories");
    fs::create_directories(dir / "spectra");
  }
  for (const auto& r : store.records) {
    peaks.cell(r.j0t2).cell(r.epsilon).cell(static_cast<unsigned long long>(r.instance_index));
    peaks.cell(static_cast<unsigned long long>(r.instance_seed));
    peaks.cell(std::string_view(r.ok() ? "ok" : r.error));
    peaks.cell(r.peak.mean).cell(r.peak.variance);
    for (int i = 0; i < config.base.sites; ++i) {
      if (r.ok()) {
        peaks.cell(r.peak.amplitudes[i]);
      } else {
        peaks.cell(std::string_view(""));
      }
    }
    for (int i = 0; i < config.base.sites; ++i) {
      if (r.ok()) {
        peaks.cell(r.peak_bins[i]);
      } else {
        peaks.cell(std::string_view(""));
      }
    }
    peaks.end_row();
    if (series && r.trajectory && r.spectrum) {
      const std::string stem = record_stem(r.j_index, r.eps_index, r.instance_index);
      write_trajectory_csv(*r.trajectory, dir / "trajectories" / (stem + ".csv"));
      write_spectrum_csv(*r.spectrum, config.base.period_seconds, dir / "spectra" / (stem + ".csv"));
    }
  }
  peaks.close();
  write_variance_curves_csv(store.curves, dir / "variance_curves.csv");
  write_fits_csv(store.curves, dir);
  json manifest = store.manifest;
  json outputs = {"manifest.json", "peaks.csv", "variance_curves.csv", "fits.csv", "boundary.csv"};
  if (series) {
    outputs.push_back("trajectories/");
    outputs.push_back("spectra/");
  }
  if (!store.bootstraps.empty()) {
    write_bootstrap_csv(store.bootstraps, dir);
    outputs.push_back("bootstrap.csv");
    outputs.push_back("bootstrap_centers.csv");
  }
  manifest["outputs"] = outputs;
  manifest["status"] = "complete";
  manifest["finished_utc"] = utc_now();
  write_json(manifest, dir / "manifest.json");
}

std::vector<CurveRecord> load_variance_curves(const fs::path& path) {
  const io::CsvTable t = io::read_csv(path);
  const auto cj = t.column("j0t2"), ce = t.column("epsilon"), cm = t.column("mean_variance"),
             cs = t.column("sem"), cn = t.column("instances");
  std::vector<CurveRecord> out;
  std::map<double, std::size_t> slot;
  for (const auto& row : t.rows) {
    const double j = std::stod(row[cj]);
    auto [it, fresh] = slot.try_emplace(j, out.size());
    if (fresh) {
      out.emplace_back();
      out.back().curve.j0t2 = j;
      out.back().curve.instances = std::stoi(row[cn]);
    }
    auto& c = out[it->second].curve;
    c.epsilons.push_back(std::stod(row[ce]));
    c.mean.push_back(std::stod(row[cm]));
    c.sem.push_back(std::stod(row[cs]));
  }
  for (auto& c : out) c.interior_maximum = spectral::has_interior_maximum(c.curve);
  return out;
}

}  // namespace dtc::sweep
