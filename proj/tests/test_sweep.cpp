#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "dtc/csv.hpp"
#include "dtc/rng.hpp"
#include "dtc/sweep.hpp"

using namespace dtc::sweep;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepConfig small_config(const std::string& dir) {
  SweepConfig c;
  c.base.sites = 6;
  c.base.periods = 40;
  c.epsilons = log_grid(0.01, 0.15, 6);
  c.j0t2_values = {0.012, 0.036};
  c.instances = 3;
  c.master_seed = 99;
  c.output_dir = fs::path("sweep_tests") / dir;
  fs::remove_all(c.output_dir);
  return c;
}

}  // namespace

TEST_CASE("grids") {
  const auto g = default_epsilon_grid();
  REQUIRE(g.size() == 16);
  CHECK(g.front() == 0.005);
  CHECK(g.back() == 0.15);
  CHECK(g[1] / g[0] == doctest::Approx(g[15] / g[14]));
  CHECK(default_j0t2_ladder() == std::vector<double>{0.006, 0.012, 0.024, 0.036});
  CHECK_THROWS_AS(log_grid(0.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("format round trip") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-300, 0.0}) {
    CHECK(std::stod(dtc::io::format_double(v)) == v);
  }
  CHECK(dtc::io::format_double(0.5) == "0.5");
}

TEST_CASE("single-cell sweep counts") {
  SweepConfig c;
  c.epsilons = {0.03};
  c.j0t2_values = {0.036};
  c.instances = 1;
  c.fit_curves = false;
  c.output_dir = "sweep_tests/single";
  fs::remove_all(c.output_dir);
  const auto store = run_sweep(c);
  REQUIRE(store.records.size() == 1);
  const auto& r = store.records[0];
  CHECK(r.ok());
  REQUIRE(r.trajectory.has_value());
  CHECK(r.trajectory->sites == 10);
  CHECK(r.trajectory->periods == 100);
  CHECK(r.trajectory->series.size() == 1000);
  CHECK(fs::exists(c.output_dir / "trajectories" / "j0_e0_m0.csv"));
  CHECK(fs::exists(c.output_dir / "spectra" / "j0_e0_m0.csv"));
  const auto table = dtc::io::read_csv(c.output_dir / "trajectories" / "j0_e0_m0.csv");
  CHECK(table.rows.size() == 100);
  CHECK(table.header.size() == 12);
  const auto spec = dtc::io::read_csv(c.output_dir / "spectra" / "j0_e0_m0.csv");
  CHECK(std::stod(spec.rows[50][spec.column("nu_cycles_per_period")]) == 0.5);
  CHECK(std::stod(spec.rows[50][spec.column("frequency_khz")]) == doctest::Approx(0.5 / 75e-3));
}

TEST_CASE("sweep is independent of the thread budget") {
  auto a = small_config("t1");
  a.threads = 1;
  auto b = small_config("t4");
  b.threads = 4;
  run_sweep(a);
  run_sweep(b);
  for (const char* f : {"peaks.csv", "variance_curves.csv", "fits.csv", "boundary.csv"}) {
    CHECK(slurp(a.output_dir / f) == slurp(b.output_dir / f));
  }
  CHECK(slurp(a.output_dir / "trajectories" / "j1_e4_m2.csv") ==
        slurp(b.output_dir / "trajectories" / "j1_e4_m2.csv"));
}

TEST_CASE("instances are shared across cells and regenerate exactly") {
  auto c = small_config("regen");
  const auto store = run_sweep(c);
  CHECK(store.curves.size() == 2);
  for (const auto& r : store.records) {
    CHECK(r.instance_seed == dtc::derive_seed(c.master_seed, r.instance_index));
    CHECK(r.trajectory->instance_seed == r.instance_seed);
  }

  std::ifstream in(c.output_dir / "manifest.json");
  const json m = json::parse(in);
  CHECK(m["status"] == "complete");
  CHECK(m["version"] == kVersion);
  CHECK(m.contains("started_utc"));
  CHECK(m.contains("finished_utc"));
  const auto& entry = m["records"][7];
  const auto cfg = sweep_config_from_json(m["config"]);
  const auto t = regenerate_trajectory(cfg, entry["j0t2"].get<double>(),
                                       entry["epsilon"].get<double>(),
                                       entry["instance"].get<std::uint64_t>());
  const auto& orig = store.records[7];
  CHECK(t.series == orig.trajectory->series);
  CHECK(entry["seed"].get<std::uint64_t>() == orig.instance_seed);

  // the same disorder phases in every cell
  const auto p0 = dtc::floquet::disorder_for_instance(6, c.base.disorder_scale, c.master_seed, 1);
  CHECK(store.record(0, 0, 1).trajectory->instance_seed == p0.seed);
  CHECK(store.record(1, 5, 1).trajectory->instance_seed == p0.seed);
}

TEST_CASE("variance curves round-trip through CSV and refit identically") {
  auto c = small_config("roundtrip");
  auto store = run_sweep(c);
  auto loaded = load_variance_curves(c.output_dir / "variance_curves.csv");
  REQUIRE(loaded.size() == store.curves.size());
  for (std::size_t j = 0; j < loaded.size(); ++j) {
    CHECK(loaded[j].curve.mean == store.curves[j].curve.mean);
    CHECK(loaded[j].curve.sem == store.curves[j].curve.sem);
    CHECK(loaded[j].curve.epsilons == store.curves[j].curve.epsilons);
  }
  fit_curves(loaded, c.fit);
  for (std::size_t j = 0; j < loaded.size(); ++j) {
    REQUIRE(loaded[j].fit.has_value());
    CHECK(loaded[j].fit->shape.center == store.curves[j].fit->shape.center);
  }
}

TEST_CASE("config parsing") {
  const json doc = json::parse(R"({
    "sites": 8, "periods": 60, "epsilon_grid": {"min": 0.01, "max": 0.1, "points": 7},
    "j0t2": [0.02], "instances": 4, "master_seed": 5, "pulse_model": "bb1",
    "rabi": {"static_offset": 0.01, "noise_rms": 0.002, "noise_seed": 4},
    "bootstrap": {"pool_size": 20, "sample_size": 5, "repetitions": 30, "seed": 2}
  })");
  const auto c = sweep_config_from_json(doc);
  CHECK(c.base.sites == 8);
  CHECK(c.epsilons.size() == 7);
  CHECK(c.base.pulse_model == dtc::floquet::PulseModel::BB1);
  CHECK(c.base.rabi_error.static_offset.size() == 8);
  REQUIRE(c.bootstrap.has_value());
  CHECK(c.bootstrap->pool_size == 20);
  const auto back = sweep_config_from_json(to_json(c));
  CHECK(back.epsilons == c.epsilons);
  CHECK(back.base.rabi_error.static_offset == c.base.rabi_error.static_offset);
  CHECK(to_json(back) == to_json(c));

  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"instances": 0})")), std::invalid_argument);
  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"epsilons": []})")), std::invalid_argument);
  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"epsilons": [0.0, 0.1]})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep_config_from_json(json::parse(R"({"sitez": 3})")), std::invalid_argument);
  CHECK_THROWS(sweep_config_from_json(json::parse(R"({"sites": "ten"})")));
  CHECK_THROWS_AS(load_sweep_config("sweep_tests/missing.json"), std::runtime_error);
}

TEST_CASE("per-record failures do not stop the sweep") {
  auto c = small_config("oddperiods");
  c.base.periods = 41;
  c.fit_curves = true;
  const auto store = run_sweep(c);
  for (const auto& r : store.records) CHECK_FALSE(r.ok());
  for (const auto& cr : store.curves) CHECK_FALSE(cr.error.empty());
  std::ifstream in(c.output_dir / "manifest.json");
  CHECK(json::parse(in)["status"] == "complete");
}

TEST_CASE("I/O failure leaves the partial marker") {
  auto c = small_config("blocked");
  fs::create_directories(c.output_dir / "peaks.csv");
  CHECK_THROWS(run_sweep(c));
  std::ifstream in(c.output_dir / "manifest.json");
  CHECK(json::parse(in)["status"] == "running");
}

TEST_CASE("sweep bootstrap reuses the instance pool") {
  auto c = small_config("boot");
  c.j0t2_values = {0.036};
  c.bootstrap = BootstrapSettings{8, 4, 12, 3, false};
  const auto store = run_sweep(c);
  REQUIRE(store.bootstraps.size() == 1);
  const auto& b = store.bootstraps[0];
  CHECK(b.error.empty());
  CHECK(b.result.repetitions == 12);
  CHECK(fs::exists(c.output_dir / "bootstrap.csv"));

  const auto pool = build_instance_pool(c, 0.036, 8);
  CHECK(pool.site_variances[1][2] == store.record(0, 2, 1).peak.variance);
}
