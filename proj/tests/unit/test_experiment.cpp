#include <charconv>
#include <cmath>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "kssim/config.hpp"
#include "kssim/errors.hpp"
#include "kssim/experiment.hpp"
#include "kssim/io.hpp"

using namespace kssim;
namespace fs = std::filesystem;

namespace {

ExperimentConfig load(const char* name) {
  return parse_config(io::read_file(std::string(KSSIM_TEST_DATA) + "/" + name));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("kssim_test_experiment_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("format_double is shortest round trip") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0) == "1");
  CHECK(io::format_double(1e-300) == "1e-300");
  CHECK(io::format_double(-2.5) == "-2.5");
  CHECK(io::format_double(kInfinity) == "inf");
  CHECK(io::format_double(-kInfinity) == "-inf");
  CHECK(io::format_double(std::nan("")) == "nan");
  for (double x : {1.0 / 3.0, 2.0 / 7.0 * 1e-17, 123456.789e10, 5e-324}) {
    const std::string text = io::format_double(x);
    double back = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), back);
    CHECK(back == x);
  }
}

TEST_CASE("sha256_hex matches the standard test vectors") {
  CHECK(io::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(io::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("trajectory_csv header and rows") {
  DiagnosticsRow r;
  r.t = 0.5;
  r.mass = 1;
  r.linf_gap = 0.25;
  r.u_linf = 2;
  r.min_u = 0.5;
  r.min_v = 0.75;
  r.gradv_q_norms = {{2.0, 0.125}, {kInfinity, 0.5}};
  r.u_r_norms = {{1.5, 3.0}};
  const std::string csv = io::trajectory_csv({r}, {{2.0, kInfinity}, {1.5}});
  CHECK(csv ==
        "t,mass,linf_gap,u_linf,min_u,min_v,gradv_L2,gradv_Linf,u_L1.5\n"
        "0.5,1,0.25,2,0.5,0.75,0.125,0.5,3\n");
}

TEST_CASE("single run at the equilibrium") {
  ExperimentConfig cfg = load("equilibrium.cfg");
  cfg.output_dir = scratch("single").string();
  const ExperimentResult r = run_experiment(cfg, 1);
  REQUIRE(r.runs.size() == 1);
  const RunSummary& s = r.runs[0];
  CHECK_FALSE(s.failed);
  CHECK(s.status == RunStatus::Completed);
  CHECK(s.gap_sup <= 1e-10);
  CHECK(s.mass_drift <= 1e-12);
  CHECK(s.boundedness == Boundedness::Bounded);
  CHECK(s.final_time == 2.0);

  const fs::path dir(cfg.output_dir);
  CHECK(fs::exists(dir / "summary.json"));
  REQUIRE(r.manifest.size() == 1);
  CHECK(r.manifest[0].first == "run_000.csv");
  CHECK(r.manifest[0].second == io::sha256_hex(io::read_file(dir / "run_000.csv")));
  CHECK(io::read_file(dir / "summary.json") == r.summary_json());
  CHECK(r.summary_json().find("\"config\": " ) != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("mass sweep is deterministic and independent of the worker count") {
  ExperimentConfig cfg = load("small_sweep.cfg");
  cfg.output_dir = scratch("sweep_a").string();
  const ExperimentResult a = run_experiment(cfg, 1);
  ExperimentConfig other = cfg;
  other.output_dir = scratch("sweep_b").string();
  const ExperimentResult b = run_experiment(other, 3);

  REQUIRE(a.runs.size() == 3);
  REQUIRE(a.fit);
  CHECK(a.fit->predicted_exponent == 1.5);
  CHECK(a.fit->slope > 1.0);
  // θ < 1/n admits every q including ∞
  REQUIRE(a.gradv_spreads.size() == 3);
  for (const auto& s : a.gradv_spreads) {
    CHECK_FALSE(s.refused);
    CHECK(s.spread >= 1.0);
  }

  for (const char* name : {"run_000.csv", "run_001.csv", "run_002.csv"}) {
    CHECK(io::read_file(fs::path(cfg.output_dir) / name) == io::read_file(fs::path(other.output_dir) / name));
  }
  // the summary embeds the output directory, so compare everything else
  CHECK(a.manifest == b.manifest);
  CHECK(a.fit->slope == b.fit->slope);
  fs::remove_all(cfg.output_dir);
  fs::remove_all(other.output_dir);
}

TEST_CASE("persisting twice gives byte-identical files and removes stale runs") {
  ExperimentConfig cfg = load("small_atlas.cfg");
  const fs::path dir = scratch("atlas");
  cfg.output_dir = dir.string();
  fs::create_directories(dir);
  io::write_file(dir / "run_017.csv", "stale");
  io::write_file(dir / "notes.txt", "kept");

  const ExperimentResult first = run_experiment(cfg, 2);
  CHECK_FALSE(fs::exists(dir / "run_017.csv"));
  CHECK(fs::exists(dir / "notes.txt"));
  const std::string summary = io::read_file(dir / "summary.json");
  const std::string csv = io::read_file(dir / "run_003.csv");
  run_experiment(cfg, 1);
  CHECK(io::read_file(dir / "summary.json") == summary);
  CHECK(io::read_file(dir / "run_003.csv") == csv);

  REQUIRE(first.runs.size() == 4);
  CHECK(first.runs[0].label == "p=1.5,theta=0.5");
  CHECK(first.runs[1].label == "p=2.5,theta=0.5");
  CHECK(first.runs[3].label == "p=2.5,theta=1");
  for (const auto& r : first.runs) CHECK(r.regime.tag == RegimeTag::Subcritical);
  fs::remove_all(dir);
}

TEST_CASE("failing runs are marked and left out of the manifest") {
  ExperimentConfig cfg = load("failing_solve.cfg");
  const fs::path dir = scratch("failing");
  cfg.output_dir = dir.string();
  const ExperimentResult r = run_experiment(cfg, 1);
  CHECK(r.any_failed());
  CHECK(r.runs[0].failed);
  CHECK(r.runs[0].error.find("tridiagonal") != std::string::npos);
  CHECK(r.manifest.empty());
  CHECK_FALSE(r.fit);
  CHECK_FALSE(fs::exists(dir / "run_000.csv"));
  CHECK(io::read_file(dir / "summary.json").find("\"Failed\"") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("variation stability places the bump on the base level") {
  ExperimentConfig cfg = load("equilibrium.cfg");
  cfg.kind = ExperimentKind::VariationStability;
  cfg.base = 2.0;
  cfg.masses = {0.01, 0.02};
  cfg.init.type = InitType::CosineBump;
  cfg.init.amplitude = 1.0;
  const Grid g = cfg.grid();
  const auto [u0, v0] = initial_state(cfg, g, cfg.params, 0.01);
  CHECK(integrate(u0) == doctest::Approx(2.01).epsilon(1e-14));
  CHECK(min_value(u0) >= 2.0 - 1e-15);
  CHECK(v0.at(0) == doctest::Approx(std::sqrt(u0.at(0))));

  const ExperimentResult r = run_experiment(cfg, 1, /*persist=*/false);
  for (const auto& s : r.runs) {
    REQUIRE(s.variation_l1);
    CHECK(*s.variation_l1 == doctest::Approx(s.mass).epsilon(1e-12));
    CHECK(*s.contained);
  }
}

TEST_CASE("initial data families hit the target mass and stay nonnegative") {
  const double l[] = {1.0, 2.0};
  const int c[] = {16, 24};
  for (int dim : {1, 2}) {
    const Grid g = build_grid(dim, std::span<const double>(l, dim), std::span<const int>(c, dim));
    for (InitType type : {InitType::Constant, InitType::CosineBump, InitType::GaussianBump, InitType::RandomSmooth}) {
      for (double mass : {1e-3, 0.5, 7.0}) {
        InitSpec spec;
        spec.type = type;
        spec.mass = mass;
        spec.amplitude = 1.0;
        const ScalarField u = make_initial_u(g, spec);
        CHECK(integrate(u) == doctest::Approx(mass).epsilon(1e-13));
        CHECK(min_value(u) >= 0.0);
        if (type == InitType::Constant) CHECK(max_value(u) == min_value(u));
        const ScalarField v = make_initial_v(u, 0.5);
        CHECK(v.at(3) == doctest::Approx(std::sqrt(u.at(3))));
      }
    }
    InitSpec a;
    a.type = InitType::RandomSmooth;
    InitSpec b = a;
    b.seed = 2;
    CHECK(make_initial_u(g, a) == make_initial_u(g, a));
    CHECK_FALSE(make_initial_u(g, a) == make_initial_u(g, b));
  }
  CHECK(parse_init_type("gaussian-bump") == InitType::GaussianBump);
  CHECK_THROWS_AS(parse_init_type("square"), InvalidArgument);
}
