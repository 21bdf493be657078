#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "radns/config.hpp"
#include "radns/radiation.hpp"

using namespace radns;
namespace fs = std::filesystem;

namespace {

ConfigError config_error(const std::string& text) {
  try {
    (void)parse_config_text(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a ConfigError");
  return ConfigError("");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("empty file gives the defaults") {
  const RunConfig c = parse_config_text("");
  CHECK(c.n_cells == 128);
  CHECK(c.t_end == 0.5);
  CHECK(c.initial.preset == "single_mode");
  CHECK(c.cadence == 1);
  CHECK(c.checkpoint_interval == 0);
  CHECK(c.audits.entropy_tol == 1e-2);
}

TEST_CASE("values are read") {
  const RunConfig c = parse_config_text(
      "# comment\n[physics]\nmu = 2.5\nbeta = 12 # inline\n[grid]\nn_cells = 64\n"
      "[output]\nsnapshots = false\n");
  CHECK(c.params.mu == 2.5);
  CHECK(c.params.beta == 12.0);
  CHECK(c.n_cells == 64);
  CHECK_FALSE(c.write_snapshots);
}

TEST_CASE("misspelled key names the key, the line and a suggestion") {
  const ConfigError e = config_error("[physics]\nbeta = 10\nviscocity = 1.0\n");
  CHECK(e.key() == "physics.viscocity");
  CHECK(e.line() == 3);
  CHECK(std::string(e.what()).find("did you mean 'mu'") != std::string::npos);
}

TEST_CASE("malformed input") {
  CHECK(config_error("[numerics]\n").key() == "numerics");
  CHECK(config_error("[grid]\nn_cells = 8\nn_cells = 16\n").line() == 3);
  CHECK(config_error("[physics]\nmu = fast\n").key() == "physics.mu");
  CHECK(config_error("[physics]\nmu =\n").line() == 2);
  CHECK(config_error("mu = 1\n").line() == 1);
  CHECK(config_error("[physics]\nmu = -1\n").key() == "physics.mu");
  CHECK(config_error("[grid]\nn_cells = 2.5\n").key() == "grid.n_cells");
}

TEST_CASE("nonpositive initial temperature names the amplitude") {
  const ConfigError e = config_error("[initial]\nalpha_theta = 1.5\n");
  CHECK(e.key() == "initial.alpha_theta");
  CHECK(e.line() == 2);
  CHECK(config_error("[initial]\nalpha_v = 1.5\n").key() == "initial.alpha_v");
}

TEST_CASE("equilibrium preset") {
  const Grid g(16);
  InitialSpec spec;
  spec.preset = "equilibrium";
  const State s = make_initial_data(spec, g, Params{});
  for (std::size_t j = 0; j < 16; ++j) {
    CHECK(s.v[j] == 1.0);
    CHECK(s.u[j] == 0.0);
    CHECK(s.theta[j] == 1.0);
    CHECK(s.q[j] == 0.0);
  }
}

TEST_CASE("presets are normalised and compatible") {
  const Grid g(64);
  const Params p;
  for (const char* preset : {"single_mode", "two_mode", "random_smooth"}) {
    CAPTURE(preset);
    InitialSpec spec;
    spec.preset = preset;
    const State s = make_initial_data(spec, g, p);
    CHECK(quadrature(s.v, g) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(radiation_residual(s.q, s.v, s.theta, g, p) <= 1e-10);
  }
}

TEST_CASE("random_smooth depends only on the seed") {
  const Grid g(32);
  InitialSpec a;
  a.preset = "random_smooth";
  a.seed = 7;
  InitialSpec b = a;
  b.seed = 8;
  const State s1 = make_initial_data(a, g, Params{});
  const State s2 = make_initial_data(a, g, Params{});
  const State s3 = make_initial_data(b, g, Params{});
  CHECK(s1.v == s2.v);
  CHECK(s1.theta == s2.theta);
  CHECK(s1.v != s3.v);
}

TEST_CASE("table preset") {
  const fs::path dir = fs::temp_directory_path() / "radns_config_table";
  fs::create_directories(dir);
  const Grid g(8);
  {
    std::ofstream out(dir / "init.csv");
    out << "x,v,u,theta\n";
    for (std::size_t j = 0; j < 8; ++j) {
      out << g.center(j) << ",1.0," << 0.1 * static_cast<double>(j) << ",2.0\n";
    }
  }
  const RunConfig c = parse_config_text(
      "[grid]\nn_cells = 8\n[initial]\npreset = table\ntable = init.csv\n", "<t>", dir);
  const State s = make_initial_data(c.initial, g, c.params, c.base_dir);
  CHECK(s.u[3] == doctest::Approx(0.3));
  CHECK(s.theta[5] == 2.0);
  CHECK(s.v[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(parse_config_text("[grid]\nn_cells = 16\n[initial]\npreset = table\ntable = init.csv\n",
                                    "<t>", dir),
                  ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("hash covers the trajectory only") {
  const RunConfig base = parse_config_text("");
  RunConfig c = base;
  c.params.mu = 1.5;
  CHECK(config_hash(c) != config_hash(base));
  c = base;
  c.initial.seed = 3;
  CHECK(config_hash(c) != config_hash(base));
  c = base;
  c.t_end = 2.0;
  c.output_dir = "elsewhere";
  c.checkpoint_interval = 10;
  c.audits.entropy_tol = 0.5;
  CHECK(config_hash(c) == config_hash(base));
}

TEST_CASE("resolved ini reads back") {
  const RunConfig c = parse_config_text(
      "[physics]\nmu = 0.3\nbeta = 11.25\n[time]\nt_end = 0.1\n[initial]\npreset = two_mode\n"
      "[output]\ncadence = 3\n");
  const RunConfig back = parse_config_text(config_to_ini(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(config_hash(back) == config_hash(c));
}

}
