#include <doctest.h>

#include <cmath>

#include "wayfield/config.hpp"

using namespace wayfield;

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.params.kappa_tt == 100.0);
  CHECK(c.params.kappa_q == 20.0);
  CHECK(c.params.kappa_f == 5.0);
  CHECK(c.params.gamma_m == 4.0);
  CHECK(c.params.rho_c == 5.0);
  CHECK(c.params.tau_c == 20);
  CHECK(c.params.tau_a == 10);
  CHECK(c.params.tau_short == 10);
  CHECK(c.params.tau_long == 60);
  CHECK(c.params.plausibility_factor == 3.0);
  CHECK(c.speed == doctest::Approx(4.0 / 3.0));
  CHECK(c.arrivals == "poisson");
  CHECK(c.steps == 0);
  CHECK(c.seed == 1);
}

TEST_CASE("parse and override") {
  const RunConfig c = parse_config_text(
      "# comment\n"
      "scenario = bench.scenario\n"
      "steps = 1000\n"
      "seed = 42\n"
      "snapshot_steps = 0,325,625,650\n"
      "kappa_q = 35.5\n"
      "gamma = inf\n"
      "arrivals = constant\n"
      "speed = 1.5\n");
  CHECK(c.scenario == "bench.scenario");
  CHECK(c.steps == 1000);
  CHECK(c.seed == 42);
  CHECK(c.snapshot_steps == std::vector<int64_t>{0, 325, 625, 650});
  CHECK(c.params.kappa_q == 35.5);
  CHECK(std::isinf(c.params.gamma_m));
  CHECK(c.arrivals == "constant");
  CHECK(c.speed == 1.5);
  CHECK(c.params.speed_ref == 1.5);  // the population speed is the tree reference speed

  const EngineConfig e = engine_config_of(c);
  CHECK(e.deterministic_arrivals);
  CHECK(e.agent_speed == 1.5);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse_config_text("nope = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("steps = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("steps = soon\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("arrivals = sometimes\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("speed = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("tau_short = 100\n"), ConfigError);  // above tau_long
  CHECK_THROWS_AS(parse_config_text("no equals sign\n"), ConfigError);
}

TEST_CASE("serialization round trip") {
  RunConfig c;
  c.scenario = "x.scenario";
  c.steps = 77;
  c.seed = 9;
  c.snapshot_steps = {0, 7, 77};
  c.output_dir = "out";
  c.speed = 1.25;
  c.arrivals = "constant";
  c.dump_fields = true;
  c.verbose = true;
  c.params.kappa_tt = 12.25;
  c.params.gamma_m = std::numeric_limits<double>::infinity();
  c.params.k_pf = std::numeric_limits<double>::infinity();
  c.params.tau_long = 61;

  const RunConfig back = parse_config_text(serialize_config(c));
  CHECK(back.scenario == c.scenario);
  CHECK(back.steps == c.steps);
  CHECK(back.seed == c.seed);
  CHECK(back.snapshot_steps == c.snapshot_steps);
  CHECK(back.output_dir == c.output_dir);
  CHECK(back.speed == c.speed);
  CHECK(back.arrivals == c.arrivals);
  CHECK(back.dump_fields == c.dump_fields);
  CHECK(back.verbose == c.verbose);
  CHECK(back.params.kappa_tt == c.params.kappa_tt);
  CHECK(std::isinf(back.params.gamma_m));
  CHECK(std::isinf(back.params.k_pf));
  CHECK(back.params.tau_long == c.params.tau_long);
  // a second round trip is bitwise stable
  CHECK(serialize_config(back) == serialize_config(c));
}
