#include "doctest.h"
#include "muchlab/errors.hpp"
#include "muchlab/experiments.hpp"
#include "muchlab/initial.hpp"
#include "muchlab/theory.hpp"
#include "test_support.hpp"

using namespace muchlab;
using testsupport::kPi;

TEST_CASE("initial expressions build the expected coefficients") {
  const auto a = parse_initial("0.5 + 0.01*cos(1)");
  CHECK(a[0] == Complex(0.5, 0.0));
  CHECK(a[1] == Complex(0.005, 0.0));
  CHECK(a[-1] == Complex(0.005, 0.0));
  const auto b = parse_initial("1*sin(2)");
  CHECK(b[2] == Complex(0.0, -0.5));
  CHECK(b[-2] == Complex(0.0, 0.5));
  const auto c = parse_initial("-2 - cos(3) + 1e-1*sin(1)");
  CHECK(c[0].real() == -2.0);
  CHECK(c[3].real() == -0.5);
  CHECK(c[1] == Complex(0.0, -0.05));
  const auto p = parse_initial("mckean_pos(0.5, 0.01)");
  CHECK(testsupport::max_coeff_diff(p, a) == 0.0);
  CHECK(mckean_sign(p).classification == SignClass::Nonnegative);
}

TEST_CASE("geometric preset decays at the requested strip width with seeded phases") {
  const auto g = parse_initial("geom(0.2, 16)", 5);
  CHECK(g.max_mode() == 16);
  CHECK(g[0].real() == 1.0);
  for (int k = 1; k <= 16; ++k) CHECK(std::abs(g[k]) == testsupport::approx(std::exp(-2.0 * kPi * 0.2 * k)));
  const auto same = parse_initial("geom(0.2, 16)", 5);
  CHECK(testsupport::max_coeff_diff(g, same) == 0.0);
  const auto other = parse_initial("geom(0.2, 16)", 6);
  CHECK(testsupport::max_coeff_diff(g, other) > 0.0);
}

TEST_CASE("parse errors carry the offending position") {
  auto position_of = [](const std::string& text) {
    try {
      parse_initial(text);
    } catch (const ParseError& e) {
      return static_cast<long>(e.position());
    }
    return -1L;
  };
  CHECK(position_of("0.5 + tan(1)") == 6);
  CHECK(position_of("0.5 +") == 5);
  CHECK(position_of("cos(0)") == 4);
  CHECK(position_of("0.5 0.1") == 4);
  CHECK(position_of("") == 0);
  CHECK(position_of("geom(-1, 4)") == 5);
}

TEST_CASE("config documents round-trip and reject unknown keys") {
  RunConfig cfg;
  cfg.experiment = "lifespan";
  cfg.equation = "mudp";
  cfg.delta = 0.25;
  cfg.seed = 99;
  const auto back = config_from_json(nlohmann::json::parse(to_json(cfg).dump()));
  CHECK(back.experiment == "lifespan");
  CHECK(back.equation == "mudp");
  CHECK(back.delta.value() == 0.25);
  CHECK(back.seed == 99);
  CHECK(std::isinf(back.max_step));
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"bogus", 1}}), DomainError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json{{"n", "many"}}), DomainError);
}

TEST_CASE("solve on equilibrium data reports a constant series") {
  RunConfig cfg;
  cfg.init = "0.75";
  cfg.t_end = 0.2;
  const auto r = run_experiment(cfg);
  CHECK(r.exit_code == kPass);
  for (const auto& row : r.report["series"]) CHECK(row["mean_u"].get<double>() == 0.75);
  CHECK(r.report.contains("constants"));
  CHECK(r.report["schema"] == kReportSchema);
}

TEST_CASE("equivalence run on the preset passes") {
  RunConfig cfg;
  cfg.experiment = "equivalence";
  cfg.init = "mckean_pos(0.5,0.01)";
  const auto r = run_experiment(cfg);
  CHECK(r.exit_code == kPass);
  CHECK(r.report["checks"][0]["value"].get<double>() <= 1e-8);
}

TEST_CASE("bad input maps to the usage exit code") {
  RunConfig cfg;
  cfg.init = "cos(";
  auto r = run_experiment(cfg);
  CHECK(r.exit_code == kUsageError);
  CHECK(r.report["error"].contains("position"));
  cfg = RunConfig{};
  cfg.equation = "kdv";
  CHECK(run_experiment(cfg).exit_code == kUsageError);
  cfg = RunConfig{};
  cfg.experiment = "plot";
  CHECK(run_experiment(cfg).exit_code == kUsageError);
  cfg = RunConfig{};
  cfg.integrator = "euler";
  CHECK(run_experiment(cfg).exit_code == kUsageError);
}

TEST_CASE("a step floor the solver cannot meet maps to the numerical exit code") {
  RunConfig cfg;
  cfg.init = "geom(0.01, 32)";
  cfg.n = 32;
  cfg.t_end = 5.0;
  const auto r = run_experiment(cfg);
  CHECK(r.exit_code == kNumericalAbort);
  CHECK(r.report["status"] == "abort");
}

TEST_CASE("verify-estimates is deterministic and violation-free on a small sample") {
  RunConfig cfg;
  cfg.experiment = "verify-estimates";
  cfg.samples = 60;
  cfg.km_samples = 30;
  cfg.seed = 42;
  const auto a = run_experiment(cfg);
  const auto b = run_experiment(cfg);
  CHECK(a.exit_code == kPass);
  CHECK(render(a, "json") == render(b, "json"));
  cfg.seed = 43;
  CHECK(render(run_experiment(cfg), "json") != render(a, "json"));
}

TEST_CASE("csv rendering starts with the schema line and holds a series table") {
  RunConfig cfg;
  cfg.t_end = 0.05;
  cfg.format = "csv";
  const auto text = render(run_experiment(cfg), "csv");
  CHECK(text.rfind("#schema=muchlab.report/1\n", 0) == 0);
  CHECK(text.find("\nt,mean_u,") != std::string::npos);
  CHECK(text.find("#constants.gamma_mult=") != std::string::npos);
}
