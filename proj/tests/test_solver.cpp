#include <cmath>
#include <random>

#include "doctest.h"
#include "muchlab/errors.hpp"
#include "muchlab/solver.hpp"
#include "muchlab/theory.hpp"
#include "test_support.hpp"

using namespace muchlab;
using testsupport::kPi;
using testsupport::max_coeff_diff;

namespace {

const EquationKind kMuCH{EquationTag::MuCH, 0.0};
const State kPreset = State::scalar(TrigSpectrum::constant(0.5) + TrigSpectrum::cosine(1, 0.01));

MarchOptions capped(int cap = 32) {
  MarchOptions o;
  o.cap = cap;
  return o;
}

double state_gap(const State& a, const State& b) {
  double g = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) g = std::max(g, l2_norm(a.fields()[i] - b.fields()[i]));
  return g;
}

}  // namespace

TEST_CASE("constant data has a trivial Taylor series and an unbounded radius") {
  for (auto tag : {EquationTag::MuCH, EquationTag::MuDP, EquationTag::HigherB}) {
    const auto sol = taylor_expand(State::scalar(TrigSpectrum::constant(1.2)), {tag, 0.0}, 12);
    for (int k = 1; k <= sol.order(); ++k) CHECK(testsupport::max_abs_coeff(sol.coeffs[k].u()) == 0.0);
    CHECK(estimate_t_radius(sol).status == SeriesRadiusStatus::Unbounded);
  }
}

TEST_CASE("first Taylor coefficient is the right-hand side and t = 0 returns the data") {
  const auto c = State::scalar(TrigSpectrum::cosine(1));
  const auto sol = taylor_expand(c, kMuCH, 10);
  CHECK(max_coeff_diff(sol.coeffs[1].u(), TrigSpectrum::sine(2, 0.75 * kPi)) < 1e-13);
  const auto at0 = evaluate(sol, 0.0);
  CHECK(max_coeff_diff(at0.u(), c.u()) == 0.0);
}

TEST_CASE("second Taylor coefficient equals half the directional derivative of F") {
  std::mt19937_64 rng(41);
  const auto u = testsupport::random_spectrum(rng, 3, 0.3);
  const auto sol = taylor_expand(State::scalar(u), kMuCH, 4);
  const double eps = 1e-6;
  const auto f = rhs_much(u);
  const auto dF = (1.0 / (2.0 * eps)) * (rhs_much(axpy(u, eps, f)) - rhs_much(axpy(u, -eps, f)));
  CHECK(max_coeff_diff(sol.coeffs[2].u(), 0.5 * dF) < 1e-7);
}

TEST_CASE("linear dispersive subflow matches the modewise exponential") {
  std::mt19937_64 rng(43);
  const auto u0 = without_mean(testsupport::random_spectrum(rng, 6));
  const double gamma = 2.0;
  const double t = 0.1;
  auto opts = capped();
  opts.beta = 0.25;
  const auto rep = taylor_march(State::pair(u0, TrigSpectrum()), {EquationTag::Modified, gamma}, t, opts);
  REQUIRE(rep.status == MarchStatus::Completed);
  std::vector<Complex> c(2 * u0.max_mode() + 1);
  for (int k = -u0.max_mode(); k <= u0.max_mode(); ++k) {
    if (k == 0) continue;
    c[k + u0.max_mode()] = u0[k] * std::exp(Complex(0.0, -gamma * t / (2.0 * kPi * k)));
  }
  CHECK(max_coeff_diff(rep.final_state().u(), TrigSpectrum(u0.max_mode(), c)) < 1e-10);
  CHECK(testsupport::max_abs_coeff(rep.final_state().v()) == 0.0);
}

TEST_CASE("geometric coefficient norms give back the ratio") {
  for (double r : {0.05, 0.3, 2.0}) {
    TaylorSolution sol;
    for (int k = 0; k <= 24; ++k) {
      sol.coeffs.push_back(State::scalar(TrigSpectrum::cosine(1, std::sqrt(2.0) * std::pow(r, -k))));
      sol.truncation_tails.push_back(0.0);
    }
    const auto est = estimate_t_radius(sol);
    CHECK(est.status == SeriesRadiusStatus::Finite);
    CHECK(est.value == testsupport::approx(r).epsilon(1e-6));
    CHECK(!est.low_confidence);
  }
}

TEST_CASE("series radius for cos(2 pi x) under muCH exceeds the lifespan bound") {
  const auto c = TrigSpectrum::cosine(1);
  const auto est = estimate_t_radius(taylor_expand(State::scalar(c), kMuCH, 24));
  REQUIRE(est.status == SeriesRadiusStatus::Finite);
  CHECK(est.value >= lifespan_much(c, 1.0).T);
}

TEST_CASE("Taylor march conserves the mean of the sign-definite preset") {
  const auto rep = taylor_march(kPreset, kMuCH, 1.0, capped());
  REQUIRE(rep.status == MarchStatus::Completed);
  CHECK(rep.final_time() == 1.0);
  for (double m : rep.mean_u) CHECK(std::abs(m - 0.5) <= 1e-10);
  for (std::size_t i = 1; i < rep.times.size(); ++i) CHECK(rep.times[i] > rep.times[i - 1]);
  for (const auto& x : rep.states) CHECK(x.u().hermitian_defect() == 0.0);
}

TEST_CASE("Taylor and RK4 agree on a short muCH run") {
  auto opts = capped();
  opts.dt = 1e-4;
  const auto a = taylor_march(kPreset, kMuCH, 0.1, opts);
  const auto b = rk4_march(kPreset, kMuCH, 0.1, opts);
  REQUIRE(a.status == MarchStatus::Completed);
  REQUIRE(b.status == MarchStatus::Completed);
  CHECK(state_gap(a.final_state(), b.final_state()) <= 1e-8);
}

TEST_CASE("RK4 keeps equilibria exactly and conserves the mean") {
  const auto k = State::scalar(TrigSpectrum::constant(0.25));
  const auto rep = rk4_march(k, kMuCH, 0.05);
  for (const auto& x : rep.states) CHECK(max_coeff_diff(x.u(), k.u()) == 0.0);
  const auto t = taylor_march(k, kMuCH, 0.05);
  for (const auto& x : t.states) CHECK(max_coeff_diff(x.u(), k.u()) == 0.0);
  const auto long_run = rk4_march(kPreset, kMuCH, 1.0, capped());
  for (double m : long_run.mean_u) CHECK(std::abs(m - 0.5) <= 1e-10);
}

TEST_CASE("RK4 converges at fourth order") {
  const auto u0 = State::scalar(TrigSpectrum::constant(0.5) + TrigSpectrum::cosine(1, 0.02) +
                                TrigSpectrum::sine(2, 0.02 / 3.0));
  const double t = 0.5;
  auto run = [&](double dt) {
    auto o = capped();
    o.dt = dt;
    return rk4_march(u0, kMuCH, t, o).final_state();
  };
  const auto ref = run(0.05 / 8);
  const double e1 = state_gap(run(0.05), ref);
  const double e2 = state_gap(run(0.025), ref);
  const double ratio = e1 / e2;
  CHECK(ratio >= 14.0);
  CHECK(ratio <= 18.0);
}

TEST_CASE("marching back with the negated field recovers the data") {
  std::mt19937_64 rng(47);
  const auto u0 = State::scalar(testsupport::analytic_spectrum(rng, 16, 0.2));
  for (auto tag : {EquationTag::MuCH, EquationTag::MuDP}) {
    const auto fwd = taylor_march(u0, {tag, 0.0}, 0.05, capped(48));
    REQUIRE(fwd.status == MarchStatus::Completed);
    auto back = capped(48);
    back.direction = -1;
    const auto bwd = taylor_march(fwd.final_state(), {tag, 0.0}, 0.05, back);
    REQUIRE(bwd.status == MarchStatus::Completed);
    CHECK(bwd.final_time() == -0.05);
    CHECK(state_gap(bwd.final_state(), u0) <= 1e-7);
  }
}

TEST_CASE("a step floor above the radius aborts with a partial report") {
  MarchOptions opts;
  opts.h_min = 10.0;
  const auto rep = taylor_march(State::scalar(TrigSpectrum::cosine(1)), kMuCH, 5.0, opts);
  CHECK(rep.status == MarchStatus::RadiusCollapse);
  CHECK(!rep.message.empty());
  CHECK(rep.states.size() >= 1);
}

TEST_CASE("shape mismatches and bad steps are rejected") {
  CHECK_THROWS_AS(taylor_march(kPreset, {EquationTag::Modified, 0.0}, 0.1), DomainError);
  MarchOptions opts;
  opts.dt = 0.0;
  CHECK_THROWS_AS(rk4_march(kPreset, kMuCH, 0.1, opts), DomainError);
}
