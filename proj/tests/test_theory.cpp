#include <cmath>
#include <random>

#include "doctest.h"
#include "muchlab/errors.hpp"
#include "muchlab/operators.hpp"
#include "muchlab/theory.hpp"
#include "test_support.hpp"

using namespace muchlab;
using testsupport::kPi;

namespace {

const double kInvE = std::exp(-1.0);

void check_identity(const LifespanEstimate& e) {
  CHECK(e.T == testsupport::approx(e.R / (16.0 * e.L * e.R + 8.0 * e.M)).epsilon(1e-14));
  CHECK(e.T > 0.0);
  CHECK(e.L > 0.0);
  CHECK(e.M > 0.0);
  CHECK(e.R > 0.0);
}

}  // namespace

TEST_CASE("muCH lifespan for cos(2 pi x) reduces to Delta / (36 C ||u0||)") {
  const auto c = TrigSpectrum::cosine(1);
  const double delta = 0.1;
  const double norm = std::sqrt(2.0 * std::exp(4.0 * kPi * delta));
  const double C = kInvE * (constant_cs(2.0) + 4.0 + 4.0 * kPi * kPi * constant_cs(1.0));
  const auto est = lifespan_much(c, 1.0, delta);
  check_identity(est);
  CHECK(est.data_norm == testsupport::approx(norm).epsilon(1e-14));
  CHECK(est.structural == testsupport::approx(C).epsilon(1e-14));
  CHECK(est.T == testsupport::approx(delta / (36.0 * C * norm)).epsilon(1e-13));
  CHECK(est.T == testsupport::approx(7.56814409959687e-06).epsilon(1e-12));
}

TEST_CASE("muDP and higher lifespans use their own structural constants") {
  const auto c = TrigSpectrum::cosine(1);
  const auto dp = lifespan_mudp(c, 1.0);
  check_identity(dp);
  CHECK(dp.structural == testsupport::approx(kInvE * (constant_cs(2.0) + 6.0)).epsilon(1e-14));
  const auto hi = lifespan_higher(c, 1.0);
  check_identity(hi);
  const double ch = kInvE * (constant_cs(4.0) + 4.0 + (4.0 * kPi * kPi + 208.0 * std::pow(kPi, 4)) * constant_cs(1.0));
  CHECK(hi.structural == testsupport::approx(ch).epsilon(1e-14));
  CHECK(hi.data_norm == testsupport::approx(weighted_norm(c, {1.0, 4.0})).epsilon(1e-14));
  CHECK(hi.L / hi.M == testsupport::approx(4.0 / hi.data_norm).epsilon(1e-14));
  // With R = ||u0|| the identity reduces to Delta / (36 C ||u0||).
  CHECK(hi.T == testsupport::approx(1.0 / (36.0 * ch * hi.data_norm)).epsilon(1e-13));
}

TEST_CASE("scalar lifespans scale like the inverse data norm") {
  std::mt19937_64 rng(53);
  const auto u = testsupport::random_spectrum(rng, 5);
  for (double lambda : {0.5, 2.0, 10.0}) {
    for (auto f : {&lifespan_much, &lifespan_mudp, &lifespan_higher}) {
      const double base = f(u, 1.0, 0.3, std::nullopt).T;
      const double scaled = f(lambda * u, 1.0, 0.3, std::nullopt).T;
      CHECK(scaled * lambda == testsupport::approx(base).epsilon(1e-12));
    }
  }
}

TEST_CASE("modified-system lifespan scales quadratically without gamma") {
  std::mt19937_64 rng(59);
  const auto u = testsupport::random_spectrum(rng, 4);
  const auto x = scalar_to_system(u);
  const auto base = lifespan_modified(x, 0.0, 1.0, 0.5);
  check_identity(base);
  for (double lambda : {0.5, 2.0, 10.0}) {
    const auto scaled = lifespan_modified(scale(lambda, x), 0.0, 1.0, 0.5);
    CHECK(scaled.T * lambda * lambda == testsupport::approx(base.T).epsilon(1e-12));
  }
}

TEST_CASE("modified-system lifespan tends to a gamma-only limit for small data") {
  const double gamma = 1.5;
  const double delta = 0.4;
  const auto tiny = scalar_to_system(TrigSpectrum::cosine(1, 1e-9));
  const auto est = lifespan_modified(tiny, gamma, 1.0, delta);
  CHECK(est.T == testsupport::approx(delta / (48.0 * kInvE * gamma)).epsilon(1e-6));
}

TEST_CASE("lifespan rejects s at or below one half") {
  CHECK_THROWS_AS(lifespan_much(TrigSpectrum::cosine(1), 0.5), DomainError);
  CHECK_THROWS_AS(lifespan_mudp(TrigSpectrum(), 1.0), DomainError);
}

TEST_CASE("Kato-Masuda constants compose the certified lattice values") {
  const double c1 = constant_cs(1.0), d1 = constant_ds(1.0), g = gamma_mult();
  const auto much = kato_masuda_constants(EquationTag::MuCH);
  CHECK(much.phi_coef == testsupport::approx(20 * kPi * d1 + 8 + 4 * kPi * kPi * c1).epsilon(1e-15));
  CHECK(much.drift_coef == testsupport::approx(std::sqrt(3.0) * kPi * g).epsilon(1e-15));
  const auto dp = kato_masuda_constants(EquationTag::MuDP);
  CHECK(dp.phi_coef == testsupport::approx(20 * kPi * d1 + 12).epsilon(1e-15));
  CHECK(dp.drift_coef == testsupport::approx(2 * kPi * g / std::sqrt(3.0)).epsilon(1e-15));
  const auto hi = kato_masuda_constants(EquationTag::HigherB);
  const double g1 = 8 + 18 * kPi * kPi * c1 + (20 * kPi + 24 * std::pow(kPi, 3) + 104 * std::pow(kPi, 4)) * d1;
  CHECK(hi.phi_coef == testsupport::approx(g1).epsilon(1e-15));
  CHECK(hi.drift_coef == testsupport::approx(16 * kPi * g / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(hi.growth_s == 4.0);
  CHECK(hi.phi_coef == testsupport::approx(20906.2086521313).epsilon(1e-12));
  CHECK_THROWS_AS(kato_masuda_constants(EquationTag::Modified), DomainError);
}

TEST_CASE("radius curve starts at sigma0 and decreases") {
  const auto u0 = TrigSpectrum::constant(0.5) + TrigSpectrum::cosine(1, 0.01);
  const auto curve = radius_curve(EquationTag::MuCH, u0, -0.1, 0.6);
  CHECK(curve.sigma(0.0) == -0.1);
  CHECK(curve.sigma(0.01) < curve.sigma(0.0));
  CHECK(curve.sigma(0.02) < curve.sigma(0.01));
  CHECK(curve.sigma(-0.01) == curve.sigma(0.01));
  CHECK(curve.phi_bound(0.0) == testsupport::approx(gevrey_phi(u0, {-0.1, 6})));
  const double K = kato_masuda_constants(EquationTag::MuCH).phi_coef * 1.6;
  CHECK(curve.K == testsupport::approx(K));
  const double expected = -0.1 - std::sqrt(2.0) * curve.drift * curve.data_norm / K * std::expm1(K * 0.003 / 2.0);
  CHECK(curve.sigma(0.003) == testsupport::approx(expected).epsilon(1e-14));
  CHECK(std::isinf(curve.sigma(1e6)));
  CHECK(curve.width(1e6) == 0.0);
}

TEST_CASE("radius curve rejects sigma0 outside the measured strip") {
  std::mt19937_64 rng(61);
  const auto u0 = testsupport::analytic_spectrum(rng, 20, 0.2);
  CHECK_THROWS_AS(radius_curve(EquationTag::MuCH, u0, 0.0, 1.0), DomainError);
  CHECK_NOTHROW(radius_curve(EquationTag::MuCH, u0, -0.5, 1.0));
}

TEST_CASE("Kato-Masuda left side is the time derivative of the functional") {
  std::mt19937_64 rng(67);
  const auto v = testsupport::random_spectrum(rng, 4, 0.3);
  for (auto tag : {EquationTag::MuCH, EquationTag::MuDP, EquationTag::HigherB}) {
    Truncator wide(1 << 20);
    const auto f = rhs({tag, 0.0}, State::scalar(v), wide).u();
    const double eps = 1e-6;
    const double fd = (gevrey_phi(axpy(v, eps, f), {-0.5, 4}) - gevrey_phi(axpy(v, -eps, f), {-0.5, 4})) / (2 * eps);
    const auto chk = kato_masuda_check(tag, v, -0.5, 4);
    CHECK(chk.lhs == testsupport::approx(std::abs(fd)).epsilon(1e-6));
    CHECK(chk.slack == testsupport::approx(chk.rhs - chk.lhs));
    CHECK(chk.slack >= 0.0);
  }
}

TEST_CASE("Kato-Masuda trivial inputs") {
  const auto k = kato_masuda_check(EquationTag::MuCH, TrigSpectrum::constant(2.0), -1.0, 4);
  CHECK(k.lhs == 0.0);
  CHECK(k.rhs >= 0.0);
  const auto z = kato_masuda_check(EquationTag::MuDP, TrigSpectrum(), -1.0, 4);
  CHECK(z.lhs == 0.0);
  CHECK(z.rhs == 0.0);
  const auto c = kato_masuda_check(EquationTag::MuCH, TrigSpectrum::cosine(1), -1.0, 4);
  CHECK(c.slack > 0.0);
  CHECK(c.lhs == 0.0);
  // Closed form: ||cos^{(j)}||_2^2 = 2 (2 pi)^{2j}.
  double phi = 0.0, dphi = 0.0;
  for (int j = 0; j <= 4; ++j) {
    const double term = std::exp(-4.0 * kPi * j) * std::pow(2.0 * kPi, 2 * j) / std::pow(std::tgamma(j + 1.0), 2);
    phi += term;
    dphi += 4.0 * kPi * j * term;
  }
  const auto km = kato_masuda_constants(EquationTag::MuCH);
  const double rhs = km.phi_coef * std::sqrt(2.0) * phi + km.drift_coef * std::sqrt(phi) * dphi;
  CHECK(c.rhs == testsupport::approx(rhs).epsilon(1e-13));
  CHECK(c.rhs == testsupport::approx(632.99520793318).epsilon(1e-12));
}

TEST_CASE("McKean sign classification") {
  const auto pos = mckean_sign(TrigSpectrum::constant(0.5) + TrigSpectrum::cosine(1, 0.01));
  CHECK(pos.classification == SignClass::Nonnegative);
  CHECK(pos.min_value == testsupport::approx(0.5 - 0.04 * kPi * kPi).epsilon(1e-12));
  CHECK(pos.nonzero_mean);
  CHECK(mckean_sign(TrigSpectrum::cosine(1)).classification == SignClass::SignChanging);
  const auto neg = mckean_sign(-(TrigSpectrum::constant(0.5) + TrigSpectrum::cosine(1, 0.01)));
  CHECK(neg.classification == SignClass::Nonpositive);
  CHECK(mckean_sign(TrigSpectrum()).classification == SignClass::Degenerate);
  // The preset c + eps cos(2 pi x) is sign-definite exactly when c >= 4 pi^2 eps.
  const double eps = 0.01, edge = 4.0 * kPi * kPi * eps;
  auto preset = [&](double c) { return TrigSpectrum::constant(c) + TrigSpectrum::cosine(1, eps); };
  CHECK(mckean_sign(preset(edge * 1.001)).classification == SignClass::Nonnegative);
  CHECK(mckean_sign(preset(edge * 0.99)).classification == SignClass::SignChanging);
}

TEST_CASE("serialized estimates carry every constituent") {
  const auto est = lifespan_much(TrigSpectrum::cosine(1), 1.0, 0.5);
  const auto j = to_json(est);
  for (const char* key : {"equation", "s", "delta", "data_norm", "R", "L", "M", "T"}) CHECK(j.contains(key));
  const auto k = to_json(certified_constants());
  CHECK(k.contains("gamma_mult"));
  CHECK(k.contains("c_s"));
}
