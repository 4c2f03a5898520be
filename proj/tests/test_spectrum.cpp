#include <random>

#include "doctest.h"
#include "muchlab/errors.hpp"
#include "muchlab/spectrum.hpp"
#include "test_support.hpp"

using namespace muchlab;
using testsupport::kPi;

TEST_CASE("cosine and sine presets carry the half-amplitude coefficients") {
  const auto c = TrigSpectrum::cosine(1, 0.01);
  CHECK(c[1] == Complex(0.005, 0.0));
  CHECK(c[-1] == Complex(0.005, 0.0));
  const auto s = TrigSpectrum::sine(2);
  CHECK(s[2] == Complex(0.0, -0.5));
  CHECK(s[-2] == Complex(0.0, 0.5));
  CHECK(s[7] == Complex{});
}

TEST_CASE("product matches a naive convolution and is exactly commutative") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = testsupport::random_spectrum(rng, 1 + trial % 17);
    const auto b = testsupport::random_spectrum(rng, 1 + (3 * trial) % 23);
    const auto ab = product(a, b);
    CHECK(ab.max_mode() == a.max_mode() + b.max_mode());
    CHECK(testsupport::max_coeff_diff(ab, testsupport::naive_product(a, b)) < 1e-13);
    const auto ba = product(b, a);
    for (int k = -ab.max_mode(); k <= ab.max_mode(); ++k) CHECK(ab[k] == ba[k]);
    CHECK(ab.hermitian_defect() == 0.0);
    CHECK(ab[0].imag() == 0.0);
  }
}

TEST_CASE("cos squared halves into a constant and the doubled mode") {
  const auto c = TrigSpectrum::cosine(1);
  const auto sq = product(c, c);
  CHECK(sq[0].real() == testsupport::approx(0.5));
  CHECK(sq[2].real() == testsupport::approx(0.25));
  CHECK(std::abs(sq[1]) == 0.0);
}

TEST_CASE("derivative of sin(2 pi x) is 2 pi cos(2 pi x)") {
  const auto d = derivative(TrigSpectrum::sine(1));
  CHECK(testsupport::max_coeff_diff(d, TrigSpectrum::cosine(1, 2.0 * kPi)) < 1e-15);
  for (int k = 1; k < 40; ++k) {
    for (int j = 0; j < 6; ++j) CHECK(derivative_symbol(-k, j) == std::conj(derivative_symbol(k, j)));
  }
}

TEST_CASE("point values agree with the direct sum") {
  std::mt19937_64 rng(3);
  const auto phi = testsupport::random_spectrum(rng, 9);
  const auto grid = synthesize(phi, 32);
  CHECK(grid.imag_residue < 1e-13);
  for (int j = 0; j < 32; ++j) {
    CHECK(grid.values[j] == testsupport::approx(testsupport::point_value(phi, j / 32.0)).epsilon(1e-12));
  }
  const auto back = analyze(grid.values, 9);
  CHECK(testsupport::max_coeff_diff(back, phi) < 1e-14);
}

TEST_CASE("truncation reports the discarded l2 tail") {
  const auto phi = TrigSpectrum::cosine(1) + TrigSpectrum::cosine(5, 0.2);
  const auto cut = truncate(phi, 3);
  CHECK(cut.value.max_mode() == 3);
  CHECK(cut.tail_l2 == testsupport::approx(std::sqrt(2.0) * 0.1));
  const auto padded = truncate(phi, 9);
  CHECK(padded.value.max_mode() == 9);
  CHECK(padded.tail_l2 == 0.0);
}

TEST_CASE("translation by a quarter period turns cosine into sine") {
  const auto shifted = translate(TrigSpectrum::cosine(1), 0.25);
  CHECK(testsupport::max_coeff_diff(shifted, TrigSpectrum::sine(1)) < 1e-16);
}

TEST_CASE("l2 norm of cos(2 pi x) is 1/sqrt(2)") {
  CHECK(l2_norm(TrigSpectrum::cosine(1)) == testsupport::approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("mean rejects a complex mode zero") {
  TrigSpectrum bad(1, {Complex(0.1, 0), Complex(1.0, 0.5), Complex(0.1, 0)});
  CHECK_THROWS_AS(mean(bad), NumericalError);
  CHECK(bad.hermitian_defect() > 0.0);
}

TEST_CASE("trimming drops exact trailing zeros only") {
  auto padded = resize(TrigSpectrum::cosine(2), 10);
  CHECK(padded.max_mode() == 10);
  CHECK(padded.trimmed().max_mode() == 2);
  CHECK(TrigSpectrum::constant(0.0).trimmed().max_mode() == 0);
}

TEST_CASE("lambda squared weights mode k by 1 + k^2") {
  const auto l = lambda_squared(TrigSpectrum::cosine(3));
  CHECK(l[3].real() == testsupport::approx(0.5 * 10.0));
}
