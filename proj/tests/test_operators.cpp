#include <random>

#include "doctest.h"
#include "muchlab/operators.hpp"
#include "test_support.hpp"

using namespace muchlab;
using testsupport::kPi;

namespace {

double rel_diff(const TrigSpectrum& a, const TrigSpectrum& b) {
  return testsupport::max_coeff_diff(a, b) / std::max(1e-300, testsupport::max_abs_coeff(b));
}

}  // namespace

TEST_CASE("A and B act on cos(2 pi k x) by their closed-form symbols") {
  for (int k = 1; k <= 6; ++k) {
    const double w = 2.0 * kPi * k;
    const auto c = TrigSpectrum::cosine(k);
    CHECK(apply_a(c)[k].real() == testsupport::approx(0.5 * w * w));
    CHECK(apply_b(c)[k].real() == testsupport::approx(0.5 * (w * w + w * w * w * w)));
    CHECK(apply_a2_inv(c)[k].real() == testsupport::approx(0.5 / (w * w * w * w)));
  }
  // Mode zero is fixed by every operator.
  const auto one = TrigSpectrum::constant(2.5);
  CHECK(apply_a(one)[0].real() == 2.5);
  CHECK(apply_b_inv(one)[0].real() == 2.5);
  CHECK(apply_a2_inv(one)[0].real() == 2.5);
}

TEST_CASE("inverse pairs compose to the identity on random spectra") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto phi = testsupport::random_spectrum(rng, 64);
    CHECK(rel_diff(apply_a(apply_a_inv(phi)), phi) < 1e-13);
    CHECK(rel_diff(apply_a_inv(apply_a(phi)), phi) < 1e-13);
    CHECK(rel_diff(apply_b(apply_b_inv(phi)), phi) < 1e-13);
    CHECK(rel_diff(apply_a_inv(apply_a_inv(phi)), apply_a2_inv(phi)) < 1e-13);
  }
}

TEST_CASE("fused derivative symbols equal the two-step composition") {
  std::mt19937_64 rng(5);
  const auto phi = testsupport::random_spectrum(rng, 20);
  CHECK(rel_diff(dx_a_inv(phi), derivative(apply_a_inv(phi))) < 1e-14);
  CHECK(rel_diff(dx_b_inv(phi), derivative(apply_b_inv(phi))) < 1e-14);
  CHECK(rel_diff(dx_a2_inv(phi), derivative(apply_a2_inv(phi))) < 1e-14);
  CHECK(dx_a_inv(phi)[0] == Complex{});
  CHECK(testsupport::max_coeff_diff(dx_a_inv(phi), testsupport::oracle_dx_inverse(phi, 0)) < 1e-15);
  CHECK(testsupport::max_coeff_diff(dx_b_inv(phi), testsupport::oracle_dx_inverse(phi, 1)) < 1e-15);
  CHECK(testsupport::max_coeff_diff(dx_a2_inv(phi), testsupport::oracle_dx_inverse(phi, 2)) < 1e-15);
}

TEST_CASE("composed multipliers multiply their symbols") {
  const auto ab = compose(op_a(), op_b_inv());
  std::mt19937_64 rng(9);
  const auto phi = testsupport::random_spectrum(rng, 12);
  CHECK(rel_diff(ab(phi), apply_a(apply_b_inv(phi))) < 1e-14);
  CHECK(rel_diff(op_derivative(2)(phi), derivative(phi, 2)) < 1e-15);
}

TEST_CASE("multipliers preserve Hermitian symmetry exactly") {
  std::mt19937_64 rng(2);
  const auto phi = testsupport::random_spectrum(rng, 30);
  for (const auto& op : {op_a(), op_a_inv(), op_b(), op_b_inv(), op_a2_inv(), op_derivative(3)}) {
    CHECK(op(phi).hermitian_defect() == 0.0);
  }
}
