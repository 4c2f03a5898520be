#include "muchlab/operators.hpp"

#include <cmath>
#include <numbers>

namespace muchlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wave(int k) { return kTwoPi * k; }

MultiplierOp mean_preserving(std::string name, std::function<double(double)> on_wave) {
  return {std::move(name), [f = std::move(on_wave)](int k) {
            return k == 0 ? Complex(1.0, 0.0) : Complex(f(wave(k)), 0.0);
          }};
}

}  // namespace

MultiplierOp op_a() {
  return mean_preserving("A", [](double w) { return w * w; });
}

MultiplierOp op_a_inv() {
  return mean_preserving("A^-1", [](double w) { return 1.0 / (w * w); });
}

MultiplierOp op_b() {
  return mean_preserving("B", [](double w) { return w * w + w * w * w * w; });
}

MultiplierOp op_b_inv() {
  return mean_preserving("B^-1", [](double w) { return 1.0 / (w * w + w * w * w * w); });
}

MultiplierOp op_a2_inv() {
  return mean_preserving("A^-2", [](double w) { return 1.0 / (w * w * w * w); });
}

MultiplierOp op_derivative(int order) {
  return {"d^" + std::to_string(order), [order](int k) { return derivative_symbol(k, order); }};
}

MultiplierOp compose(const MultiplierOp& outer, const MultiplierOp& inner) {
  return {outer.name + " o " + inner.name,
          [o = outer.symbol, i = inner.symbol](int k) { return o(k) * i(k); }};
}

TrigSpectrum apply_a(const TrigSpectrum& phi) { return op_a()(phi); }
TrigSpectrum apply_a_inv(const TrigSpectrum& phi) { return op_a_inv()(phi); }
TrigSpectrum apply_b(const TrigSpectrum& phi) { return op_b()(phi); }
TrigSpectrum apply_b_inv(const TrigSpectrum& phi) { return op_b_inv()(phi); }
TrigSpectrum apply_a2_inv(const TrigSpectrum& phi) { return op_a2_inv()(phi); }

// Fused symbols: (2 pi i k) / (2 pi k)^2 = i / (2 pi k), likewise for B and A^2.
TrigSpectrum dx_a_inv(const TrigSpectrum& phi) {
  return apply_symbol(phi, [](int k) {
    return k == 0 ? Complex{} : Complex(0.0, 1.0 / wave(k));
  });
}

TrigSpectrum dx_b_inv(const TrigSpectrum& phi) {
  return apply_symbol(phi, [](int k) {
    const double w = wave(k);
    return k == 0 ? Complex{} : Complex(0.0, 1.0 / (w + w * w * w));
  });
}

TrigSpectrum dx_a2_inv(const TrigSpectrum& phi) {
  return apply_symbol(phi, [](int k) {
    const double w = wave(k);
    return k == 0 ? Complex{} : Complex(0.0, 1.0 / (w * w * w));
  });
}

}  // namespace muchlab
