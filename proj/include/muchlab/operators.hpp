#pragma once

#include <functional>
#include <string>

#include "muchlab/spectrum.hpp"

namespace muchlab {

// A Fourier multiplier described by its symbol on k >= 0; negative modes use
// the conjugate symbol so real functions stay real.
struct MultiplierOp {
  std::string name;
  std::function<Complex(int)> symbol;

  TrigSpectrum operator()(const TrigSpectrum& phi) const { return apply_symbol(phi, symbol); }
};

// All five operators fix the mean mode. On k != 0:
//   A      (2 pi k)^2
//   A^-1   (2 pi k)^-2
//   B      (2 pi k)^2 + (2 pi k)^4
//   B^-1   its reciprocal
//   A^-2   (2 pi k)^-4
MultiplierOp op_a();
MultiplierOp op_a_inv();
MultiplierOp op_b();
MultiplierOp op_b_inv();
MultiplierOp op_a2_inv();

// Derivative of the given order as a multiplier.
MultiplierOp op_derivative(int order);

// Symbol of (outer o inner), evaluated as a product of the two symbols.
MultiplierOp compose(const MultiplierOp& outer, const MultiplierOp& inner);

TrigSpectrum apply_a(const TrigSpectrum& phi);
TrigSpectrum apply_a_inv(const TrigSpectrum& phi);
TrigSpectrum apply_b(const TrigSpectrum& phi);
TrigSpectrum apply_b_inv(const TrigSpectrum& phi);
TrigSpectrum apply_a2_inv(const TrigSpectrum& phi);

// d/dx A^-1 and d/dx B^-1 fused into one symbol; these appear in every
// nonlocal term of the equations.
TrigSpectrum dx_a_inv(const TrigSpectrum& phi);
TrigSpectrum dx_b_inv(const TrigSpectrum& phi);
TrigSpectrum dx_a2_inv(const TrigSpectrum& phi);

}  // namespace muchlab
