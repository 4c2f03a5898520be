#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace muchlab {

using Complex = std::complex<double>;

// Coefficients c_{-N..N} of a real trigonometric polynomial on R/Z,
//   phi(x) = sum_k c_k exp(2 pi i k x).
// Real-valued functions satisfy c_{-k} = conj(c_k); every constructor except
// the raw one enforces that, and every operation below preserves it exactly.
class TrigSpectrum {
 public:
  TrigSpectrum() : max_mode_(0), coeffs_(1, Complex{}) {}
  explicit TrigSpectrum(int max_mode);
  // Raw coefficients, index k + max_mode. Symmetry is not checked.
  TrigSpectrum(int max_mode, std::vector<Complex> coeffs);

  static TrigSpectrum constant(double value);
  static TrigSpectrum cosine(int k, double amplitude = 1.0);
  static TrigSpectrum sine(int k, double amplitude = 1.0);
  // c_0 = mean, c_k = positive[k-1] for k >= 1, negative modes mirrored.
  static TrigSpectrum from_positive(double mean, std::span<const Complex> positive);

  int max_mode() const { return max_mode_; }
  Complex operator[](int k) const {
    return (k < -max_mode_ || k > max_mode_) ? Complex{} : coeffs_[k + max_mode_];
  }
  std::span<const Complex> coeffs() const { return coeffs_; }

  // Largest |c_{-k} - conj(c_k)| over the stored range.
  double hermitian_defect() const;
  bool is_finite() const;
  // Drops trailing modes whose coefficients are exactly zero.
  TrigSpectrum trimmed() const;

 private:
  int max_mode_;
  std::vector<Complex> coeffs_;
};

TrigSpectrum operator+(const TrigSpectrum& a, const TrigSpectrum& b);
TrigSpectrum operator-(const TrigSpectrum& a, const TrigSpectrum& b);
TrigSpectrum operator-(const TrigSpectrum& a);
TrigSpectrum operator*(double s, const TrigSpectrum& a);
inline TrigSpectrum operator*(const TrigSpectrum& a, double s) { return s * a; }
// a + s b without a temporary.
TrigSpectrum axpy(const TrigSpectrum& a, double s, const TrigSpectrum& b);

// phi - mean(phi), by zeroing c_0.
TrigSpectrum without_mean(const TrigSpectrum& phi);

// Mean value c_0. Throws if c_0 carries an imaginary part above tolerance.
double mean(const TrigSpectrum& phi);

// Multiplies c_k by symbol(|k|) for k >= 0 and by conj(symbol(|k|)) for k < 0.
// Every Fourier multiplier in the library goes through here.
TrigSpectrum apply_symbol(const TrigSpectrum& phi, const std::function<Complex(int)>& symbol);

// j-th derivative: c_k -> (2 pi i k)^j c_k.
TrigSpectrum derivative(const TrigSpectrum& phi, int order = 1);

// (2 pi i k)^j, evaluated so that the k and -k values are exact conjugates.
Complex derivative_symbol(int k, int order);

// Exact convolution at full degree N_a + N_b. Bitwise commutative.
TrigSpectrum product(const TrigSpectrum& a, const TrigSpectrum& b);

struct Truncation {
  TrigSpectrum value;
  double tail_l2 = 0.0;  // l2 norm of the discarded modes
};
// Keeps modes |k| <= cap; zero-pads when cap exceeds the current degree.
Truncation truncate(const TrigSpectrum& phi, int cap);
TrigSpectrum resize(const TrigSpectrum& phi, int max_mode);

// Lambda^2 = 1 - (2 pi)^{-2} d^2, i.e. c_k -> (1 + k^2) c_k.
TrigSpectrum lambda_squared(const TrigSpectrum& phi);

// phi(x - shift).
TrigSpectrum translate(const TrigSpectrum& phi, double shift);

// l2 norm of the coefficient vector (equal to the L2(S^1) norm).
double l2_norm(const TrigSpectrum& phi);

// Values on x_j = j / M, j = 0..M-1.
struct GridSamples {
  std::vector<double> values;
  double imag_residue = 0.0;  // largest discarded imaginary part
};
GridSamples synthesize(const TrigSpectrum& phi, int points);

// Inverse of synthesize for a grid fine enough to hold max_mode
// (points >= 2 max_mode + 1).
TrigSpectrum analyze(std::span<const double> values, int max_mode);

}  // namespace muchlab
