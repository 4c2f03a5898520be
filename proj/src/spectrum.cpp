#include "muchlab/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "muchlab/errors.hpp"
#include "muchlab/tolerances.hpp"

namespace muchlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_mode_count(int max_mode) {
  if (max_mode < 0) throw DomainError("negative maximal mode " + std::to_string(max_mode));
}

}  // namespace

TrigSpectrum::TrigSpectrum(int max_mode) : max_mode_(max_mode) {
  require_mode_count(max_mode);
  coeffs_.assign(2 * static_cast<std::size_t>(max_mode) + 1, Complex{});
}

TrigSpectrum::TrigSpectrum(int max_mode, std::vector<Complex> coeffs)
    : max_mode_(max_mode), coeffs_(std::move(coeffs)) {
  require_mode_count(max_mode);
  if (coeffs_.size() != 2 * static_cast<std::size_t>(max_mode) + 1) {
    throw DomainError("coefficient vector has " + std::to_string(coeffs_.size()) +
                      " entries, expected " + std::to_string(2 * max_mode + 1));
  }
}

TrigSpectrum TrigSpectrum::constant(double value) {
  return TrigSpectrum(0, {Complex(value, 0.0)});
}

TrigSpectrum TrigSpectrum::cosine(int k, double amplitude) {
  if (k == 0) return constant(amplitude);
  const int n = std::abs(k);
  std::vector<Complex> pos(n, Complex{});
  pos[n - 1] = Complex(0.5 * amplitude, 0.0);
  return from_positive(0.0, pos);
}

TrigSpectrum TrigSpectrum::sine(int k, double amplitude) {
  if (k == 0) return TrigSpectrum();
  const int n = std::abs(k);
  const double a = k > 0 ? amplitude : -amplitude;
  // sin(2 pi n x) = (e^{i..} - e^{-i..}) / 2i, so c_n = -i a / 2.
  std::vector<Complex> pos(n, Complex{});
  pos[n - 1] = Complex(0.0, -0.5 * a);
  return from_positive(0.0, pos);
}

TrigSpectrum TrigSpectrum::from_positive(double mean_value, std::span<const Complex> positive) {
  const int n = static_cast<int>(positive.size());
  std::vector<Complex> c(2 * positive.size() + 1);
  c[n] = Complex(mean_value, 0.0);
  for (int k = 1; k <= n; ++k) {
    c[n + k] = positive[k - 1];
    c[n - k] = std::conj(positive[k - 1]);
  }
  return TrigSpectrum(n, std::move(c));
}

double TrigSpectrum::hermitian_defect() const {
  double worst = std::abs(coeffs_[max_mode_].imag());
  for (int k = 1; k <= max_mode_; ++k) {
    worst = std::max(worst, std::abs(coeffs_[max_mode_ - k] - std::conj(coeffs_[max_mode_ + k])));
  }
  return worst;
}

bool TrigSpectrum::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Complex c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

TrigSpectrum TrigSpectrum::trimmed() const {
  int n = max_mode_;
  while (n > 0 && coeffs_[max_mode_ + n] == Complex{} && coeffs_[max_mode_ - n] == Complex{}) --n;
  return resize(*this, n);
}

TrigSpectrum operator+(const TrigSpectrum& a, const TrigSpectrum& b) { return axpy(a, 1.0, b); }

TrigSpectrum operator-(const TrigSpectrum& a, const TrigSpectrum& b) { return axpy(a, -1.0, b); }

TrigSpectrum operator-(const TrigSpectrum& a) { return -1.0 * a; }

TrigSpectrum operator*(double s, const TrigSpectrum& a) {
  std::vector<Complex> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : c) x *= s;
  return TrigSpectrum(a.max_mode(), std::move(c));
}

TrigSpectrum axpy(const TrigSpectrum& a, double s, const TrigSpectrum& b) {
  const int n = std::max(a.max_mode(), b.max_mode());
  std::vector<Complex> c(2 * static_cast<std::size_t>(n) + 1);
  for (int k = -n; k <= n; ++k) c[k + n] = a[k] + s * b[k];
  return TrigSpectrum(n, std::move(c));
}

TrigSpectrum without_mean(const TrigSpectrum& phi) {
  std::vector<Complex> c(phi.coeffs().begin(), phi.coeffs().end());
  c[phi.max_mode()] = Complex{};
  return TrigSpectrum(phi.max_mode(), std::move(c));
}

double mean(const TrigSpectrum& phi) {
  const Complex c0 = phi[0];
  if (std::abs(c0.imag()) > kTolerances.imag_residue * std::max(1.0, std::abs(c0.real()))) {
    throw NumericalError("mean mode carries imaginary part " + std::to_string(c0.imag()));
  }
  return c0.real();
}

TrigSpectrum apply_symbol(const TrigSpectrum& phi, const std::function<Complex(int)>& symbol) {
  const int n = phi.max_mode();
  std::vector<Complex> c(2 * static_cast<std::size_t>(n) + 1);
  c[n] = symbol(0) * phi[0];
  for (int k = 1; k <= n; ++k) {
    const Complex s = symbol(k);
    c[n + k] = s * phi[k];
    c[n - k] = std::conj(s) * phi[-k];
  }
  return TrigSpectrum(n, std::move(c));
}

Complex derivative_symbol(int k, int order) {
  if (order < 0) throw DomainError("derivative order must be nonnegative");
  if (order == 0) return Complex(1.0, 0.0);
  const double magnitude = std::pow(kTwoPi * std::abs(k), order);
  // i^order for k > 0, conjugated for k < 0.
  Complex unit;
  switch (order % 4) {
    case 0: unit = {1.0, 0.0}; break;
    case 1: unit = {0.0, 1.0}; break;
    case 2: unit = {-1.0, 0.0}; break;
    default: unit = {0.0, -1.0}; break;
  }
  const Complex value = magnitude * unit;
  return k >= 0 ? value : std::conj(value);
}

TrigSpectrum derivative(const TrigSpectrum& phi, int order) {
  return apply_symbol(phi, [order](int k) { return derivative_symbol(k, order); });
}

TrigSpectrum product(const TrigSpectrum& a, const TrigSpectrum& b) {
  const int n = a.max_mode() + b.max_mode();
  const int p = std::max(a.max_mode(), b.max_mode());
  std::vector<Complex> c(2 * static_cast<std::size_t>(n) + 1);
  // Terms (i, k-i) and (k-i, i) are added as a pair, walking i up to k/2, so
  // swapping the factors only swaps the operands of each pairwise addition.
  for (int k = 0; k <= n; ++k) {
    Complex acc{};
    const int lo = std::max(-p, k - p);
    for (int i = lo; 2 * i < k; ++i) acc += a[i] * b[k - i] + a[k - i] * b[i];
    if (k % 2 == 0) acc += a[k / 2] * b[k / 2];
    c[n + k] = acc;
    c[n - k] = std::conj(acc);
  }
  // The k = 0 sum is real up to the rounding of each pair; store it as such.
  c[n] = Complex(c[n].real(), 0.0);
  return TrigSpectrum(n, std::move(c));
}

Truncation truncate(const TrigSpectrum& phi, int cap) {
  if (cap < 0) throw DomainError("negative truncation degree");
  if (cap >= phi.max_mode()) return {resize(phi, cap), 0.0};
  double tail = 0.0;
  for (int k = cap + 1; k <= phi.max_mode(); ++k) tail += std::norm(phi[k]) + std::norm(phi[-k]);
  return {resize(phi, cap), std::sqrt(tail)};
}

TrigSpectrum resize(const TrigSpectrum& phi, int max_mode) {
  std::vector<Complex> c(2 * static_cast<std::size_t>(max_mode) + 1);
  for (int k = -max_mode; k <= max_mode; ++k) c[k + max_mode] = phi[k];
  return TrigSpectrum(max_mode, std::move(c));
}

TrigSpectrum lambda_squared(const TrigSpectrum& phi) {
  return apply_symbol(phi, [](int k) { return Complex(1.0 + double(k) * k, 0.0); });
}

TrigSpectrum translate(const TrigSpectrum& phi, double shift) {
  return apply_symbol(phi, [shift](int k) { return std::polar(1.0, -kTwoPi * k * shift); });
}

double l2_norm(const TrigSpectrum& phi) {
  double s = 0.0;
  for (const auto& c : phi.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

GridSamples synthesize(const TrigSpectrum& phi, int points) {
  if (points < 1) throw DomainError("grid needs at least one point");
  // Angles are reduced to k j mod M before evaluation so every table entry
  // is a correctly rounded cos/sin of a multiple of 2 pi / M.
  std::vector<Complex> roots(points);
  for (int r = 0; r < points; ++r) roots[r] = std::polar(1.0, kTwoPi * r / points);
  GridSamples out;
  out.values.resize(points);
  const int n = phi.max_mode();
  for (int j = 0; j < points; ++j) {
    Complex acc = phi[0];
    for (int k = 1; k <= n; ++k) {
      const long long r = (static_cast<long long>(k) * j) % points;
      acc += phi[k] * roots[r] + phi[-k] * std::conj(roots[r]);
    }
    out.values[j] = acc.real();
    out.imag_residue = std::max(out.imag_residue, std::abs(acc.imag()));
  }
  return out;
}

TrigSpectrum analyze(std::span<const double> values, int max_mode) {
  const int m = static_cast<int>(values.size());
  if (m < 2 * max_mode + 1) throw DomainError("grid too coarse for requested degree");
  std::vector<Complex> roots(m);
  for (int r = 0; r < m; ++r) roots[r] = std::polar(1.0, -kTwoPi * r / m);
  std::vector<Complex> pos(max_mode);
  double c0 = 0.0;
  for (double v : values) c0 += v;
  for (int k = 1; k <= max_mode; ++k) {
    Complex acc{};
    for (int j = 0; j < m; ++j) acc += values[j] * roots[(static_cast<long long>(k) * j) % m];
    pos[k - 1] = acc / double(m);
  }
  return TrigSpectrum::from_positive(c0 / m, pos);
}

}  // namespace muchlab
