#include "muchlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "muchlab/errors.hpp"
#include "muchlab/tolerances.hpp"

namespace muchlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// log of sum exp(x_i), with -inf entries allowed.
class LogSum {
 public:
  void add(double x) {
    if (x == -kInf) return;
    if (x <= max_) {
      acc_ += std::exp(x - max_);
    } else {
      acc_ = acc_ * std::exp(max_ - x) + 1.0;
      max_ = x;
    }
  }
  double value() const { return max_ == -kInf ? -kInf : max_ + std::log(acc_); }

 private:
  double max_ = -kInf;
  double acc_ = 0.0;
};

double weight_log_gamma(int j) { return 2.0 * std::lgamma(j + 1.0); }

// Term j of the Gevrey functional without the 1/2, in log form.
double log_gevrey_term(const TrigSpectrum& v, double sigma, int j) {
  if (j == 0) return log_derivative_h2_sq(v, 0);
  if (sigma == -kInf) return -kInf;
  return 4.0 * kPi * sigma * j - weight_log_gamma(j) + log_derivative_h2_sq(v, j);
}

void require_h2(GevreySpec spec) {
  if (spec.s != 2.0) throw DomainError("Gevrey functional is defined on H^2 only");
  if (spec.order < 0) throw DomainError("Gevrey order must be nonnegative");
  if (std::isnan(spec.sigma) || spec.sigma == kInf) throw DomainError("sigma must be below +infinity");
}

// Integral of (1 + x^2)^{-s} over [a, infinity) through the incomplete beta
// function: with t = 1 / (1 + x^2) it becomes B_{t_a}(s - 1/2, 1/2) / 2.
double tail_integral(double s, double a) {
  const double ta = 1.0 / (1.0 + a * a);
  return 0.5 * boost::math::beta(s - 0.5, 0.5, ta);
}

}  // namespace

double weighted_norm(const TrigSpectrum& phi, NormSpec spec) {
  LogSum sum;
  for (int k = -phi.max_mode(); k <= phi.max_mode(); ++k) {
    const double a = std::abs(phi[k]);
    if (a == 0.0) continue;
    const double kk = std::abs(k);
    sum.add(spec.s * std::log1p(kk * kk) + 4.0 * kPi * spec.delta * kk + 2.0 * std::log(a));
  }
  const double log_sq = sum.value();
  if (log_sq == -kInf) return 0.0;
  const double norm = std::exp(0.5 * log_sq);
  if (!std::isfinite(norm)) {
    throw NumericalError("weighted norm out of range (log norm " + std::to_string(0.5 * log_sq) + ")");
  }
  return norm;
}

double h2_inner(const TrigSpectrum& phi, const TrigSpectrum& psi) {
  const int n = std::min(phi.max_mode(), psi.max_mode());
  double acc = 0.0;
  for (int k = -n; k <= n; ++k) {
    const double w = (1.0 + double(k) * k) * (1.0 + double(k) * k);
    acc += w * (phi[k] * std::conj(psi[k])).real();
  }
  return acc;
}

double log_derivative_h2_sq(const TrigSpectrum& phi, int order) {
  LogSum sum;
  for (int k = -phi.max_mode(); k <= phi.max_mode(); ++k) {
    const double a = std::abs(phi[k]);
    if (a == 0.0) continue;
    if (k == 0 && order > 0) continue;
    const double kk = std::abs(k);
    const double log_wave = order > 0 ? 2.0 * order * std::log(2.0 * kPi * kk) : 0.0;
    sum.add(2.0 * std::log1p(kk * kk) + log_wave + 2.0 * std::log(a));
  }
  return sum.value();
}

double gevrey_phi(const TrigSpectrum& v, GevreySpec spec) {
  require_h2(spec);
  double acc = 0.0;
  for (int j = 0; j <= spec.order; ++j) acc += std::exp(log_gevrey_term(v, spec.sigma, j));
  if (!std::isfinite(acc)) throw NumericalError("Gevrey functional overflow");
  return 0.5 * acc;
}

double gevrey_phi_dsigma(const TrigSpectrum& v, GevreySpec spec) {
  require_h2(spec);
  double acc = 0.0;
  for (int j = 1; j <= spec.order; ++j) {
    acc += 4.0 * kPi * j * std::exp(log_gevrey_term(v, spec.sigma, j));
  }
  if (!std::isfinite(acc)) throw NumericalError("Gevrey derivative overflow");
  return 0.5 * acc;
}

GevreyNorm gevrey_norm(const TrigSpectrum& v, double sigma) {
  const auto& tol = kTolerances;
  double acc = 0.0;
  double previous = kInf;
  int j = 0;
  for (; j <= tol.gevrey_max_order; ++j) {
    const double term = std::exp(log_gevrey_term(v, sigma, j));
    acc += term;
    if (!std::isfinite(acc)) throw NumericalError("Gevrey norm diverges at this sigma");
    // Past the peak the terms decrease monotonically, so one small,
    // decreasing term ends the sum.
    if (term <= tol.gevrey_increment * acc && term <= previous) break;
    previous = term;
  }
  if (j > tol.gevrey_max_order) throw NumericalError("Gevrey norm did not converge; sigma too large");
  return {std::sqrt(acc), j + 1};
}

LatticeSum half_lattice_sum(double s) {
  if (!(s > 0.5)) throw DomainError("lattice sum needs s > 1/2");
  const double tol = kTolerances.constant_tail;
  auto f = [s](double x) { return std::pow(1.0 + x * x, -s); };
  for (long long cut = 64;; cut *= 2) {
    // Partial sum over 0..cut, accumulated from the small end.
    double partial = 0.0;
    for (long long k = cut; k >= 0; --k) partial += f(double(k));
    // f is convex on [1, inf): trapezoid bounds the remaining sum from below,
    // midpoint from above.
    const double a = double(cut + 1);
    const double lo = tail_integral(s, a) + 0.5 * f(a);
    const double hi = tail_integral(s, a - 0.5);
    const double rounding = 4.0 * std::numeric_limits<double>::epsilon() * partial;
    const double err = 0.5 * (hi - lo) + rounding;
    if (err < tol || cut > (1LL << 26)) {
      if (err >= tol) throw NumericalError("lattice sum failed to certify tail");
      return {partial + 0.5 * (lo + hi), err, cut + 1};
    }
  }
}

double constant_cs(double s) {
  if (!(s > 0.5)) throw DomainError("c_s needs s > 1/2");
  return 2.0 * (1.0 + std::pow(s, 2.0 * s)) * half_lattice_sum(s).value;
}

double constant_ds(double s) {
  if (!(s >= 1.0)) throw DomainError("d_s is used for s >= 1 only");
  return std::sqrt(2.0 * half_lattice_sum(s).value - 1.0);
}

double gamma_mult() { return 2.0 * constant_ds(1.0); }

const CertifiedConstants& certified_constants() {
  static const CertifiedConstants table = [] {
    CertifiedConstants t;
    for (double s : {1.0, 1.5, 2.0, 3.0, 4.0}) t.cs[s] = constant_cs(s);
    for (double s : {1.0, 2.0}) t.ds[s] = constant_ds(s);
    t.gamma_mult = gamma_mult();
    t.tail_tol = kTolerances.constant_tail;
    t.gamma_mult_derivation =
        "<k>^2 <= 2(<n>^2 + <k-n>^2) splits the H^2 weight of a convolution; Young's "
        "inequality l2*l1 -> l2 and sum|c_k| <= d_1 ||.||_1 give gamma = 2 d_1";
    return t;
  }();
  return table;
}

RadiusEstimate estimate_radius(const TrigSpectrum& phi, double floor) {
  if (floor < 0.0) floor = kTolerances.radius_floor;
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  int used = 0;
  std::vector<std::pair<double, double>> points;
  for (int k = 1; k <= phi.max_mode(); ++k) {
    const double a = std::abs(phi[k]);
    if (!(a > floor)) continue;
    const double x = k, y = std::log(a), w = k;
    sw += w;
    swx += w * x;
    swy += w * y;
    swxx += w * x * x;
    swxy += w * x * y;
    points.emplace_back(x, y);
    ++used;
  }
  RadiusEstimate est;
  est.modes_used = used;
  if (used == 0 && !(std::abs(phi[0]) > floor)) return est;  // nothing to fit
  if (used < kTolerances.radius_min_modes) {
    est.status = RadiusStatus::BandLimited;
    est.value = kInf;
    return est;
  }
  const double det = sw * swxx - swx * swx;
  const double slope = (sw * swxy - swx * swy) / det;
  const double intercept = (swy - slope * swx) / sw;
  double res = 0.0;
  for (auto [x, y] : points) res += x * (y - intercept - slope * x) * (y - intercept - slope * x);
  est.residual = std::sqrt(res / sw);
  est.status = RadiusStatus::Finite;
  est.value = std::max(0.0, -slope / (2.0 * kPi));
  return est;
}

std::string to_string(RadiusStatus status) {
  switch (status) {
    case RadiusStatus::Finite: return "finite";
    case RadiusStatus::BandLimited: return "band-limited";
    default: return "indeterminate";
  }
}

}  // namespace muchlab
