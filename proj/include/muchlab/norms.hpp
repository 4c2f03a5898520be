#pragma once

#include <map>
#include <string>

#include "muchlab/spectrum.hpp"

namespace muchlab {

// ||phi||^2_{delta,s} = sum_k <k>^{2s} exp(4 pi delta |k|) |c_k|^2, <k>^2 = 1 + k^2.
struct NormSpec {
  double delta = 0.0;
  double s = 0.0;
};

// Throws NumericalError when the weighted sum leaves double range.
double weighted_norm(const TrigSpectrum& phi, NormSpec spec);

// Real part of sum_k (1 + k^2)^2 phi_k conj(psi_k).
double h2_inner(const TrigSpectrum& phi, const TrigSpectrum& psi);

// log ||phi^{(j)}||_2^2, -infinity for phi = 0. Safe for large j.
double log_derivative_h2_sq(const TrigSpectrum& phi, int order);

// Truncated Gevrey functional of order m on H^2:
//   Phi_{sigma,m}(v) = sum_{j=0}^m exp(4 pi sigma j) / j!^2 * ||v^{(j)}||_2^2 / 2.
// sigma = -infinity keeps only the j = 0 term.
struct GevreySpec {
  double sigma = 0.0;
  int order = 6;
  double s = 2.0;  // only s = 2 is supported
};
double gevrey_phi(const TrigSpectrum& v, GevreySpec spec);
double gevrey_phi_dsigma(const TrigSpectrum& v, GevreySpec spec);

// ||v||_{(sigma,2)}: the untruncated functional, order raised until a term
// falls below the configured increment.
struct GevreyNorm {
  double value = 0.0;
  int terms = 0;
};
GevreyNorm gevrey_norm(const TrigSpectrum& v, double sigma);

// Lattice sum sum_{k >= 0} (1 + k^2)^{-s} for s > 1/2, with its certified
// error bound.
struct LatticeSum {
  double value = 0.0;
  double error_bound = 0.0;
  long long terms = 0;
};
LatticeSum half_lattice_sum(double s);

// Multiplication constant on G^{delta,s}: 2 (1 + s^{2s}) sum_{k>=0} <k>^{-2s}.
double constant_cs(double s);
// Sobolev embedding constant (sum_{k in Z} <k>^{-2s})^{1/2}, s >= 1.
double constant_ds(double s);
// gamma in ||phi psi||_2 <= gamma (||phi||_1 ||psi||_2 + ||phi||_2 ||psi||_1).
// Equal to 2 d_1; see README.
double gamma_mult();

struct CertifiedConstants {
  std::map<double, double> cs;
  std::map<double, double> ds;
  double gamma_mult = 0.0;
  double tail_tol = 0.0;
  std::string gamma_mult_derivation;
};
// c_s for s in {1, 1.5, 2, 3, 4}, d_s for s in {1, 2}.
const CertifiedConstants& certified_constants();

// Strip width from the decay of |c_k|: weighted least-squares slope of
// log|c_k| against |k| over modes above the floor, rho = -slope / (2 pi).
enum class RadiusStatus { Finite, BandLimited, Indeterminate };
struct RadiusEstimate {
  RadiusStatus status = RadiusStatus::Indeterminate;
  double value = 0.0;  // +infinity when band-limited
  int modes_used = 0;
  double residual = 0.0;
};
RadiusEstimate estimate_radius(const TrigSpectrum& phi, double floor = -1.0);

std::string to_string(RadiusStatus status);

}  // namespace muchlab
