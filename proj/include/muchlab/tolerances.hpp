#pragma once

namespace muchlab {

// Every numerical threshold used by the library lives here so that a run can
// be reproduced from its config alone.
struct Tolerances {
  int degree_cap = 512;              // products are truncated back to this many modes
  double alias_fraction = 1e-8;      // discarded tail / result norm before a run aborts
  double imag_residue = 1e-12;       // allowed imaginary part of c_0 and of grid samples
  double radius_floor = 1e-13;       // modes below this are ignored by strip fits
  int radius_min_modes = 4;          // fewer modes above the floor means band-limited
  double constant_tail = 1e-12;      // certified error of lattice sums
  double gevrey_increment = 1e-10;   // stop raising m once a term is this small
  int gevrey_max_order = 4000;
  double sign_tol = 1e-12;           // McKean sign classification slack
  double rounding_slack = 1e-12;     // relative slack when a bound can be attained
};

inline constexpr Tolerances kTolerances{};

}  // namespace muchlab
