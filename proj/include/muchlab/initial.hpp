#pragma once

#include <cstdint>
#include <string>

#include "muchlab/spectrum.hpp"

namespace muchlab {

// Initial data from a small expression language. A datum is a signed sum of
//   a                   constant
//   [a*]cos(k)          a cos(2 pi k x)
//   [a*]sin(k)          a sin(2 pi k x)
//   [a*]mckean_pos(c,e) c + e cos(2 pi x); A(u0) >= 0 exactly when c >= 4 pi^2 |e|
//   [a*]geom(rho,N)     1 + sum_{1<=|k|<=N} exp(-2 pi rho |k|) e^{i theta_k}, phases
//                       drawn from the seed
// Malformed input throws ParseError carrying the offending position.
TrigSpectrum parse_initial(const std::string& expr, std::uint64_t seed = 0);

}  // namespace muchlab
