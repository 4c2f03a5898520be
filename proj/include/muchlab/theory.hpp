#pragma once

#include <functional>
#include <optional>
#include <string>

#include "json.hpp"
#include "muchlab/equations.hpp"
#include "muchlab/norms.hpp"

namespace muchlab {

// Abstract Cauchy-Kowalevsky data for one initial value:
//   ||F(u) - F(w)||_{delta'} <= L / (delta - delta') ||u - w||_delta
//   ||F(u0)||_delta <= M / (1 - delta),
// valid on the ball of radius R, giving analyticity on |t| < T = R / (16 L R + 8 M).
// With a scale Delta in (0, 1] every delta is measured in units of Delta, and
// L and M carry the factor 1 / Delta.
struct LifespanEstimate {
  std::string equation;
  double s = 1.0;
  double delta = 1.0;
  double data_norm = 0.0;   // ||u0|| (sum over fields for the system)
  double structural = 0.0;  // the equation constant C with L = C (||u0|| + R) / Delta
  double R = 0.0;
  double L = 0.0;
  double M = 0.0;
  double T = 0.0;
  std::string norm_label;

  // Lower bound for the radius of analyticity at the reduced width d.
  double radius_at(double d) const { return T * (1.0 - d); }
};

LifespanEstimate lifespan_much(const TrigSpectrum& u0, double s, double delta = 1.0,
                               std::optional<double> R = {});
LifespanEstimate lifespan_mudp(const TrigSpectrum& u0, double s, double delta = 1.0,
                               std::optional<double> R = {});
LifespanEstimate lifespan_higher(const TrigSpectrum& u0, double s, double delta = 1.0,
                                 std::optional<double> R = {});
LifespanEstimate lifespan_modified(const State& x0, double gamma, double s, double delta = 1.0,
                                   std::optional<double> R = {});

// Dispatch on the equation; the two higher variants share one estimate.
LifespanEstimate lifespan(const EquationKind& eq, const State& x0, double s, double delta);

// Delta for a lifespan run: the measured strip width of u0 (capped at 1), or,
// for band-limited data, the Delta in (0, 1] with the largest lifespan.
double lifespan_delta(const EquationKind& eq, const State& x0, double s);

// Global-in-time radius bound from the Kato-Masuda inequality
//   |d/dt Phi| <= phi_coef ||u||_X Phi + drift_coef Phi^{1/2} d_sigma Phi.
struct KatoMasudaConstants {
  double phi_coef = 0.0;
  double drift_coef = 0.0;
  double growth_s = 2.0;  // X = H^{growth_s}
};
KatoMasudaConstants kato_masuda_constants(EquationTag tag);

struct RadiusCurve {
  EquationTag tag = EquationTag::MuCH;
  double sigma0 = 0.0;
  double norm_max = 0.0;   // max over the run of ||u(t)||_X
  double K = 0.0;          // phi_coef (1 + norm_max)
  double drift = 0.0;      // drift_coef
  double data_norm = 0.0;  // ||u0||_{(sigma0, 2)}
  int order = 6;
  double phi0 = 0.0;       // Phi_{sigma0, order}(u0)

  // sigma(t) = sigma0 - sqrt(2) drift ||u0|| / K (exp(K |t| / 2) - 1);
  // -infinity once the exponential overflows.
  double sigma(double t) const;
  // Phi_{sigma0,order}(u0) exp(K |t|).
  double phi_bound(double t) const;
  // exp(2 pi sigma(t)): the guaranteed strip width.
  double width(double t) const;
};

// norm_max must come from a completed march of the same data.
RadiusCurve radius_curve(EquationTag tag, const TrigSpectrum& u0, double sigma0, double norm_max,
                         int order = 6);

struct KatoMasudaCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};
// lhs = |sum_{j<=m} exp(4 pi sigma j)/j!^2 <v^{(j)}, d^j F(v)>_2|,
// rhs = phi_coef ||v||_X Phi + drift_coef Phi^{1/2} d_sigma Phi.
KatoMasudaCheck kato_masuda_check(EquationTag tag, const TrigSpectrum& v, double sigma, int m);

enum class SignClass { Nonnegative, Nonpositive, SignChanging, Degenerate };
std::string to_string(SignClass c);

struct McKeanSign {
  SignClass classification = SignClass::Degenerate;
  double min_value = 0.0;
  double max_value = 0.0;
  bool nonzero_mean = false;
};
// Sign of A(u0) = mu(u0) - u0'' on a grid of grid_factor * N points.
McKeanSign mckean_sign(const TrigSpectrum& u0, int grid_factor = 8);
// min over the same grid of A(u).
double min_mckean(const TrigSpectrum& u, int grid_factor = 8);

nlohmann::ordered_json to_json(const LifespanEstimate& est);
nlohmann::ordered_json to_json(const RadiusCurve& curve);
nlohmann::ordered_json to_json(const KatoMasudaCheck& check);
nlohmann::ordered_json to_json(const McKeanSign& sign);
nlohmann::ordered_json to_json(const CertifiedConstants& constants);

}  // namespace muchlab
