#include "muchlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "muchlab/errors.hpp"
#include "muchlab/operators.hpp"

namespace muchlab {

namespace {

constexpr double kPi = std::numbers::pi;
const double kInvE = std::exp(-1.0);
constexpr double kInf = std::numeric_limits<double>::infinity();

double cs(double s) {
  static std::map<double, double> cache;
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  return cache[s] = constant_cs(s);
}

void require_scale(double s, double delta) {
  if (!(s > 0.5)) throw DomainError("lifespan estimates need s > 1/2");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("Delta must lie in (0, 1]");
}

double checked_norm(const TrigSpectrum& u, NormSpec spec) {
  const double n = weighted_norm(u, spec);
  if (!std::isfinite(n)) throw DomainError("initial norm is not finite");
  return n;
}

// The scalar estimates share the shape L = C (||u0|| + R), M = C ||u0||^2 / 2.
LifespanEstimate scalar_lifespan(std::string name, double structural, double norm, double s,
                                 double delta, std::optional<double> R, std::string label) {
  if (!(norm > 0.0)) throw DomainError("zero initial datum has no finite lifespan bound");
  LifespanEstimate e;
  e.equation = std::move(name);
  e.s = s;
  e.delta = delta;
  e.data_norm = norm;
  e.structural = structural;
  e.R = R.value_or(norm);
  if (!(e.R > 0.0)) throw DomainError("ball radius must be positive");
  e.L = structural * (norm + e.R) / delta;
  e.M = 0.5 * structural * norm * norm / delta;
  e.T = e.R / (16.0 * e.L * e.R + 8.0 * e.M);
  e.norm_label = std::move(label);
  return e;
}

std::string label(double delta, double s) {
  return "G^{" + std::to_string(delta) + "," + std::to_string(s) + "}";
}

}  // namespace

LifespanEstimate lifespan_much(const TrigSpectrum& u0, double s, double delta, std::optional<double> R) {
  require_scale(s, delta);
  const double c = kInvE * (cs(s + 1.0) + 4.0 + 4.0 * kPi * kPi * cs(s));
  return scalar_lifespan("much", c, checked_norm(u0, {delta, s + 1.0}), s, delta, R,
                         label(delta, s + 1.0));
}

LifespanEstimate lifespan_mudp(const TrigSpectrum& u0, double s, double delta, std::optional<double> R) {
  require_scale(s, delta);
  // Transport as for muCH; 3 d/dx A^-1[mu(u) u] contributes 3 * 2 e^-1.
  const double c = kInvE * (cs(s + 1.0) + 6.0);
  return scalar_lifespan("mudp", c, checked_norm(u0, {delta, s + 1.0}), s, delta, R,
                         label(delta, s + 1.0));
}

LifespanEstimate lifespan_higher(const TrigSpectrum& u0, double s, double delta, std::optional<double> R) {
  require_scale(s, delta);
  const double pi2 = kPi * kPi;
  const double c = kInvE * (cs(s + 3.0) + 4.0 + (4.0 * pi2 + 208.0 * pi2 * pi2) * cs(s));
  return scalar_lifespan("higher", c, checked_norm(u0, {delta, s + 3.0}), s, delta, R,
                         label(delta, s + 3.0));
}

LifespanEstimate lifespan_modified(const State& x0, double gamma, double s, double delta,
                                   std::optional<double> R) {
  require_scale(s, delta);
  if (!x0.is_pair()) throw DomainError("modified lifespan needs a (u, v) state");
  if (gamma < 0.0) throw DomainError("gamma must be nonnegative");
  const NormSpec spec{delta, s + 1.0};
  const double nu = checked_norm(x0.u(), spec);
  const double nv = checked_norm(x0.v(), spec);
  const double total = nu + nv;
  if (!(total > 0.0)) throw DomainError("zero initial datum has no finite lifespan bound");
  const double c = cs(s + 1.0);
  const double e = kInvE;

  LifespanEstimate est;
  est.equation = "modified";
  est.s = s;
  est.delta = delta;
  est.data_norm = total;
  est.R = R.value_or(total);
  const double r1 = est.R + std::max(nu, nv);
  const double lip_u = r1 * r1 * (4 * c + 2 * c * c + 6 * e + 3 * e * c) + e * gamma;
  const double lip_v = e * r1 * r1 * (4 * c + c * c + 6 + 6 * kPi * c) + e * gamma;
  const double cube = total * total * total;
  const double bound_u = (2 * c + c * c + 6 * e + e * c + 1) / 3.0 * cube + e * gamma * total;
  const double bound_v = e * (2 * c + c * c + 2 + 2 * kPi * c) / 3.0 * cube + e * gamma * total;
  // The pair is measured in the sum norm, so the field constants add.
  est.L = (lip_u + lip_v) / delta;
  est.M = (bound_u + bound_v) / delta;
  est.structural = lip_u + lip_v;
  est.T = est.R / (16.0 * est.L * est.R + 8.0 * est.M);
  est.norm_label = label(delta, s + 1.0) + "^2";
  return est;
}

LifespanEstimate lifespan(const EquationKind& eq, const State& x0, double s, double delta) {
  switch (eq.tag) {
    case EquationTag::MuCH: return lifespan_much(x0.u(), s, delta);
    case EquationTag::MuDP: return lifespan_mudp(x0.u(), s, delta);
    case EquationTag::HigherB:
    case EquationTag::HigherA2: return lifespan_higher(x0.u(), s, delta);
    case EquationTag::Modified: return lifespan_modified(x0, eq.gamma, s, delta);
  }
  throw DomainError("unhandled equation");
}

double lifespan_delta(const EquationKind& eq, const State& x0, double s) {
  RadiusEstimate width = estimate_radius(x0.u());
  if (x0.is_pair()) {
    const auto wv = estimate_radius(x0.v());
    if (wv.status == RadiusStatus::Finite &&
        (width.status != RadiusStatus::Finite || wv.value < width.value)) {
      width = wv;
    }
  }
  if (width.status == RadiusStatus::Finite) {
    if (!(width.value > 0.0)) throw DomainError("initial datum shows no analytic strip");
    return std::min(width.value, 1.0);
  }
  if (width.status == RadiusStatus::Indeterminate) throw DomainError("initial datum is zero");
  // Band-limited: every Delta is admissible; golden-section search on log Delta.
  auto t_of = [&](double log_delta) { return lifespan(eq, x0, s, std::exp(log_delta)).T; };
  double a = std::log(1e-4), b = 0.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = t_of(x1), f2 = t_of(x2);
  for (int i = 0; i < 80; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = t_of(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = t_of(x1);
    }
  }
  const double best = 0.5 * (a + b);
  return t_of(best) >= t_of(0.0) ? std::exp(best) : 1.0;
}

KatoMasudaConstants kato_masuda_constants(EquationTag tag) {
  const auto& k = certified_constants();
  const double d1 = k.ds.at(1.0);
  const double c1 = k.cs.at(1.0);
  const double g = k.gamma_mult;
  const double pi2 = kPi * kPi;
  switch (tag) {
    case EquationTag::MuCH:
      return {20 * kPi * d1 + 8 + 4 * pi2 * c1, std::sqrt(3.0) * kPi * g, 2.0};
    case EquationTag::MuDP:
      return {20 * kPi * d1 + 12, 2 * kPi * g / std::sqrt(3.0), 2.0};
    case EquationTag::HigherB:
    case EquationTag::HigherA2:
      return {8 + 18 * pi2 * c1 + (20 * kPi + 24 * pi2 * kPi + 104 * pi2 * pi2) * d1,
              16 * kPi * g / std::sqrt(3.0), 4.0};
    case EquationTag::Modified: break;
  }
  throw DomainError("no Kato-Masuda estimate for the modified system");
}

double RadiusCurve::sigma(double t) const {
  const double growth = std::expm1(0.5 * K * std::abs(t));
  if (!std::isfinite(growth)) return -kInf;
  return sigma0 - std::sqrt(2.0) * drift * data_norm / K * growth;
}

double RadiusCurve::phi_bound(double t) const { return phi0 * std::exp(K * std::abs(t)); }

double RadiusCurve::width(double t) const { return std::exp(2.0 * kPi * sigma(t)); }

RadiusCurve radius_curve(EquationTag tag, const TrigSpectrum& u0, double sigma0, double norm_max,
                         int order) {
  const auto km = kato_masuda_constants(tag);
  if (!(norm_max >= 0.0) || !std::isfinite(norm_max)) throw DomainError("norm bound must be finite");
  const auto strip = estimate_radius(u0);
  if (strip.status == RadiusStatus::Finite && std::exp(2.0 * kPi * sigma0) >= strip.value) {
    throw DomainError("exp(2 pi sigma0) must lie below the strip width of u0");
  }
  RadiusCurve c;
  c.tag = tag;
  c.sigma0 = sigma0;
  c.norm_max = norm_max;
  c.K = km.phi_coef * (1.0 + norm_max);
  c.drift = km.drift_coef;
  c.data_norm = gevrey_norm(u0, sigma0).value;
  c.order = order;
  c.phi0 = gevrey_phi(u0, {sigma0, order});
  return c;
}

KatoMasudaCheck kato_masuda_check(EquationTag tag, const TrigSpectrum& v, double sigma, int m) {
  const auto km = kato_masuda_constants(tag);
  // Full degree: the truncator cap sits above every product degree.
  Truncator exact(std::numeric_limits<int>::max() / 4);
  const auto f = rhs({tag, 0.0}, State::scalar(v), exact).u();
  double acc = 0.0;
  for (int j = 0; j <= m; ++j) {
    const double w = std::exp(4.0 * kPi * sigma * j - 2.0 * std::lgamma(j + 1.0));
    acc += w * h2_inner(derivative(v, j), derivative(f, j));
  }
  KatoMasudaCheck out;
  out.lhs = std::abs(acc);
  const double phi = gevrey_phi(v, {sigma, m});
  const double dphi = gevrey_phi_dsigma(v, {sigma, m});
  out.rhs = km.phi_coef * weighted_norm(v, {0.0, km.growth_s}) * phi +
            km.drift_coef * std::sqrt(phi) * dphi;
  out.slack = out.rhs - out.lhs;
  return out;
}

std::string to_string(SignClass c) {
  switch (c) {
    case SignClass::Nonnegative: return "nonnegative";
    case SignClass::Nonpositive: return "nonpositive";
    case SignClass::SignChanging: return "sign-changing";
    case SignClass::Degenerate: return "degenerate";
  }
  return "?";
}

double min_mckean(const TrigSpectrum& u, int grid_factor) {
  const auto g = synthesize(apply_a(u), std::max(8, grid_factor * std::max(1, u.max_mode())));
  return *std::min_element(g.values.begin(), g.values.end());
}

McKeanSign mckean_sign(const TrigSpectrum& u0, int grid_factor) {
  if (grid_factor < 1) throw DomainError("grid factor must be positive");
  const auto g = synthesize(apply_a(u0), std::max(8, grid_factor * std::max(1, u0.max_mode())));
  McKeanSign out;
  out.min_value = *std::min_element(g.values.begin(), g.values.end());
  out.max_value = *std::max_element(g.values.begin(), g.values.end());
  out.nonzero_mean = mean(u0) != 0.0;
  const double tol = kTolerances.sign_tol;
  if (out.max_value <= tol && out.min_value >= -tol) {
    out.classification = SignClass::Degenerate;
  } else if (out.min_value >= -tol) {
    out.classification = SignClass::Nonnegative;
  } else if (out.max_value <= tol) {
    out.classification = SignClass::Nonpositive;
  } else {
    out.classification = SignClass::SignChanging;
  }
  return out;
}

nlohmann::ordered_json to_json(const LifespanEstimate& e) {
  return {{"equation", e.equation}, {"s", e.s},     {"delta", e.delta},
          {"space", e.norm_label},  {"data_norm", e.data_norm},
          {"structural_constant", e.structural},
          {"R", e.R},               {"L", e.L},     {"M", e.M},
          {"T", e.T}};
}

nlohmann::ordered_json to_json(const RadiusCurve& c) {
  return {{"equation", to_string(c.tag)}, {"sigma0", c.sigma0}, {"norm_max", c.norm_max},
          {"K", c.K},                     {"drift", c.drift},   {"data_norm", c.data_norm},
          {"order", c.order},             {"phi0", c.phi0}};
}

nlohmann::ordered_json to_json(const KatoMasudaCheck& c) {
  return {{"lhs", c.lhs}, {"rhs", c.rhs}, {"slack", c.slack}};
}

nlohmann::ordered_json to_json(const McKeanSign& s) {
  return {{"classification", to_string(s.classification)},
          {"min", s.min_value},
          {"max", s.max_value},
          {"nonzero_mean", s.nonzero_mean}};
}

nlohmann::ordered_json to_json(const CertifiedConstants& k) {
  nlohmann::ordered_json cs_json = nlohmann::ordered_json::object();
  for (auto [s, v] : k.cs) cs_json[std::to_string(s)] = v;
  nlohmann::ordered_json ds_json = nlohmann::ordered_json::object();
  for (auto [s, v] : k.ds) ds_json[std::to_string(s)] = v;
  return {{"c_s", cs_json},
          {"d_s", ds_json},
          {"gamma_mult", k.gamma_mult},
          {"gamma_mult_derivation", k.gamma_mult_derivation},
          {"tail_tol", k.tail_tol}};
}

}  // namespace muchlab
