#include "muchlab/equations.hpp"

#include <algorithm>
#include <cmath>

#include "muchlab/errors.hpp"
#include "muchlab/operators.hpp"

namespace muchlab {

std::string to_string(EquationTag tag) {
  switch (tag) {
    case EquationTag::MuCH: return "much";
    case EquationTag::MuDP: return "mudp";
    case EquationTag::HigherB: return "higher-b";
    case EquationTag::HigherA2: return "higher-a2";
    case EquationTag::Modified: return "modified";
  }
  return "?";
}

EquationTag parse_equation_tag(const std::string& name) {
  for (auto tag : {EquationTag::MuCH, EquationTag::MuDP, EquationTag::HigherB,
                   EquationTag::HigherA2, EquationTag::Modified}) {
    if (to_string(tag) == name) return tag;
  }
  throw DomainError("unknown equation '" + name + "'");
}

bool State::is_finite() const {
  return std::all_of(fields_.begin(), fields_.end(), [](const auto& f) { return f.is_finite(); });
}

State axpy(const State& a, double s, const State& b) {
  if (a.size() != b.size()) throw DomainError("state shapes differ");
  if (a.is_pair()) return State::pair(axpy(a.u(), s, b.u()), axpy(a.v(), s, b.v()));
  return State::scalar(axpy(a.u(), s, b.u()));
}

State scale(double s, const State& a) {
  if (a.is_pair()) return State::pair(s * a.u(), s * a.v());
  return State::scalar(s * a.u());
}

double l2_norm(const State& x) {
  double n = 0.0;
  for (const auto& f : x.fields()) n = std::max(n, l2_norm(f));
  return n;
}

TrigSpectrum Truncator::apply(const TrigSpectrum& phi) { return split(phi).kept; }

Truncator::Split Truncator::split(const TrigSpectrum& phi) {
  if (phi.max_mode() <= cap_) return {phi, TrigSpectrum()};
  auto cut = truncate(phi, cap_);
  if (cut.tail_l2 > 0.0) {
    ++events_;
    last_tail_ += cut.tail_l2;
    total_tail_ += cut.tail_l2;
    const double full = std::hypot(l2_norm(cut.value), cut.tail_l2);
    worst_ratio_ = std::max(worst_ratio_, cut.tail_l2 / full);
  }
  auto rest = phi - cut.value;
  return {std::move(cut.value), std::move(rest)};
}

namespace {

// -1/2 (u^2)_x, the transport term shared by every scalar equation.
TrigSpectrum transport(const TrigSpectrum& u) { return -0.5 * derivative(product(u, u)); }

// 2 mu(u) u + 1/2 u_x^2 - 3 u_x u_xxx - 7/2 u_xx^2
TrigSpectrum higher_bracket(const TrigSpectrum& u) {
  const auto ux = derivative(u, 1);
  const auto uxx = derivative(u, 2);
  const auto uxxx = derivative(u, 3);
  auto bracket = axpy(2.0 * mean(u) * u, 0.5, product(ux, ux));
  bracket = axpy(bracket, -3.0, product(ux, uxxx));
  return axpy(bracket, -3.5, product(uxx, uxx));
}

}  // namespace

TrigSpectrum rhs_much(const TrigSpectrum& u, Truncator& trunc) {
  const auto ux = derivative(u);
  const auto bracket = axpy(2.0 * mean(u) * u, 0.5, product(ux, ux));
  return trunc.apply(transport(u) - dx_a_inv(bracket));
}

TrigSpectrum rhs_mudp(const TrigSpectrum& u, Truncator& trunc) {
  return trunc.apply(axpy(transport(u), -3.0 * mean(u), dx_a_inv(u)));
}

TrigSpectrum rhs_higher_b(const TrigSpectrum& u, Truncator& trunc) {
  return trunc.apply(transport(u) - dx_b_inv(higher_bracket(u)));
}

TrigSpectrum rhs_higher_a2(const TrigSpectrum& u, Truncator& trunc) {
  return trunc.apply(transport(u) - dx_a2_inv(higher_bracket(u)));
}

State rhs_modified(const State& uv, double gamma, Truncator& trunc) {
  if (!uv.is_pair()) throw DomainError("modified system needs a (u, v) state");
  const auto& u = uv.u();
  const auto& v = uv.v();
  const double mu = mean(u);
  const auto v2 = product(v, v);
  const auto v3 = product(v2, v);
  const auto uv_prod = product(u, v);
  // v^3 / 3 - mu(v^3) / 3 is the cubic with its mean mode removed.
  const auto cubic = without_mean(v3);
  auto inner_u = axpy((2.0 * mu * mu + gamma) * u, mu, v2);
  auto du = axpy((1.0 / 3.0) * cubic, -2.0 * mu, uv_prod) - dx_a_inv(inner_u);

  auto inner_v = axpy((2.0 * mu * mu + gamma) * v, mu, derivative(v2));
  auto dv = axpy((1.0 / 3.0) * derivative(v3), -2.0 * mu, derivative(uv_prod)) - dx_a_inv(inner_v);

  auto tu = trunc.apply(du);
  auto tv = trunc.apply(dv);
  return State::pair(std::move(tu), std::move(tv));
}

TrigSpectrum rhs_much(const TrigSpectrum& u) {
  Truncator t;
  return rhs_much(u, t);
}
TrigSpectrum rhs_mudp(const TrigSpectrum& u) {
  Truncator t;
  return rhs_mudp(u, t);
}
TrigSpectrum rhs_higher_b(const TrigSpectrum& u) {
  Truncator t;
  return rhs_higher_b(u, t);
}
TrigSpectrum rhs_higher_a2(const TrigSpectrum& u) {
  Truncator t;
  return rhs_higher_a2(u, t);
}
State rhs_modified(const State& uv, double gamma) {
  Truncator t;
  return rhs_modified(uv, gamma, t);
}

State rhs(const EquationKind& eq, const State& x, Truncator& trunc) {
  switch (eq.tag) {
    case EquationTag::MuCH: return State::scalar(rhs_much(x.u(), trunc));
    case EquationTag::MuDP: return State::scalar(rhs_mudp(x.u(), trunc));
    case EquationTag::HigherB: return State::scalar(rhs_higher_b(x.u(), trunc));
    case EquationTag::HigherA2: return State::scalar(rhs_higher_a2(x.u(), trunc));
    case EquationTag::Modified: return rhs_modified(x, eq.gamma, trunc);
  }
  throw DomainError("unhandled equation");
}

State scalar_to_system(const TrigSpectrum& u0) { return State::pair(u0, derivative(u0)); }

State initial_state(const EquationKind& eq, const TrigSpectrum& u0) {
  return eq.is_system() ? scalar_to_system(u0) : State::scalar(u0);
}

}  // namespace muchlab
