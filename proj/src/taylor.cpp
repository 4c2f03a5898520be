#include <cmath>
#include <limits>

#include "muchlab/errors.hpp"
#include "muchlab/operators.hpp"
#include "muchlab/solver.hpp"

namespace muchlab {

namespace {

using Series = std::vector<TrigSpectrum>;

// Running sum of spectra of varying degree.
class Accumulator {
 public:
  void add(const TrigSpectrum& phi, double s = 1.0) {
    if (phi.max_mode() > n_) grow(phi.max_mode());
    for (int k = -phi.max_mode(); k <= phi.max_mode(); ++k) c_[k + n_] += s * phi[k];
  }
  TrigSpectrum take() { return TrigSpectrum(n_, std::move(c_)); }

 private:
  void grow(int n) {
    std::vector<Complex> c(2 * static_cast<std::size_t>(n) + 1);
    for (int k = -n_; k <= n_; ++k) c[k + n] = c_[k + n_];
    c_ = std::move(c);
    n_ = n;
  }
  int n_ = 0;
  std::vector<Complex> c_{Complex{}};
};

// [a b]_k = sum_{i=0}^k a_i b_{k-i}
TrigSpectrum cauchy(const Series& a, const Series& b, int k) {
  Accumulator acc;
  for (int i = 0; i <= k; ++i) acc.add(product(a[i], b[k - i]));
  return acc.take();
}

TrigSpectrum cauchy_square(const Series& a, int k) {
  Accumulator acc;
  for (int i = 0; 2 * i < k; ++i) acc.add(product(a[i], a[k - i]), 2.0);
  if (k % 2 == 0) acc.add(product(a[k / 2], a[k / 2]));
  return acc.take();
}

// [m b]_k for a scalar series m.
TrigSpectrum cauchy_scalar(const std::vector<double>& m, const Series& b, int k) {
  Accumulator acc;
  for (int i = 0; i <= k; ++i) {
    if (m[i] != 0.0) acc.add(b[k - i], m[i]);
  }
  return acc.take();
}

double cauchy_scalar(const std::vector<double>& m, const std::vector<double>& n, int k) {
  double s = 0.0;
  for (int i = 0; i <= k; ++i) s += m[i] * n[k - i];
  return s;
}

// Holds the t-series of u (and v) together with the intermediate series that
// later orders reuse.
class Recurrence {
 public:
  Recurrence(const EquationKind& eq, const State& x0) : eq_(eq) {
    push(x0);
  }

  // [F(x)]_k from the stored coefficients a_0..a_k.
  std::vector<TrigSpectrum> next(int k) {
    switch (eq_.tag) {
      case EquationTag::MuCH:
      case EquationTag::MuDP:
      case EquationTag::HigherB:
      case EquationTag::HigherA2: return {scalar_order(k)};
      case EquationTag::Modified: return modified_order(k);
    }
    throw DomainError("unhandled equation");
  }

  void push(const State& x) {
    u_.push_back(x.u());
    mu_.push_back(mean(x.u()));
    if (eq_.tag == EquationTag::HigherB || eq_.tag == EquationTag::HigherA2 ||
        eq_.tag == EquationTag::MuCH) {
      ux_.push_back(derivative(x.u(), 1));
    }
    if (eq_.tag == EquationTag::HigherB || eq_.tag == EquationTag::HigherA2) {
      uxx_.push_back(derivative(x.u(), 2));
      uxxx_.push_back(derivative(x.u(), 3));
    }
    if (eq_.is_system()) v_.push_back(x.v());
  }

 private:
  TrigSpectrum scalar_order(int k) {
    const auto transport = -0.5 * derivative(cauchy_square(u_, k));
    const auto mu_u = cauchy_scalar(mu_, u_, k);
    switch (eq_.tag) {
      case EquationTag::MuCH: {
        const auto bracket = axpy(2.0 * mu_u, 0.5, cauchy_square(ux_, k));
        return transport - dx_a_inv(bracket);
      }
      case EquationTag::MuDP: return axpy(transport, -3.0, dx_a_inv(mu_u));
      default: {
        auto bracket = axpy(2.0 * mu_u, 0.5, cauchy_square(ux_, k));
        bracket = axpy(bracket, -3.0, cauchy(ux_, uxxx_, k));
        bracket = axpy(bracket, -3.5, cauchy_square(uxx_, k));
        return transport - (eq_.tag == EquationTag::HigherB ? dx_b_inv(bracket) : dx_a2_inv(bracket));
      }
    }
  }

  std::vector<TrigSpectrum> modified_order(int k) {
    mu2_.push_back(cauchy_scalar(mu_, mu_, k));
    uv_.push_back(cauchy(u_, v_, k));
    v2_.push_back(cauchy_square(v_, k));
    const auto v3 = cauchy(v2_, v_, k);
    const auto mu_uv = cauchy_scalar(mu_, uv_, k);
    const auto mu_v2 = cauchy_scalar(mu_, v2_, k);

    auto inner_u = axpy(2.0 * cauchy_scalar(mu2_, u_, k), eq_.gamma, u_[k]);
    inner_u = inner_u + mu_v2;
    auto du = axpy((1.0 / 3.0) * without_mean(v3), -2.0, mu_uv) - dx_a_inv(inner_u);

    auto inner_v = axpy(2.0 * cauchy_scalar(mu2_, v_, k), eq_.gamma, v_[k]);
    inner_v = inner_v + derivative(mu_v2);
    auto dv = axpy((1.0 / 3.0) * derivative(v3), -2.0, derivative(mu_uv)) - dx_a_inv(inner_v);
    return {std::move(du), std::move(dv)};
  }

  EquationKind eq_;
  Series u_, ux_, uxx_, uxxx_, v_;
  std::vector<double> mu_, mu2_;
  Series uv_, v2_;
};

bool is_zero(const State& x) {
  for (const auto& f : x.fields()) {
    for (auto c : f.coeffs()) {
      if (c != Complex{}) return false;
    }
  }
  return true;
}

}  // namespace

double state_norm(const State& x, NormSpec norm) {
  double s = 0.0;
  for (const auto& f : x.fields()) s += weighted_norm(f, norm);
  return s;
}

TaylorSolution taylor_expand(const State& x0, const EquationKind& eq, int order, int cap) {
  if (order < 1) throw DomainError("Taylor order must be at least 1");
  if (x0.is_pair() != eq.is_system()) throw DomainError("state shape does not match the equation");
  TaylorSolution sol;
  sol.coeffs.push_back(x0);
  sol.truncation_tails.push_back(0.0);
  sol.discarded.push_back(scale(0.0, x0));
  if (is_zero(x0)) {
    sol.radius.status = SeriesRadiusStatus::Unbounded;
    sol.radius.value = std::numeric_limits<double>::infinity();
    return sol;
  }
  Recurrence rec(eq, x0);
  Truncator trunc(cap);
  for (int k = 0; k < order; ++k) {
    auto f = rec.next(k);
    trunc.reset_last();
    std::vector<TrigSpectrum> next, cut;
    for (auto& fi : f) {
      auto parts = trunc.split((1.0 / (k + 1)) * fi);
      next.push_back(std::move(parts.kept));
      cut.push_back(std::move(parts.cut));
    }
    State x = next.size() == 2 ? State::pair(next[0], next[1]) : State::scalar(next[0]);
    if (!x.is_finite()) {
      sol.stopped_early = true;
      break;
    }
    sol.coeffs.push_back(x);
    sol.truncation_tails.push_back(trunc.last_tail());
    sol.discarded.push_back(cut.size() == 2 ? State::pair(cut[0], cut[1]) : State::scalar(cut[0]));
    rec.push(x);
  }
  sol.radius = estimate_t_radius(sol);
  return sol;
}

SeriesRadius estimate_t_radius(const TaylorSolution& sol, NormSpec norm) {
  SeriesRadius r;
  const int order = sol.order();
  if (order < 8) return r;
  std::vector<std::pair<double, double>> pts;
  bool any_nonzero = false;
  for (int k = order / 2; k <= order; ++k) {
    const double n = state_norm(sol.coeffs[k], norm);
    if (n > 0.0) {
      pts.emplace_back(k, std::log(n));
      any_nonzero = true;
    }
  }
  if (!any_nonzero) {
    r.status = SeriesRadiusStatus::Unbounded;
    r.value = std::numeric_limits<double>::infinity();
    return r;
  }
  if (pts.size() < 3) return r;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = pts.size();
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double res = 0.0;
  for (auto [x, y] : pts) res += (y - intercept - slope * x) * (y - intercept - slope * x);
  r.residual = std::sqrt(res / n);
  r.value = std::exp(-slope);
  r.status = std::isfinite(r.value) ? SeriesRadiusStatus::Finite : SeriesRadiusStatus::Indeterminate;
  if (r.status == SeriesRadiusStatus::Finite) {
    const double h = 0.5 * r.value;
    const double total = state_norm(evaluate(sol, h), norm);
    const double last = state_norm(sol.coeffs.back(), norm) * std::pow(h, order);
    r.tail_at_half = total > 0.0 ? last / total : std::numeric_limits<double>::infinity();
    r.low_confidence = r.residual > 1.0 || !(r.tail_at_half < 1e-6);
  }
  return r;
}

State evaluate(const TaylorSolution& sol, double t) {
  State acc = sol.coeffs.back();
  for (int k = sol.order() - 1; k >= 0; --k) acc = axpy(sol.coeffs[k], t, acc);
  return acc;
}

double discarded_at(const TaylorSolution& sol, double t) {
  if (sol.discarded.empty()) return 0.0;
  State acc = sol.discarded.back();
  for (int k = static_cast<int>(sol.discarded.size()) - 2; k >= 0; --k) acc = axpy(sol.discarded[k], t, acc);
  return l2_norm(acc);
}

}  // namespace muchlab
