#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "muchlab/errors.hpp"
#include "muchlab/solver.hpp"

namespace muchlab {

std::string to_string(MarchStatus status) {
  switch (status) {
    case MarchStatus::Completed: return "completed";
    case MarchStatus::RadiusCollapse: return "radius-collapse";
    case MarchStatus::TruncationBlowup: return "truncation-blowup";
    case MarchStatus::NonFinite: return "non-finite";
  }
  return "?";
}

namespace {

void validate(const State& x0, const EquationKind& eq, double t_end, const MarchOptions& opts) {
  if (x0.is_pair() != eq.is_system()) throw DomainError("state shape does not match the equation");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be finite and >= 0");
  if (opts.direction != 1 && opts.direction != -1) throw DomainError("direction must be +1 or -1");
  if (opts.record_stride < 1) throw DomainError("record stride must be positive");
}

// Bookkeeping shared by both integrators.
class Recorder {
 public:
  Recorder(MarchReport& report, const MarchOptions& opts) : r_(report), opts_(opts) {}

  void step(double t, const State& x, double h, bool force_node) {
    r_.step_times.push_back(t);
    r_.mean_u.push_back(mean(x.u()));
    if (x.is_pair()) r_.mean_v.push_back(mean(x.v()));
    r_.step_sizes.push_back(h);
    if (force_node || (++count_ % opts_.record_stride) == 0) node(t, x);
  }
  void node(double t, const State& x) {
    if (!r_.times.empty() && r_.times.back() == t) return;
    r_.times.push_back(t);
    r_.states.push_back(x);
  }

 private:
  MarchReport& r_;
  const MarchOptions& opts_;
  long long count_ = 0;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

bool close_to_end(double t, double t_end) { return t_end - t <= 1e-14 * std::max(1.0, t_end); }

}  // namespace

MarchReport taylor_march(const State& x0, const EquationKind& eq, double t_end,
                         const MarchOptions& opts) {
  validate(x0, eq, t_end, opts);
  MarchReport report;
  Recorder rec(report, opts);
  rec.step(0.0, x0, 0.0, true);
  State x = x0;
  double t = 0.0;
  const double sign = opts.direction;
  while (!close_to_end(t, t_end)) {
    const auto sol = taylor_expand(x, eq, opts.order, opts.cap);
    report.rhs_evaluations += sol.order();
    const auto radius = estimate_t_radius(sol, opts.radius_norm);
    if (sol.stopped_early) {
      report.status = MarchStatus::NonFinite;
      report.message = "non-finite Taylor coefficient at t=" + sci(t * sign);
      break;
    }
    double h = std::min(opts.max_step, t_end - t);
    if (radius.status == SeriesRadiusStatus::Finite) {
      h = std::min(h, opts.beta * radius.value);
    } else if (radius.status == SeriesRadiusStatus::Indeterminate) {
      h = 0.0;
    }
    report.t_radius.push_back(radius.value);
    if (!(h >= opts.h_min) && !close_to_end(t + h, t_end)) {
      report.status = MarchStatus::RadiusCollapse;
      report.message = "Taylor radius " + sci(radius.value) + " at t=" +
                       sci(t * sign) + " is below the minimal step";
      break;
    }
    State next = evaluate(sol, sign * h);
    const double injected = discarded_at(sol, sign * h);
    report.total_tail += injected;
    const double scale = l2_norm(next);
    const double fraction = scale > 0.0 ? injected / scale : (injected > 0.0 ? 1.0 : 0.0);
    report.worst_alias_fraction = std::max(report.worst_alias_fraction, fraction);
    if (fraction > opts.alias_fraction) {
      report.status = MarchStatus::TruncationBlowup;
      report.message = "truncated tail is " + sci(fraction) +
                       " of the state norm at t=" + sci(t * sign);
      break;
    }
    if (!next.is_finite()) {
      report.status = MarchStatus::NonFinite;
      report.message = "non-finite state at t=" + sci((t + h) * sign);
      break;
    }
    t = close_to_end(t + h, t_end) ? t_end : t + h;
    x = std::move(next);
    rec.step(sign * t, x, h, t == t_end);
  }
  rec.node(sign * t, x);
  return report;
}

MarchReport rk4_march(const State& x0, const EquationKind& eq, double t_end,
                      const MarchOptions& opts) {
  validate(x0, eq, t_end, opts);
  if (!(opts.dt > 0.0)) throw DomainError("RK4 step must be positive");
  MarchReport report;
  Recorder rec(report, opts);
  rec.step(0.0, x0, 0.0, true);
  // Stages are formed at full degree and cut here, so the discarded modes of
  // one step combine with the RK weights before their size is measured.
  Truncator full(std::numeric_limits<int>::max() / 4);
  Truncator trunc(opts.cap);
  const double sign = opts.direction;
  State cut_sum = scale(0.0, x0);
  auto f = [&](const State& y, double weight) {
    ++report.rhs_evaluations;
    const auto d = rhs(eq, y, full);
    std::vector<TrigSpectrum> kept, cut;
    for (const auto& field : d.fields()) {
      auto parts = trunc.split(sign * field);
      kept.push_back(std::move(parts.kept));
      cut.push_back(std::move(parts.cut));
    }
    auto pack = [](std::vector<TrigSpectrum>& v) {
      return v.size() == 2 ? State::pair(std::move(v[0]), std::move(v[1])) : State::scalar(std::move(v[0]));
    };
    cut_sum = axpy(cut_sum, weight, pack(cut));
    return pack(kept);
  };
  State x = x0;
  const long long steps = std::max(1LL, std::llround(std::ceil(t_end / opts.dt - 1e-9)));
  const double h = t_end / steps;
  for (long long n = 0; n < steps && t_end > 0.0; ++n) {
    cut_sum = scale(0.0, x);
    const auto k1 = f(x, 1.0);
    const auto k2 = f(axpy(x, 0.5 * h, k1), 2.0);
    const auto k3 = f(axpy(x, 0.5 * h, k2), 2.0);
    const auto k4 = f(axpy(x, h, k3), 1.0);
    State next = axpy(x, h / 6.0, axpy(axpy(k1, 2.0, k2), 1.0, axpy(k4, 2.0, k3)));
    const double injected = h / 6.0 * l2_norm(cut_sum);
    report.total_tail += injected;
    const double norm = l2_norm(next);
    const double fraction = norm > 0.0 ? injected / norm : 0.0;
    report.worst_alias_fraction = std::max(report.worst_alias_fraction, fraction);
    if (fraction > opts.alias_fraction) {
      report.status = MarchStatus::TruncationBlowup;
      report.message = "truncated tail is " + sci(fraction) + " of the state norm";
      break;
    }
    if (!next.is_finite()) {
      report.status = MarchStatus::NonFinite;
      report.message = "non-finite state at step " + std::to_string(n + 1);
      break;
    }
    x = std::move(next);
    const double t = (n + 1 == steps) ? t_end : (n + 1) * h;
    rec.step(sign * t, x, h, n + 1 == steps);
  }
  if (report.status != MarchStatus::Completed) {
    rec.node(report.step_times.back(), x);
  }
  return report;
}

}  // namespace muchlab
