#pragma once

#include <limits>
#include <string>
#include <vector>

#include "muchlab/equations.hpp"
#include "muchlab/norms.hpp"

namespace muchlab {

enum class SeriesRadiusStatus { Finite, Unbounded, Indeterminate };

struct SeriesRadius {
  SeriesRadiusStatus status = SeriesRadiusStatus::Indeterminate;
  double value = 0.0;
  double residual = 0.0;          // rms misfit of the log-linear fit
  double tail_at_half = 0.0;      // ||a_K|| (rho/2)^K relative to the sum
  bool low_confidence = false;
};

// Time Taylor coefficients x(t) = sum_k a_k t^k of one trajectory.
struct TaylorSolution {
  std::vector<State> coeffs;
  std::vector<double> truncation_tails;  // l2 tail cut from a_k, per order
  std::vector<State> discarded;          // the cut modes of a_k themselves
  bool stopped_early = false;            // a non-finite order was dropped
  SeriesRadius radius;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }
};

// Cauchy-Kowalevsky recursion a_{k+1} = [F(x)]_k / (k + 1), every product
// expanded as a Cauchy product in t. Each a_{k+1} is truncated at `cap`.
TaylorSolution taylor_expand(const State& x0, const EquationKind& eq, int order,
                             int cap = kTolerances.degree_cap);

// Fit of log ||a_k|| against k over the upper half of the orders;
// radius = exp(-slope). Needs at least 8 orders.
SeriesRadius estimate_t_radius(const TaylorSolution& sol, NormSpec norm = {});

// Horner evaluation of the series at t.
State evaluate(const TaylorSolution& sol, double t);
// l2 size of the cut modes summed as a series at t: what evaluate() at t left out.
double discarded_at(const TaylorSolution& sol, double t);

double state_norm(const State& x, NormSpec norm);

struct MarchOptions {
  int order = 24;
  double beta = 0.5;          // Taylor step as a fraction of the t-radius
  double dt = 1e-3;           // RK4 step
  int cap = kTolerances.degree_cap;
  double alias_fraction = kTolerances.alias_fraction;
  double h_min = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  int direction = 1;          // -1 integrates the negated right-hand side
  int record_stride = 1;      // store every n-th state (the last one always)
  NormSpec radius_norm{};
};

enum class MarchStatus { Completed, RadiusCollapse, TruncationBlowup, NonFinite };
std::string to_string(MarchStatus status);

struct MarchReport {
  MarchStatus status = MarchStatus::Completed;
  std::string message;
  // Recorded nodes; times are signed by the direction.
  std::vector<double> times;
  std::vector<State> states;
  // One entry per accepted step, starting at t = 0.
  std::vector<double> step_times;
  std::vector<double> mean_u;
  std::vector<double> mean_v;
  std::vector<double> step_sizes;
  std::vector<double> t_radius;  // Taylor only
  double worst_alias_fraction = 0.0;
  double total_tail = 0.0;
  long long rhs_evaluations = 0;

  const State& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

MarchReport taylor_march(const State& x0, const EquationKind& eq, double t_end,
                         const MarchOptions& opts = {});
MarchReport rk4_march(const State& x0, const EquationKind& eq, double t_end,
                      const MarchOptions& opts = {});

}  // namespace muchlab
