#pragma once

#include <string>
#include <vector>

#include "muchlab/spectrum.hpp"
#include "muchlab/tolerances.hpp"

namespace muchlab {

enum class EquationTag { MuCH, MuDP, HigherB, HigherA2, Modified };

struct EquationKind {
  EquationTag tag = EquationTag::MuCH;
  double gamma = 0.0;  // linear coefficient of the modified system; ignored otherwise

  bool is_system() const { return tag == EquationTag::Modified; }
};

std::string to_string(EquationTag tag);
// Accepts much, mudp, higher-b, higher-a2, modified.
EquationTag parse_equation_tag(const std::string& name);

// Scalar equations carry only u; the modified system carries (u, v).
class State {
 public:
  State() = default;
  static State scalar(TrigSpectrum u) { return State({std::move(u)}); }
  static State pair(TrigSpectrum u, TrigSpectrum v) { return State({std::move(u), std::move(v)}); }

  bool is_pair() const { return fields_.size() == 2; }
  std::size_t size() const { return fields_.size(); }
  const TrigSpectrum& u() const { return fields_.at(0); }
  const TrigSpectrum& v() const { return fields_.at(1); }
  const TrigSpectrum& field(std::size_t i) const { return fields_.at(i); }
  const std::vector<TrigSpectrum>& fields() const { return fields_; }

  bool is_finite() const;

 private:
  explicit State(std::vector<TrigSpectrum> fields) : fields_(std::move(fields)) {}
  std::vector<TrigSpectrum> fields_;
};

// a + s b, fieldwise.
State axpy(const State& a, double s, const State& b);
State scale(double s, const State& a);
// Largest l2 norm over the fields.
double l2_norm(const State& x);

// Caps the degree of a right-hand side and remembers what was cut. One
// instance per run; the caller decides whether the recorded tail is fatal.
class Truncator {
 public:
  explicit Truncator(int cap = kTolerances.degree_cap) : cap_(cap) {}
  int cap() const { return cap_; }
  TrigSpectrum apply(const TrigSpectrum& phi);
  // Same bookkeeping as apply(); also hands back the modes above the cap.
  struct Split {
    TrigSpectrum kept;
    TrigSpectrum cut;
  };
  Split split(const TrigSpectrum& phi);

  double last_tail() const { return last_tail_; }
  double worst_ratio() const { return worst_ratio_; }
  double total_tail() const { return total_tail_; }
  long long events() const { return events_; }
  void reset_last() { last_tail_ = 0.0; }

 private:
  int cap_;
  double last_tail_ = 0.0;    // summed over apply() calls since reset_last()
  double worst_ratio_ = 0.0;  // tail / norm of the untruncated result
  double total_tail_ = 0.0;
  long long events_ = 0;
};

// u_t = F(u). Products are formed at full degree and truncated once.
TrigSpectrum rhs_much(const TrigSpectrum& u, Truncator& trunc);
TrigSpectrum rhs_mudp(const TrigSpectrum& u, Truncator& trunc);
TrigSpectrum rhs_higher_b(const TrigSpectrum& u, Truncator& trunc);
TrigSpectrum rhs_higher_a2(const TrigSpectrum& u, Truncator& trunc);
State rhs_modified(const State& uv, double gamma, Truncator& trunc);

TrigSpectrum rhs_much(const TrigSpectrum& u);
TrigSpectrum rhs_mudp(const TrigSpectrum& u);
TrigSpectrum rhs_higher_b(const TrigSpectrum& u);
TrigSpectrum rhs_higher_a2(const TrigSpectrum& u);
State rhs_modified(const State& uv, double gamma);

State rhs(const EquationKind& eq, const State& x, Truncator& trunc);

// (u0, d/dx u0): the modified system started here tracks the scalar flow.
State scalar_to_system(const TrigSpectrum& u0);

// Initial state for an equation: scalar data as is, or lifted to (u0, u0').
State initial_state(const EquationKind& eq, const TrigSpectrum& u0);

}  // namespace muchlab
