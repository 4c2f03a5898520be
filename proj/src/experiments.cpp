#include "muchlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "muchlab/equations.hpp"
#include "muchlab/errors.hpp"
#include "muchlab/initial.hpp"
#include "muchlab/norms.hpp"
#include "muchlab/operators.hpp"
#include "muchlab/solver.hpp"
#include "muchlab/theory.hpp"

namespace muchlab {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

// JSON has no infinities; they travel as strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

class Checks {
 public:
  void add(const std::string& name, bool passed, double value, double threshold,
           const std::string& relation) {
    list_.push_back({{"name", name},
                     {"passed", passed},
                     {"value", num(value)},
                     {"relation", relation},
                     {"threshold", num(threshold)}});
    all_ &= passed;
  }
  bool all_passed() const { return all_; }
  Json json() const { return list_; }

 private:
  Json list_ = Json::array();
  bool all_ = true;
};

Json base_report(const RunConfig& cfg) {
  Json r;
  r["schema"] = kReportSchema;
  r["experiment"] = cfg.experiment;
  r["config"] = to_json(cfg);
  r["constants"] = to_json(certified_constants());
  return r;
}

struct Prepared {
  EquationKind eq;
  TrigSpectrum u0;
  State x0;
  double init_tail = 0.0;
};

Prepared prepare(const RunConfig& cfg, std::optional<EquationTag> force = {}) {
  if (cfg.n < 1) throw DomainError("--n must be positive");
  Prepared p;
  p.eq.tag = force.value_or(parse_equation_tag(cfg.equation));
  p.eq.gamma = cfg.gamma;
  if (cfg.gamma < 0.0) throw DomainError("gamma must be nonnegative");
  auto raw = parse_initial(cfg.init, cfg.seed);
  if (raw.max_mode() > cfg.n) {
    auto cut = truncate(raw, cfg.n);
    p.init_tail = cut.tail_l2;
    raw = cut.value;
  }
  p.u0 = raw;
  p.x0 = initial_state(p.eq, p.u0);
  return p;
}

MarchOptions march_options(const RunConfig& cfg) {
  MarchOptions o;
  o.order = cfg.order;
  o.beta = cfg.beta;
  o.dt = cfg.dt;
  o.cap = cfg.n;
  o.max_step = cfg.max_step;
  return o;
}

MarchReport run_march(const RunConfig& cfg, const Prepared& p) {
  if (!(cfg.t_end >= 0.0)) throw DomainError("--t-end must be nonnegative");
  if (cfg.integrator == "taylor") return taylor_march(p.x0, p.eq, cfg.t_end, march_options(cfg));
  if (cfg.integrator == "rk4") return rk4_march(p.x0, p.eq, cfg.t_end, march_options(cfg));
  throw DomainError("unknown integrator '" + cfg.integrator + "'");
}

Json march_summary(const MarchReport& m) {
  return {{"status", to_string(m.status)},
          {"message", m.message},
          {"steps", m.step_sizes.size() - 1},
          {"final_time", m.final_time()},
          {"rhs_evaluations", m.rhs_evaluations},
          {"worst_alias_fraction", m.worst_alias_fraction},
          {"total_truncated_tail", m.total_tail}};
}

double max_drift(const std::vector<double>& series) {
  double worst = 0.0;
  for (double x : series) worst = std::max(worst, std::abs(x - series.front()));
  return worst;
}

int finish(ExperimentResult& out, const Checks& checks, const MarchReport* march) {
  out.report["checks"] = checks.json();
  int code = kPass;
  if (!checks.all_passed()) code = kInvariantFailure;
  if (march && march->status != MarchStatus::Completed) code = kNumericalAbort;
  out.report["status"] = code == kPass ? "pass" : code == kInvariantFailure ? "fail" : "abort";
  out.exit_code = code;
  return code;
}

// Common conservation and sign checks along a completed march.
void trajectory_checks(const Prepared& p, const MarchReport& m, Checks& checks) {
  checks.add("mean_u_conserved", max_drift(m.mean_u) <= 1e-10, max_drift(m.mean_u), 1e-10, "<=");
  if (p.eq.is_system()) {
    checks.add("mean_v_conserved", max_drift(m.mean_v) <= 1e-10, max_drift(m.mean_v), 1e-10, "<=");
  }
  const bool sign_definite = mckean_sign(p.u0).classification == SignClass::Nonnegative;
  if (sign_definite && (p.eq.tag == EquationTag::MuCH || p.eq.tag == EquationTag::MuDP)) {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& x : m.states) worst = std::min(worst, min_mckean(x.u()));
    checks.add("mckean_sign_preserved", worst >= -1e-8, worst, -1e-8, ">=");
  }
}

ExperimentResult solve(const RunConfig& cfg) {
  ExperimentResult out{kPass, base_report(cfg)};
  const auto p = prepare(cfg);
  out.report["initial"] = {{"max_mode", p.u0.max_mode()},
                           {"mean", mean(p.u0)},
                           {"truncation_tail", p.init_tail},
                           {"mckean_sign", to_json(mckean_sign(p.u0))}};
  const auto m = run_march(cfg, p);
  out.report["march"] = march_summary(m);
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    const auto& x = m.states[i];
    Json row = {{"t", m.times[i]}, {"mean_u", mean(x.u())}, {"h2_norm", weighted_norm(x.u(), {0, 2})},
                {"h4_norm", weighted_norm(x.u(), {0, 4})}};
    const auto strip = estimate_radius(x.u());
    row["strip"] = num(strip.value);
    row["strip_status"] = to_string(strip.status);
    if (x.is_pair()) {
      row["mean_v"] = mean(x.v());
      row["v_minus_ux"] = weighted_norm(x.v() - derivative(x.u()), {0, 1});
    } else {
      row["min_A"] = min_mckean(x.u());
    }
    rows.push_back(row);
  }
  out.report["series"] = rows;
  Checks checks;
  trajectory_checks(p, m, checks);
  finish(out, checks, &m);
  return out;
}

ExperimentResult lifespan_run(const RunConfig& cfg) {
  ExperimentResult out{kPass, base_report(cfg)};
  const auto p = prepare(cfg);
  std::string source = "config";
  double delta = 0.0;
  if (cfg.delta) {
    delta = *cfg.delta;
  } else {
    delta = lifespan_delta(p.eq, p.x0, cfg.s);
    source = estimate_radius(p.u0).status == RadiusStatus::Finite ? "strip-fit" : "maximized";
  }
  const auto est = lifespan(p.eq, p.x0, cfg.s, delta);
  const auto sol = taylor_expand(p.x0, p.eq, cfg.order, cfg.n);
  out.report["delta_source"] = source;
  out.report["lifespan"] = to_json(est);
  out.report["taylor"] = {{"order", sol.order()},
                          {"t_radius", num(sol.radius.value)},
                          {"fit_residual", sol.radius.residual},
                          {"low_confidence", sol.radius.low_confidence}};
  Checks checks;
  const double identity = est.R / (16.0 * est.L * est.R + 8.0 * est.M);
  checks.add("lifespan_identity", identity == est.T, est.T, identity, "==");
  const double witness = 0.9 * est.radius_at(0.5);
  const bool measured = sol.radius.status != SeriesRadiusStatus::Indeterminate;
  checks.add("taylor_radius_exceeds_lifespan", measured && sol.radius.value >= witness,
             sol.radius.value, witness, ">=");
  finish(out, checks, nullptr);
  return out;
}

ExperimentResult radius_track(const RunConfig& cfg) {
  ExperimentResult out{kPass, base_report(cfg)};
  const auto p = prepare(cfg);
  if (p.eq.is_system()) throw DomainError("radius tracking covers the scalar equations only");
  const auto km = kato_masuda_constants(p.eq.tag);
  // Pass one: the trajectory and the running norm it needs.
  const auto m = run_march(cfg, p);
  out.report["march"] = march_summary(m);
  double norm_max = 0.0;
  for (const auto& x : m.states) norm_max = std::max(norm_max, weighted_norm(x.u(), {0, km.growth_s}));
  const auto curve = radius_curve(p.eq.tag, p.u0, cfg.sigma0, norm_max, 6);
  out.report["curve"] = to_json(curve);
  // Pass two: the bounds at every node.
  Checks checks;
  double worst_phi = -std::numeric_limits<double>::infinity();
  double worst_width = std::numeric_limits<double>::infinity();
  int informative = 0;
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    const double t = m.times[i];
    const auto& u = m.states[i].u();
    const double sigma = curve.sigma(t);
    const double phi = gevrey_phi(u, {sigma, curve.order});
    const double bound = curve.phi_bound(t);
    const auto strip = estimate_radius(u);
    const double width = curve.width(t);
    worst_phi = std::max(worst_phi, phi / bound - 1.0);
    // A width bound that has underflowed to zero constrains nothing.
    if (width > 0.0) {
      worst_width = std::min(worst_width, strip.value / width);
      ++informative;
    }
    rows.push_back({{"t", t},
                    {"mean_u", mean(u)},
                    {"h2_norm", weighted_norm(u, {0, 2})},
                    {"h4_norm", weighted_norm(u, {0, 4})},
                    {"growth_norm", weighted_norm(u, {0, km.growth_s})},
                    {"sigma", num(sigma)},
                    {"width_bound", width},
                    {"strip", num(strip.value)},
                    {"strip_status", to_string(strip.status)},
                    {"phi", phi},
                    {"phi_bound", num(bound)},
                    {"min_A", min_mckean(u)}});
  }
  out.report["series"] = rows;
  out.report["nodes_with_positive_width_bound"] = informative;
  checks.add("phi_below_bound", worst_phi <= kTolerances.rounding_slack, worst_phi,
             kTolerances.rounding_slack, "<=");
  checks.add("strip_above_width_bound", worst_width >= 0.98, worst_width, 0.98, ">=");
  trajectory_checks(p, m, checks);
  finish(out, checks, &m);
  return out;
}

ExperimentResult equivalence(const RunConfig& cfg) {
  ExperimentResult out{kPass, base_report(cfg)};
  const auto p = prepare(cfg, EquationTag::Modified);
  const auto m = run_march(cfg, p);
  out.report["march"] = march_summary(m);
  Json rows = Json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    const auto& x = m.states[i];
    const double gap = weighted_norm(x.v() - derivative(x.u()), {0, 1});
    worst = std::max(worst, gap);
    rows.push_back({{"t", m.times[i]}, {"mean_u", mean(x.u())}, {"mean_v", mean(x.v())}, {"v_minus_ux", gap}});
  }
  out.report["series"] = rows;
  Checks checks;
  checks.add("v_tracks_ux", worst <= 1e-8, worst, 1e-8, "<=");
  trajectory_checks(p, m, checks);
  finish(out, checks, &m);
  return out;
}

// ---------------------------------------------------------------------------
// Randomized estimate suite

TrigSpectrum random_spectrum(std::mt19937_64& rng, int degree) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<Complex> pos(degree);
  const double c0 = unit(rng);
  for (auto& c : pos) c = Complex(unit(rng), unit(rng));
  return TrigSpectrum::from_positive(c0, pos);
}

class SlackStats {
 public:
  void add(double lhs, double rhs) {
    const double rel = rhs > 0.0 ? (rhs - lhs) / rhs : (lhs <= 0.0 ? 0.0 : -1.0);
    slack_.push_back(rel);
    if (lhs > rhs * (1.0 + kTolerances.rounding_slack)) ++violations_;
  }
  int violations() const { return violations_; }
  Json json() const {
    auto s = slack_;
    std::sort(s.begin(), s.end());
    auto q = [&](double f) { return s[static_cast<std::size_t>(f * (s.size() - 1))]; };
    return {{"samples", s.size()}, {"violations", violations_},
            {"relative_slack", {{"min", q(0.0)}, {"p10", q(0.1)}, {"median", q(0.5)}, {"max", q(1.0)}}}};
  }

 private:
  std::vector<double> slack_;
  int violations_ = 0;
};

ExperimentResult verify_estimates(const RunConfig& cfg) {
  if (cfg.samples < 1 || cfg.km_samples < 1) throw DomainError("sample counts must be positive");
  ExperimentResult out{kPass, base_report(cfg)};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> degree(1, 16);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto& k = certified_constants();
  const double inv_e = std::exp(-1.0);

  std::map<std::string, SlackStats> fam;
  for (int i = 0; i < cfg.samples; ++i) {
    const auto phi = random_spectrum(rng, degree(rng));
    const auto psi = random_spectrum(rng, degree(rng));
    const double s_pick[] = {1.0, 1.5, 2.0};
    const double d_pick[] = {0.0, 0.05, 0.1};
    const double s = s_pick[i % 3];
    const double delta = d_pick[(i / 3) % 3];
    fam["product_cs"].add(weighted_norm(product(phi, psi), {delta, s}),
                          k.cs.at(s) * weighted_norm(phi, {delta, s}) * weighted_norm(psi, {delta, s}));
    fam["product_d1"].add(weighted_norm(product(phi, psi), {0, 0}),
                          k.ds.at(1.0) * weighted_norm(phi, {0, 0}) * weighted_norm(psi, {0, 1}));
    fam["product_gamma"].add(weighted_norm(product(phi, psi), {0, 2}),
                             k.gamma_mult * (weighted_norm(phi, {0, 1}) * weighted_norm(psi, {0, 2}) +
                                             weighted_norm(phi, {0, 2}) * weighted_norm(psi, {0, 1})));
    const double hi = 0.01 + 0.99 * unit(rng);
    const double lo = hi * unit(rng);
    const double sr = 3.0 * unit(rng);
    fam["derivative_strip_loss"].add(weighted_norm(derivative(phi), {lo, sr}),
                                     inv_e / (hi - lo) * weighted_norm(phi, {hi, sr}));
    fam["derivative_sobolev_loss"].add(weighted_norm(derivative(phi), {hi, sr}),
                                       2.0 * kPi * weighted_norm(phi, {hi, sr + 1.0}));
    fam["mean_bound"].add(std::abs(mean(phi)), weighted_norm(phi, {hi, sr}));
    const int ja = i % 3;
    fam["a_inv_smoothing"].add(weighted_norm(derivative(apply_a_inv(phi), ja), {hi, sr + 2.0 - ja}),
                               weighted_norm(phi, {hi, sr}));
    const int jb = i % 5;
    fam["b_inv_smoothing"].add(weighted_norm(derivative(apply_b_inv(phi), jb), {hi, sr + 4.0 - jb}),
                               weighted_norm(phi, {hi, sr}));
  }

  std::map<std::string, SlackStats> km;
  std::uniform_int_distribution<int> km_degree(1, 12);
  const double sigmas[] = {-2.0, -1.0, -0.5};
  const int orders[] = {2, 4, 8};
  Json km_worst = Json::object();
  for (auto tag : {EquationTag::MuCH, EquationTag::MuDP, EquationTag::HigherB}) {
    auto& stats = km[to_string(tag)];
    double worst_rel = std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.km_samples; ++i) {
      auto v = random_spectrum(rng, km_degree(rng));
      const double target = 5.0 * (1.0 - unit(rng));  // in (0, 5]
      v = (target / weighted_norm(v, {0, 2})) * v;
      const double sigma = sigmas[i % 3];
      const int m = orders[(i / 3) % 3];
      const auto c = kato_masuda_check(tag, v, sigma, m);
      stats.add(c.lhs, c.rhs);
      worst_rel = std::min(worst_rel, c.slack / c.rhs);
    }
    km_worst[to_string(tag)] = worst_rel;
  }

  Json fam_json = Json::object();
  int violations = 0;
  for (auto& [name, st] : fam) {
    fam_json[name] = st.json();
    violations += st.violations();
  }
  Json km_json = Json::object();
  for (auto& [name, st] : km) {
    km_json[name] = st.json();
    violations += st.violations();
  }
  out.report["estimates"] = fam_json;
  out.report["kato_masuda"] = km_json;
  Checks checks;
  for (auto& [name, st] : fam) checks.add(name, st.violations() == 0, st.violations(), 0, "==");
  for (auto& [name, st] : km) checks.add("kato_masuda_" + name, st.violations() == 0, st.violations(), 0, "==");
  finish(out, checks, nullptr);
  return out;
}

ExperimentResult constants_run(const RunConfig& cfg) {
  ExperimentResult out{kPass, base_report(cfg)};
  Json km = Json::object();
  for (auto tag : {EquationTag::MuCH, EquationTag::MuDP, EquationTag::HigherB}) {
    const auto c = kato_masuda_constants(tag);
    km[to_string(tag)] = {{"phi_coef", c.phi_coef}, {"drift_coef", c.drift_coef}, {"growth_s", c.growth_s}};
  }
  out.report["kato_masuda"] = km;
  const auto probe = TrigSpectrum::cosine(1);
  out.report["lifespan_structural"] = {
      {"much", lifespan_much(probe, cfg.s).structural},
      {"mudp", lifespan_mudp(probe, cfg.s).structural},
      {"higher", lifespan_higher(probe, cfg.s).structural}};
  Checks checks;
  finish(out, checks, nullptr);
  return out;
}

template <typename T>
void read(const nlohmann::json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

// Reals also accept the strings written for infinities.
void read(const nlohmann::json& doc, const char* key, double& field) {
  if (!doc.contains(key)) return;
  const auto& v = doc.at(key);
  if (v.is_string()) {
    const auto text = v.get<std::string>();
    if (text == "inf") field = std::numeric_limits<double>::infinity();
    else if (text == "-inf") field = -std::numeric_limits<double>::infinity();
    else throw DomainError(std::string("'") + key + "' must be a number");
    return;
  }
  field = v.get<double>();
  if (!std::isfinite(field)) throw DomainError(std::string("'") + key + "' must be finite");
}

}  // namespace

Json to_json(const RunConfig& c) {
  Json j = {{"experiment", c.experiment}, {"equation", c.equation}, {"gamma", c.gamma},
            {"init", c.init},             {"n", c.n},               {"t_end", c.t_end},
            {"integrator", c.integrator}, {"dt", c.dt},             {"beta", c.beta},
            {"order", c.order},           {"max_step", num(c.max_step)},
            {"s", c.s},                   {"sigma0", c.sigma0}};
  j["delta"] = c.delta ? Json(*c.delta) : Json(nullptr);
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  j["km_samples"] = c.km_samples;
  j["format"] = c.format;
  return j;
}

RunConfig config_from_json(const nlohmann::json& doc, RunConfig cfg) {
  static const char* known[] = {"experiment", "equation", "gamma",   "init",  "n",       "t_end",
                                "integrator", "dt",       "beta",    "order", "max_step", "s",
                                "sigma0",     "delta",    "seed",    "samples", "km_samples",
                                "format",     "out"};
  if (!doc.is_object()) throw DomainError("config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (std::find(std::begin(known), std::end(known), it.key()) == std::end(known)) {
      throw DomainError("unknown config key '" + it.key() + "'");
    }
  }
  try {
    read(doc, "experiment", cfg.experiment);
    read(doc, "equation", cfg.equation);
    read(doc, "gamma", cfg.gamma);
    read(doc, "init", cfg.init);
    read(doc, "n", cfg.n);
    read(doc, "t_end", cfg.t_end);
    read(doc, "integrator", cfg.integrator);
    read(doc, "dt", cfg.dt);
    read(doc, "beta", cfg.beta);
    read(doc, "order", cfg.order);
    read(doc, "max_step", cfg.max_step);
    read(doc, "s", cfg.s);
    read(doc, "sigma0", cfg.sigma0);
    if (doc.contains("delta") && !doc.at("delta").is_null()) cfg.delta = doc.at("delta").get<double>();
    read(doc, "seed", cfg.seed);
    read(doc, "samples", cfg.samples);
    read(doc, "km_samples", cfg.km_samples);
    read(doc, "format", cfg.format);
    read(doc, "out", cfg.out);
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("config value has the wrong type: ") + e.what());
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("config file is not valid JSON: " + std::string(e.what()));
  }
  return config_from_json(doc, base);
}

ExperimentResult run_experiment(const RunConfig& cfg) {
  try {
    if (cfg.format != "json" && cfg.format != "csv") throw DomainError("format must be json or csv");
    if (cfg.experiment == "solve") return solve(cfg);
    if (cfg.experiment == "lifespan") return lifespan_run(cfg);
    if (cfg.experiment == "radius-track") return radius_track(cfg);
    if (cfg.experiment == "verify-estimates") return verify_estimates(cfg);
    if (cfg.experiment == "equivalence") return equivalence(cfg);
    if (cfg.experiment == "constants") return constants_run(cfg);
    throw DomainError("unknown experiment '" + cfg.experiment + "'");
  } catch (const ParseError& e) {
    ExperimentResult r{kUsageError, base_report(cfg)};
    r.report["status"] = "usage-error";
    r.report["error"] = {{"message", e.what()}, {"position", e.position()}};
    return r;
  } catch (const DomainError& e) {
    ExperimentResult r{kUsageError, base_report(cfg)};
    r.report["status"] = "usage-error";
    r.report["error"] = {{"message", e.what()}};
    return r;
  } catch (const NumericalError& e) {
    ExperimentResult r{kNumericalAbort, base_report(cfg)};
    r.report["status"] = "abort";
    r.report["error"] = {{"message", e.what()}};
    return r;
  }
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::vector<std::string>& lines) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (prefix.empty() && it.key() == "series") continue;
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), lines);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), lines);
  } else {
    lines.push_back("#" + prefix + "=" + (j.is_string() ? j.get<std::string>() : j.dump()));
  }
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

std::string render(const ExperimentResult& result, const std::string& format) {
  if (format == "json") return result.report.dump(2) + "\n";
  std::ostringstream os;
  os << "#schema=" << kReportSchema << "\n";
  std::vector<std::string> lines;
  flatten(result.report, "", lines);
  for (const auto& l : lines) os << l << "\n";
  if (result.report.contains("series")) {
    std::vector<std::string> columns;
    for (const auto& row : result.report["series"]) {
      for (auto it = row.begin(); it != row.end(); ++it) {
        if (std::find(columns.begin(), columns.end(), it.key()) == columns.end()) columns.push_back(it.key());
      }
    }
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : result.report["series"]) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << (row.contains(columns[i]) ? csv_cell(row[columns[i]]) : "");
      }
      os << "\n";
    }
  }
  return os.str();
}

}  // namespace muchlab
