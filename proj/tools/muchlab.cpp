#include <fstream>
#include <functional>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "muchlab/experiments.hpp"

namespace {

using muchlab::RunConfig;

// A flag value is applied on top of the config file only when given.
struct Overrides {
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> entries;

  template <typename T>
  void bind(CLI::App* sub, const std::string& flag, T& storage, T RunConfig::*field, const std::string& help) {
    auto* opt = sub->add_option(flag, storage, help);
    entries.emplace_back(opt, [&storage, field](RunConfig& c) { c.*field = storage; });
  }
};

struct FlagValues {
  RunConfig v;
  double delta = 0.0;
  std::string config_path;
};

void add_common(CLI::App* sub, FlagValues& f, Overrides& o) {
  o.bind(sub, "--eq", f.v.equation, &RunConfig::equation, "much | mudp | higher-b | higher-a2 | modified");
  o.bind(sub, "--gamma", f.v.gamma, &RunConfig::gamma, "gamma >= 0 for the modified system");
  o.bind(sub, "--init", f.v.init, &RunConfig::init, "initial profile expression");
  o.bind(sub, "--n", f.v.n, &RunConfig::n, "working Fourier degree cap");
  o.bind(sub, "--t-end", f.v.t_end, &RunConfig::t_end, "final time");
  o.bind(sub, "--integrator", f.v.integrator, &RunConfig::integrator, "taylor | rk4");
  o.bind(sub, "--dt", f.v.dt, &RunConfig::dt, "RK4 step");
  o.bind(sub, "--beta", f.v.beta, &RunConfig::beta, "Taylor step as a fraction of the series radius");
  o.bind(sub, "--order", f.v.order, &RunConfig::order, "Taylor order");
  o.bind(sub, "--max-step", f.v.max_step, &RunConfig::max_step, "largest Taylor step");
  o.bind(sub, "--s", f.v.s, &RunConfig::s, "Sobolev index for lifespan estimates");
  o.bind(sub, "--sigma0", f.v.sigma0, &RunConfig::sigma0, "initial Gevrey parameter");
  o.bind(sub, "--seed", f.v.seed, &RunConfig::seed, "random seed");
  o.bind(sub, "--samples", f.v.samples, &RunConfig::samples, "samples per estimate family");
  o.bind(sub, "--km-samples", f.v.km_samples, &RunConfig::km_samples, "samples per equation");
  o.bind(sub, "--out", f.v.out, &RunConfig::out, "output file (stdout when omitted)");
  auto* fmt = sub->add_option("--format", f.v.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  o.entries.emplace_back(fmt, [&f](RunConfig& c) { c.format = f.v.format; });
  auto* delta = sub->add_option("--delta", f.delta, "strip scale in (0, 1]");
  o.entries.emplace_back(delta, [&f](RunConfig& c) { c.delta = f.delta; });
  sub->add_option("--config", f.config_path, "JSON config; flags override its values");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral solver and estimate checker for the mu-Camassa-Holm family"};
  app.require_subcommand(1);
  FlagValues flags;
  Overrides overrides;
  const char* names[][2] = {{"solve", "march an equation and report invariants"},
                            {"lifespan", "analytic lifespan estimate against the Taylor radius"},
                            {"radius-track", "global radius bound along a trajectory"},
                            {"verify-estimates", "randomized check of the norm inequalities"},
                            {"equivalence", "scalar equation against the modified system"},
                            {"constants", "certified constants"}};
  std::vector<CLI::App*> subs;
  for (auto& [name, help] : names) {
    subs.push_back(app.add_subcommand(name, help));
    add_common(subs.back(), flags, overrides);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : muchlab::kUsageError;
  }

  RunConfig cfg;
  try {
    if (!flags.config_path.empty()) cfg = muchlab::load_config_file(flags.config_path, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return muchlab::kUsageError;
  }
  for (auto& [opt, apply] : overrides.entries) {
    if (opt->count() > 0) apply(cfg);
  }
  for (auto* sub : subs) {
    if (sub->parsed()) cfg.experiment = sub->get_name();
  }

  const auto result = muchlab::run_experiment(cfg);
  const auto text = muchlab::render(result, cfg.format);
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write '" << cfg.out << "'\n";
      return muchlab::kUsageError;
    }
    out << text;
  }
  if (result.report.contains("error")) {
    std::cerr << "error: " << result.report["error"]["message"].get<std::string>() << "\n";
  }
  return result.exit_code;
}
