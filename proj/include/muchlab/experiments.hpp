#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "json.hpp"

namespace muchlab {

enum ExitCode : int { kPass = 0, kInvariantFailure = 1, kUsageError = 2, kNumericalAbort = 3 };

// Everything a run depends on. Config files use the same keys as the fields.
struct RunConfig {
  std::string experiment = "solve";
  std::string equation = "much";
  double gamma = 0.0;
  std::string init = "mckean_pos(0.5,0.01)";
  int n = 32;                 // working degree cap
  double t_end = 0.1;
  std::string integrator = "taylor";
  double dt = 1e-3;
  double beta = 0.5;
  int order = 24;
  double max_step = std::numeric_limits<double>::infinity();
  double s = 1.0;
  double sigma0 = -0.1;
  std::optional<double> delta;
  std::uint64_t seed = 0;
  int samples = 1000;         // per estimate family
  int km_samples = 500;       // per equation
  std::string format = "json";
  std::string out;            // empty writes to stdout
};

nlohmann::ordered_json to_json(const RunConfig& cfg);
// Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

struct ExperimentResult {
  int exit_code = kPass;
  nlohmann::ordered_json report;
};

// Runs one experiment. Bad parameters come back as kUsageError with the
// message in the report, never as an exception.
ExperimentResult run_experiment(const RunConfig& cfg);

// Deterministic text rendering in the configured format.
std::string render(const ExperimentResult& result, const std::string& format);

inline constexpr const char* kReportSchema = "muchlab.report/1";

}  // namespace muchlab
