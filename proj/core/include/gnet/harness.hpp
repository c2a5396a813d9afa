#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gnet/bounds.hpp"
#include "gnet/builder.hpp"

namespace gnet {

struct ExperimentConfig {
  std::string preset = "custom";
  std::string kernel = "laplace";
  double gamma = 1.0;
  int q = 2;
  int Q = 3;
  std::vector<std::size_t> Ns;
  int trials = 8;
  std::uint64_t seed = 1;
  std::size_t atoms = 100000;
  std::string surrogate = "uniform";
  double eval_eps = 0.1;
  std::size_t eval_samples = 20000;
  double bound_kappa = 1.0;
  std::optional<double> partition_kappa;
  int xi_probes = 100;
  int threads = 1;
  bool timing = false;
};

/// Names: laplace, relu-q-eq-Q, relu-q-lt-Q, zonal. Throws ConfigError.
ExperimentConfig preset_config(std::string_view name);
std::vector<std::string> preset_names();

/// Throws ConfigError for an unusable config; returns warnings otherwise.
std::vector<std::string> validate(const ExperimentConfig& cfg);

struct RateRow {
  std::string preset;
  std::size_t N = 0;
  std::uint64_t seed = 0;
  int trials = 0;
  double error = 0.0;
  double bound = 0.0;
  double kappa = 0.0;
  double eps = 0.0;
  std::size_t M = 0;
  double wall_ms = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t used = 0;
  std::vector<std::string> notes;
};

/// OLS of log(error) on log(N). Zero errors are dropped with a note; fewer
/// than 4 usable points throws FitError.
FitResult fit_rate(std::span<const double> N, std::span<const double> error);
FitResult fit_rate(std::span<const RateRow> rows);

struct RateReport {
  ExperimentConfig config;
  std::vector<RateRow> rows;
  std::optional<FitResult> fit;
  BoundReport bound;
  double xi = 1.0;
  double target_exponent = 0.0;
  std::vector<std::string> notes;
};

/// Builds one surrogate, then for each N: choose eps, partition, run the
/// trial search, and record the best error next to the closed-form bound.
/// Fidelity errors are recorded as notes and the N is skipped.
RateReport run_experiment(
    const ExperimentConfig& cfg,
    const std::function<void(const RateRow&)>& progress = {});

inline constexpr std::string_view kCsvHeader =
    "preset,N,seed,trials,error,bound,kappa,eps,M,wall_ms";

void write_csv(std::ostream& os, std::span<const RateRow> rows);
std::vector<RateRow> read_csv(std::istream& is);

void print_summary(std::ostream& os, const RateReport& report);

}  // namespace gnet
