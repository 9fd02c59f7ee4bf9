#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dimer/inference.hpp"
#include "dimer/models.hpp"

namespace dimer {

enum class Statistic { EdgeTest, WedgeTest, ExactLLR, CeLLR, ApproxRHS };

struct ExperimentConfig {
  ModelParams params;
  int trials = 0;
  uint64_t seed = 0;
  Statistic statistic = Statistic::EdgeTest;
  int workers = 1;
  Under under = Under::UnderNull;  // arm for distribution studies
  int M_max = 4;                   // CeLLR truncation

  // Fully-resolved flat config; its hash keys output files and sweep rows.
  std::string to_config() const;
  std::string key() const;  // 16-hex content hash of to_config()
};

struct ErrorEstimate {
  double type1 = 0;  // P_null[test = 1]
  double type2 = 0;  // P_planted[test = 0]
  double total = 0;
  double se_total = 0;
  double theoretical = 0;
};

// trials planted + trials null samples; child seed per (seed, trial, arm) so
// results do not depend on the worker count.
ErrorEstimate run_error_experiment(const ExperimentConfig& cfg);

struct DistributionSummary {
  std::vector<double> values;  // per trial, in trial order
  double mean = 0;
  double var = 0;  // NaN when trials < 2
  bool var_defined = false;
  GaussianPrediction prediction;
};

DistributionSummary run_llr_distribution(const ExperimentConfig& cfg);

struct MomentRow {
  std::string name;
  double empirical = 0;
  double expected = 0;   // exact finite-n formula
  double reference = 0;  // asymptotic form, reported for context
  double se = 0;
  double z = 0;
};

struct MomentReport {
  std::vector<MomentRow> rows;
};

// Empirical vs closed-form means/variances of the signed edge and wedge
// counts under both models.
MomentReport moment_check(const ModelParams& params, int trials, uint64_t seed);

struct SweepRow {
  std::string key;
  std::string status;  // "ok" or "error"
  std::string message;
  ExperimentConfig cfg;
  ErrorEstimate estimate;
};

// One row per cell; cells whose key appears in skip_keys are not rerun.
std::vector<SweepRow> sweep(const std::vector<ExperimentConfig>& grid,
                            const std::vector<std::string>& skip_keys = {});

// Machine-readable output. All doubles printed with max precision so reruns
// are bit-identical.
std::string error_csv_header();
std::string error_csv_row(const ExperimentConfig& cfg, const ErrorEstimate& e);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string moment_csv(const ModelParams& params, int trials, uint64_t seed,
                       const MomentReport& report);
std::string error_json(const ExperimentConfig& cfg, const ErrorEstimate& e);
std::string distribution_csv(const ExperimentConfig& cfg,
                             const DistributionSummary& s);

// Deterministic map-style parallel loop: fn(i) writes into slot i.
void parallel_for(int count, int workers, const std::function<void(int)>& fn);

std::string format_double(double x);

}  // namespace dimer
