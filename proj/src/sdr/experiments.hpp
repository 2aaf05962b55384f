#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sdr/models.hpp"
#include "sdr/sparse.hpp"

namespace sdr::experiments {

enum class Estimator { Sir, DtSir, Oracle, Aggregation };

const char* estimator_name(Estimator e);

// One Monte Carlo cell: a model, a sample size, and an estimator
// configuration.
struct Cell {
  models::ModelSpec model;
  long long n = 0;
  int H = 10;
  Estimator estimator = Estimator::Sir;
  int fit_d = 1;                       // subspace dimension to fit
  std::vector<int> eig_indices;        // 1-based eigenvalue indices to record
  bool centered = false;
  double kappa = 0.0;                  // 0 when the cell is not a kappa cell
  sparse::ThresholdConfig threshold;   // dtsir
  sparse::AggregationConfig aggregation;  // aggregation
  std::vector<int> oracle_support;     // oracle; empty = true support
};

// Per-cell Monte Carlo aggregates. sd uses denominator reps-1 and is 0 by
// convention for a single replication; failed replications are excluded from
// the averages and counted.
struct RiskSummary {
  std::string model;
  double mu = 0.0;
  int p = 0;
  int d = 0;
  int s = 0;
  int H = 0;
  long long n = 0;
  double kappa = 0.0;
  std::string estimator;
  int reps = 0;
  int failures = 0;
  double mean_loss = 0.0;
  double sd_loss = 0.0;
  std::vector<double> mean_eigs;
  std::vector<double> sd_eigs;
  double mean_kappa_loss = 0.0;
  std::uint64_t seed = 0;
};

// Runs reps replications of the cell. Each replication's data stream is keyed
// on (seed, model identity, rep), so cells sharing a model reuse common
// random numbers across n/H/estimator sweeps and results are independent of
// evaluation order and thread count. Throws when more than 10% of the
// replications fail.
RiskSummary run_cell(const Cell& cell, int reps, std::uint64_t seed,
                     int threads = 0);

struct PresetResult {
  std::string preset;  // table1 | table2 | dtsir_curves | custom
  std::vector<RiskSummary> summaries;
};

struct PresetOptions {
  int reps = 100;
  int threads = 0;       // 0 = hardware concurrency
  int p = 10;            // ambient dimension for the eigenvalue studies
  bool allow_large = false;  // unlock the n = 10^6 column
  std::vector<int> p_list;   // dtsir curves; empty = {100,200,300,600,1200}
};

PresetResult preset_table1(std::uint64_t seed, const PresetOptions& opt = {});
PresetResult preset_table2(std::uint64_t seed, const PresetOptions& opt = {});
PresetResult preset_dtsir_curves(std::uint64_t seed,
                                 const PresetOptions& opt = {});

// Flat key=value experiment description (custom preset). Later assignments
// win, so caller-supplied overrides can simply be appended.
PresetResult run_custom(const std::map<std::string, std::string>& config,
                        std::uint64_t default_seed, int threads);
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> load_config_file(const std::string& path);

}  // namespace sdr::experiments
