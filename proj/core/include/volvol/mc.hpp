#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "volvol/gof.hpp"
#include "volvol/model.hpp"
#include "volvol/spot.hpp"

namespace volvol::mc {

// Studies reproduced by the harness. 1-4: standardized estimation error of
// the integrated variance-of-variance (infeasible/feasible standardization,
// two leverage settings). 5: bootstrap test size under the null. 6: bootstrap
// test power under power-law alternatives.
enum class Table {
  InfeasibleRho0 = 1,
  InfeasibleRho = 2,
  FeasibleRho0 = 3,
  FeasibleRho = 4,
  BootstrapLevel = 5,
  BootstrapPower = 6,
};

// Data-generating model a study table uses by default: the reference
// square-root model (beta .3, kappa 5, alpha .2, xi .5, v0 alpha) with the
// table's leverage rho, or the power-law alternatives for table 6
// (gamma = 0: additive noise scale 1; gamma = 1: proportional, xi = sqrt(5)).
ModelSpec default_table_model(Table table, double power_gamma = 1.0,
                              std::optional<double> rho = std::nullopt);

struct ExperimentSpec {
  Table table = Table::InfeasibleRho0;
  std::vector<std::size_t> n_list = {2500, 10000};
  std::size_t reps = 1000;  // tables 1-4 (desk scale; full scale 10000)
  std::size_t runs = 200;   // tables 5-6 (desk scale; full scale 500)
  std::size_t B = 200;
  std::optional<double> rho;        // overrides the table default
  std::optional<ModelSpec> model;   // overrides the whole model
  double power_gamma = 1.0;         // table 6 alternative block
  std::uint64_t master_seed = 1;
  std::vector<double> levels = {0.01, 0.025, 0.05, 0.1, 0.2};  // tables 5-6
  int substeps = 10;
  int threads = 1;
  EstimatorConfig est;
};

// Everything one replication of the estimation study yields. Exposed so the
// acceptance/property suites can aggregate replication-level values.
struct RepStats {
  double v_hat = 0.0;
  double iv_tau2 = 0.0, iv_tau4 = 0.0, iv_alpha2 = 0.0;
  double c_hat = 0.0, t_hat = 0.0;
  double alpha2_mean = 0.0;    // (1/n) sum of the local variance density
  double v_uncorrected = 0.0;  // V-hat without the bias-correction term
  bool c_pos = false;
  double z_infeasible = 0.0;
  double z_feasible = 0.0;     // meaningful only when c_pos
};

// One replication, stream-keyed by (master_seed, n, rep): simulate at the
// given substeps, run the full estimator pipeline at horizon est.t.
RepStats replicate_stats(const ModelSpec& model, std::size_t n,
                         std::uint64_t master_seed, std::size_t rep,
                         const EstimatorConfig& est, int substeps);

// All replications for one sample size, parallel, bit-exact for any thread
// count (slot-indexed results, fixed-order aggregation downstream).
std::vector<RepStats> replicate_table(const ModelSpec& model, std::size_t n,
                                      std::size_t reps,
                                      std::uint64_t master_seed,
                                      const EstimatorConfig& est,
                                      int substeps, int threads);

// One bootstrap-test run of tables 5-6.
struct GofRun {
  double p = 1.0;
  double y_n = 0.0;
  bool degenerate = false;  // theta-hat <= 0: no bootstrap scale
  std::size_t discarded_boot = 0;
  std::size_t discarded_grid = 0;
};

std::vector<GofRun> gof_runs(const ModelSpec& model, std::size_t n,
                             std::size_t runs, std::size_t B,
                             std::uint64_t master_seed, const Tau2Fn& fn,
                             const EstimatorConfig& est, int substeps,
                             int threads);

struct TableRow {
  std::size_t n = 0;
  std::size_t reps = 0;       // replications entering the row
  double mean = 0.0;          // tables 1-4: mean of z; 5-6: mean p-value
  double variance = 0.0;
  std::vector<double> cells;  // tables 1-4: coverage below the normal
                              // quantile at {.025,.05,.1,.9,.95,.975};
                              // tables 5-6: rejection rate per level
  std::size_t discarded = 0;  // negative-variance reps / degenerate runs
  double wall_ms = 0.0;
};

// Quantile grid of the coverage columns in tables 1-4.
const std::vector<double>& coverage_grid();

std::vector<TableRow> run_experiment(const ExperimentSpec& spec);

// Reference results at full scale, for regression comparison.
struct ReferenceRow {
  std::size_t n = 0;
  std::size_t reps = 0;
  double mean = 0.0;
  double variance = 0.0;
  std::vector<double> cells;
};

const std::vector<ReferenceRow>& reference_rows(Table table,
                                                double power_gamma = 1.0);

struct CellCheck {
  std::size_t n = 0;
  std::string cell;
  double ours = 0.0;
  double ref = 0.0;
  double se = 0.0;   // combined MC standard error (ours + reference)
  double z = 0.0;
  bool pass = false;
};

struct CompareReport {
  Table table = Table::InfeasibleRho0;
  double mult = 3.0;
  bool all_pass = true;
  std::vector<CellCheck> cells;
};

// Cell-by-cell comparison with MC-aware tolerances: binomial standard errors
// for coverage/rejection cells, moment-based ones for mean and variance.
CompareReport compare_to_reference(const std::vector<TableRow>& rows,
                                   Table table, double power_gamma = 1.0,
                                   double mult = 3.0);

}  // namespace volvol::mc
