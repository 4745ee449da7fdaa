#include "volvol/mc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "volvol/errors.hpp"
#include "volvol/estimators.hpp"
#include "volvol/parallel.hpp"
#include "volvol/rng.hpp"
#include "volvol/simulate.hpp"
#include "volvol/stats.hpp"

namespace volvol::mc {

namespace {

bool is_estimation_table(Table t) {
  return t == Table::InfeasibleRho0 || t == Table::InfeasibleRho ||
         t == Table::FeasibleRho0 || t == Table::FeasibleRho;
}

double default_rho(Table table) {
  switch (table) {
    case Table::InfeasibleRho: return 0.2;
    case Table::FeasibleRho: return -0.2;
    default: return 0.0;
  }
}

}  // namespace

ModelSpec default_table_model(Table table, double power_gamma,
                              std::optional<double> rho) {
  if (table == Table::BootstrapPower) {
    if (power_gamma == 0.0) {
      return ModelSpec::vasicek(0.3, 5.0, 0.2, 1.0, rho.value_or(0.0), 0.0,
                                0.2);
    }
    if (power_gamma == 1.0) {
      return ModelSpec::cev(1.0, 0.3, 5.0, 0.2, std::sqrt(5.0),
                            rho.value_or(0.0), 0.0, 0.2);
    }
    throw std::invalid_argument(
        "default_table_model: power alternatives are defined for "
        "gamma in {0, 1}");
  }
  return ModelSpec::heston(0.3, 5.0, 0.2, 0.5,
                           rho.value_or(default_rho(table)), 0.0, 0.2);
}

RepStats replicate_stats(const ModelSpec& model, std::size_t n,
                         std::uint64_t master_seed, std::size_t rep,
                         const EstimatorConfig& est, int substeps) {
  if (n > rng::kMaxStreamN) {
    throw std::invalid_argument("replicate_stats: n exceeds the stream limit");
  }
  if (rep > rng::kMaxStreamReplication) {
    throw std::invalid_argument(
        "replicate_stats: replication index exceeds the stream limit");
  }
  const std::size_t kn = est.kn(n);
  // Weight constant of the limiting variance density: the effective window
  // constant k_n / sqrt(n) realized by the rule, not its nominal target.
  const double alpha2_c =
      static_cast<double>(kn) / std::sqrt(static_cast<double>(n));
  rng::Stream stream(master_seed, rng::pack_stream_id(n, rep));
  SampledPath path =
      simulate(model, n, substeps, stream, alpha2_c, /*with_latent=*/true);

  RepStats out;
  out.iv_tau2 = path.latent->iv_tau2;
  out.iv_tau4 = path.latent->iv_tau4;
  out.iv_alpha2 = path.latent->iv_alpha2;

  const SpotSeries s = spot_series(path.x, est);
  const std::vector<double> tau2 = tau2_series(s);
  out.v_hat = v_hat(s, est.t);
  const GStats g = g_stats(s, est.t);
  out.c_hat = c_hat(g, n, kn);
  out.t_hat = t_hat(g, n, kn);
  out.c_pos = out.c_hat > 0.0;

  const std::size_t m = grid_floor(n, est.t);
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(kn);

  // The squared-increment term alone, without the quarticity correction:
  // consistent for the vol-of-vol integral only after de-biasing.
  NeumaierSum unc;
  const double lead = 1.5 * nd / kd;
  for (std::size_t i = 0; i + 2 * kn <= m; ++i) {
    const double ds2 = s.s2[i + kn] - s.s2[i];
    unc.add(lead * ds2 * ds2);
  }
  out.v_uncorrected = unc.value() / nd;

  const std::vector<double> a2 = alpha2_series(path.x, s, tau2);
  NeumaierSum a2sum;
  for (std::size_t i = 1; i + 2 * kn <= m; ++i) a2sum.add(a2[i]);
  out.alpha2_mean = a2sum.value() / nd;

  const double rate = std::sqrt(nd / kd);
  const double err = out.v_hat - out.iv_tau2;
  out.z_infeasible =
      out.iv_alpha2 > 0.0 ? rate * err / std::sqrt(out.iv_alpha2)
                          : std::numeric_limits<double>::quiet_NaN();
  out.z_feasible = out.c_pos ? rate * err / std::sqrt(out.c_hat)
                             : std::numeric_limits<double>::quiet_NaN();
  return out;
}

std::vector<RepStats> replicate_table(const ModelSpec& model, std::size_t n,
                                      std::size_t reps,
                                      std::uint64_t master_seed,
                                      const EstimatorConfig& est,
                                      int substeps, int threads) {
  std::vector<RepStats> out(reps);
  parallel_for(reps, threads, [&](std::size_t r) {
    out[r] = replicate_stats(model, n, master_seed, r, est, substeps);
  });
  return out;
}

std::vector<GofRun> gof_runs(const ModelSpec& model, std::size_t n,
                             std::size_t runs, std::size_t B,
                             std::uint64_t master_seed, const Tau2Fn& fn,
                             const EstimatorConfig& est, int substeps,
                             int threads) {
  if (n > rng::kMaxStreamN) {
    throw std::invalid_argument("gof_runs: n exceeds the stream limit");
  }
  if (runs > rng::kMaxStreamReplication + 1) {
    throw std::invalid_argument("gof_runs: too many runs for the stream id");
  }
  std::vector<GofRun> out(runs);
  parallel_for(runs, threads, [&](std::size_t r) {
    rng::Stream data_stream(master_seed, rng::pack_stream_id(n, r));
    SampledPath path =
        simulate(model, n, substeps, data_stream, 1.0, /*with_latent=*/false);
    GofRun run;
    try {
      GofReport rep = bootstrap_test(path, fn, B,
                                     rng::Stream(master_seed, rng::pack_stream_id(n, r)),
                                     est, substeps, /*threads=*/1);
      run.p = rep.p_value.value();
      run.y_n = rep.y_n;
      run.discarded_boot = rep.discarded_boot;
      run.discarded_grid = rep.discarded_grid;
    } catch (const BootstrapDegenerate&) {
      run.degenerate = true;
    } catch (const DegenerateStudentization&) {
      run.degenerate = true;
    } catch (const DegenerateDesign&) {
      run.degenerate = true;
    }
    out[r] = run;
  });
  return out;
}

const std::vector<double>& coverage_grid() {
  static const std::vector<double> grid = {0.025, 0.05, 0.1,
                                           0.9,   0.95, 0.975};
  return grid;
}

std::vector<TableRow> run_experiment(const ExperimentSpec& spec) {
  if (spec.n_list.empty()) {
    throw std::invalid_argument("run_experiment: empty sample-size list");
  }
  for (double lvl : spec.levels) {
    if (!(lvl > 0.0 && lvl < 1.0)) {
      throw std::invalid_argument(
          "run_experiment: test levels must lie in (0, 1)");
    }
  }

  std::vector<TableRow> rows;
  rows.reserve(spec.n_list.size());

  if (is_estimation_table(spec.table)) {
    const bool feasible = spec.table == Table::FeasibleRho0 ||
                          spec.table == Table::FeasibleRho;
    const ModelSpec model =
        spec.model ? *spec.model
                   : default_table_model(spec.table, spec.power_gamma,
                                         spec.rho);
    std::vector<double> zq;
    zq.reserve(coverage_grid().size());
    for (double q : coverage_grid()) zq.push_back(normal_quantile(q));

    for (std::size_t n : spec.n_list) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::vector<RepStats> reps = replicate_table(
          model, n, spec.reps, spec.master_seed, spec.est, spec.substeps,
          spec.threads);
      TableRow row;
      row.n = n;
      std::vector<double> zs;
      zs.reserve(reps.size());
      for (const RepStats& r : reps) {
        if (feasible) {
          if (r.c_pos) {
            zs.push_back(r.z_feasible);
          } else {
            ++row.discarded;
          }
        } else {
          zs.push_back(r.z_infeasible);
        }
      }
      row.reps = zs.size();
      const MeanVar mv = mean_variance(zs);
      row.mean = mv.mean;
      row.variance = mv.variance;
      row.cells.resize(zq.size(), 0.0);
      if (!zs.empty()) {
        for (double z : zs) {
          for (std::size_t c = 0; c < zq.size(); ++c) {
            if (z <= zq[c]) row.cells[c] += 1.0;
          }
        }
        for (double& cell : row.cells) {
          cell /= static_cast<double>(zs.size());
        }
      }
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      rows.push_back(std::move(row));
    }
    return rows;
  }

  // Bootstrap studies. The fitted specification is always the square-root
  // law (variance-of-variance proportional to the variance); the data model
  // is the null itself for the size study and a power-law alternative for
  // the power study. A run whose projection scale is non-positive cannot be
  // bootstrapped: the size study drops it, the power study counts it as a
  // rejection at every level (the fitted law is untenable on that sample).
  const bool power = spec.table == Table::BootstrapPower;
  const ModelSpec model =
      spec.model ? *spec.model
                 : default_table_model(spec.table, spec.power_gamma, spec.rho);
  const Tau2Fn fn = Tau2Fn::heston();
  for (std::size_t n : spec.n_list) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<GofRun> runs =
        gof_runs(model, n, spec.runs, spec.B, spec.master_seed, fn, spec.est,
                 spec.substeps, spec.threads);
    TableRow row;
    row.n = n;
    std::vector<double> ps;
    ps.reserve(runs.size());
    for (const GofRun& run : runs) {
      if (run.degenerate) {
        ++row.discarded;
      } else {
        ps.push_back(run.p);
      }
    }
    const MeanVar mv = mean_variance(ps);
    row.mean = mv.mean;
    row.variance = mv.variance;
    row.cells.assign(spec.levels.size(), 0.0);
    std::size_t denom = 0;
    if (power) {
      denom = runs.size();
      for (std::size_t c = 0; c < spec.levels.size(); ++c) {
        std::size_t hits = row.discarded;
        for (double p : ps) {
          if (p <= spec.levels[c]) ++hits;
        }
        row.cells[c] = denom == 0 ? 0.0
                                  : static_cast<double>(hits) /
                                        static_cast<double>(denom);
      }
    } else {
      denom = ps.size();
      for (std::size_t c = 0; c < spec.levels.size(); ++c) {
        std::size_t hits = 0;
        for (double p : ps) {
          if (p <= spec.levels[c]) ++hits;
        }
        row.cells[c] = denom == 0 ? 0.0
                                  : static_cast<double>(hits) /
                                        static_cast<double>(denom);
      }
    }
    row.reps = denom;
    row.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

// Full-scale reference results: 10000 replications for the estimation
// studies, 500 runs (B = 200) for the bootstrap studies.
const std::vector<ReferenceRow>& ref_infeasible_rho0() {
  static const std::vector<ReferenceRow> rows = {
      {2500, 10000, -0.129, 0.901,
       {0.0098, 0.0345, 0.0961, 0.9215, 0.9561, 0.9721}},
      {10000, 10000, -0.040, 1.020,
       {0.0152, 0.0395, 0.0992, 0.8974, 0.9426, 0.9665}},
      {22500, 10000, -0.005, 0.994,
       {0.0180, 0.0405, 0.0906, 0.8993, 0.9424, 0.9678}},
      {40000, 10000, 0.024, 1.029,
       {0.0184, 0.0428, 0.0952, 0.8918, 0.9446, 0.9692}},
      {52900, 10000, 0.061, 1.033,
       {0.0193, 0.0399, 0.0911, 0.8878, 0.9380, 0.9672}},
  };
  return rows;
}

const std::vector<ReferenceRow>& ref_infeasible_rho() {
  static const std::vector<ReferenceRow> rows = {
      {2500, 10000, -0.132, 0.931,
       {0.0115, 0.0358, 0.0984, 0.9195, 0.9527, 0.9724}},
      {10000, 10000, -0.048, 1.008,
       {0.0153, 0.0400, 0.0950, 0.9022, 0.9457, 0.9677}},
      {22500, 10000, -0.126, 0.928,
       {0.0206, 0.0463, 0.1085, 0.9221, 0.9579, 0.9793}},
      {40000, 10000, 0.021, 0.995,
       {0.0193, 0.0423, 0.0945, 0.8959, 0.9457, 0.9717}},
      {52900, 10000, 0.051, 1.027,
       {0.0187, 0.0434, 0.0950, 0.8907, 0.9407, 0.9675}},
  };
  return rows;
}

const std::vector<ReferenceRow>& ref_feasible_rho0() {
  static const std::vector<ReferenceRow> rows = {
      {2500, 10000, -0.287, 0.965,
       {0.0526, 0.0932, 0.1619, 0.9572, 0.9862, 0.9965}},
      {10000, 10000, -0.170, 1.023,
       {0.0449, 0.0799, 0.1425, 0.9325, 0.9757, 0.9928}},
      {22500, 10000, -0.112, 1.002,
       {0.0404, 0.0696, 0.1253, 0.9271, 0.9722, 0.9914}},
      {40000, 10000, -0.073, 1.029,
       {0.0401, 0.0703, 0.1235, 0.9203, 0.9690, 0.9874}},
      {52900, 10000, -0.031, 1.022,
       {0.0368, 0.0653, 0.1157, 0.9154, 0.9633, 0.9872}},
  };
  return rows;
}

const std::vector<ReferenceRow>& ref_feasible_rho() {
  static const std::vector<ReferenceRow> rows = {
      {2500, 10000, -0.295, 0.971,
       {0.0552, 0.0963, 0.1614, 0.9559, 0.9864, 0.9962}},
      {10000, 10000, -0.176, 1.013,
       {0.0464, 0.0808, 0.1427, 0.9369, 0.9770, 0.9940}},
      {22500, 10000, -0.226, 0.987,
       {0.0480, 0.0840, 0.1476, 0.9436, 0.9776, 0.9932}},
      {40000, 10000, -0.075, 1.001,
       {0.0410, 0.0673, 0.1217, 0.9254, 0.9713, 0.9904}},
      {52900, 10000, -0.040, 1.019,
       {0.0396, 0.0677, 0.1171, 0.9180, 0.9663, 0.9879}},
  };
  return rows;
}

const std::vector<ReferenceRow>& ref_bootstrap_level() {
  static const std::vector<ReferenceRow> rows = {
      {2500, 500, 0.0, 0.0, {0.018, 0.040, 0.064, 0.120, 0.216}},
      {10000, 500, 0.0, 0.0, {0.010, 0.018, 0.040, 0.084, 0.194}},
      {22500, 500, 0.0, 0.0, {0.016, 0.024, 0.034, 0.088, 0.194}},
      {40000, 500, 0.0, 0.0, {0.020, 0.038, 0.068, 0.128, 0.220}},
      {52900, 500, 0.0, 0.0, {0.010, 0.020, 0.052, 0.118, 0.200}},
  };
  return rows;
}

const std::vector<ReferenceRow>& ref_bootstrap_power_g0() {
  static const std::vector<ReferenceRow> rows = {
      {2500, 500, 0.0, 0.0, {0.028, 0.052, 0.082, 0.134, 0.262}},
      {10000, 500, 0.0, 0.0, {0.032, 0.048, 0.086, 0.138, 0.260}},
      {22500, 500, 0.0, 0.0, {0.024, 0.042, 0.068, 0.138, 0.302}},
      {40000, 500, 0.0, 0.0, {0.028, 0.046, 0.094, 0.196, 0.426}},
      {52900, 500, 0.0, 0.0, {0.026, 0.040, 0.082, 0.174, 0.422}},
  };
  return rows;
}

const std::vector<ReferenceRow>& ref_bootstrap_power_g1() {
  static const std::vector<ReferenceRow> rows = {
      {2500, 500, 0.0, 0.0, {0.044, 0.090, 0.156, 0.248, 0.372}},
      {10000, 500, 0.0, 0.0, {0.036, 0.084, 0.176, 0.284, 0.396}},
      {22500, 500, 0.0, 0.0, {0.032, 0.086, 0.162, 0.284, 0.432}},
      {40000, 500, 0.0, 0.0, {0.028, 0.064, 0.120, 0.310, 0.482}},
      {52900, 500, 0.0, 0.0, {0.024, 0.058, 0.144, 0.320, 0.488}},
  };
  return rows;
}

std::string cell_label(Table table, std::size_t idx,
                       const std::vector<double>& levels) {
  char buf[32];
  if (is_estimation_table(table)) {
    std::snprintf(buf, sizeof(buf), "cov@%.3g", coverage_grid()[idx]);
  } else {
    std::snprintf(buf, sizeof(buf), "rej@%.3g", levels[idx]);
  }
  return buf;
}

double binomial_se(double p, std::size_t reps) {
  if (reps == 0) return 0.0;
  return std::sqrt(std::max(p * (1.0 - p), 0.0) /
                   static_cast<double>(reps));
}

}  // namespace

const std::vector<ReferenceRow>& reference_rows(Table table,
                                                double power_gamma) {
  switch (table) {
    case Table::InfeasibleRho0: return ref_infeasible_rho0();
    case Table::InfeasibleRho: return ref_infeasible_rho();
    case Table::FeasibleRho0: return ref_feasible_rho0();
    case Table::FeasibleRho: return ref_feasible_rho();
    case Table::BootstrapLevel: return ref_bootstrap_level();
    case Table::BootstrapPower:
      if (power_gamma == 0.0) return ref_bootstrap_power_g0();
      if (power_gamma == 1.0) return ref_bootstrap_power_g1();
      throw std::invalid_argument(
          "reference_rows: power references exist for gamma in {0, 1}");
  }
  throw std::invalid_argument("reference_rows: unknown table");
}

CompareReport compare_to_reference(const std::vector<TableRow>& rows,
                                   Table table, double power_gamma,
                                   double mult) {
  const std::vector<ReferenceRow>& refs = reference_rows(table, power_gamma);
  CompareReport report;
  report.table = table;
  report.mult = mult;

  const std::vector<double> default_levels = {0.01, 0.025, 0.05, 0.1, 0.2};

  for (const TableRow& row : rows) {
    const ReferenceRow* ref = nullptr;
    for (const ReferenceRow& cand : refs) {
      if (cand.n == row.n) {
        ref = &cand;
        break;
      }
    }
    if (ref == nullptr) {
      throw std::invalid_argument(
          "compare_to_reference: no reference row for n=" +
          std::to_string(row.n));
    }
    if (row.cells.size() != ref->cells.size()) {
      throw std::invalid_argument(
          "compare_to_reference: cell layout does not match the reference");
    }

    auto push = [&](const std::string& label, double ours, double target,
                    double se) {
      CellCheck chk;
      chk.n = row.n;
      chk.cell = label;
      chk.ours = ours;
      chk.ref = target;
      chk.se = se;
      chk.z = se > 0.0 ? (ours - target) / se
                       : (ours == target ? 0.0
                                         : std::numeric_limits<
                                               double>::infinity());
      chk.pass = std::abs(chk.z) <= mult;
      if (!chk.pass) report.all_pass = false;
      report.cells.push_back(std::move(chk));
    };

    if (is_estimation_table(table)) {
      const double ro = static_cast<double>(std::max<std::size_t>(row.reps, 2));
      const double rr = static_cast<double>(std::max<std::size_t>(ref->reps, 2));
      // Mean cell: combined standard error of two independent MC means.
      push("mean", row.mean, ref->mean,
           std::sqrt(row.variance / ro + ref->variance / rr));
      // Variance cell: normal-theory standard error of a sample variance,
      // var(s^2) ~ 2 sigma^4 / (R - 1), combined across both samples.
      push("variance", row.variance, ref->variance,
           std::sqrt(2.0 * row.variance * row.variance / (ro - 1.0) +
                     2.0 * ref->variance * ref->variance / (rr - 1.0)));
    }
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      const double se =
          std::sqrt(std::pow(binomial_se(row.cells[c], row.reps), 2) +
                    std::pow(binomial_se(ref->cells[c], ref->reps), 2));
      push(cell_label(table, c, default_levels), row.cells[c], ref->cells[c],
           se);
    }
  }
  return report;
}

}  // namespace volvol::mc
