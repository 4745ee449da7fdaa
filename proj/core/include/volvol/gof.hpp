#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "volvol/estimators.hpp"
#include "volvol/rng.hpp"

namespace volvol {

// Hypothesized variance-of-variance shape f(s, x, sigma2) tested up to an
// unknown positive scale theta. Must be stateless/thread-safe: bootstrap
// replications evaluate it concurrently.
struct Tau2Fn {
  std::string label;
  std::function<double(double s, double x, double sigma2)> f;

  // tau^2 proportional to sigma^2 (square-root variance dynamics).
  static Tau2Fn heston();
  // tau^2 proportional to (sigma^2)^(2*gamma).
  static Tau2Fn cev(double gamma);
  // tau^2 constant in time and state.
  static Tau2Fn constant();
};

// Sample moments of the hypothesized shape along the path:
//   b_path[m] = (1/n) sum_{i=0..m-k} f_i   (0 for m < k),
//   d_hat     = (1/n) sum_{i=0..n-k} f_i^2,
//   c_hat_f   = (1/n) sum_{i=0..n-2k} tau2[i] f_i,
// where f_i = f(i/n, x_i, s2[i]). theta_hat = c_hat_f / d_hat is the
// projection scale. Throws DegenerateDesign when d_hat <= 0.
struct DesignStats {
  std::vector<double> fvals;   // f_i for i = 0..n-k
  std::vector<double> b_path;  // length n+1
  double d_hat = 0.0;
  double c_hat_f = 0.0;
  double theta_hat = 0.0;
};

DesignStats design_stats(const SampledPath& path, const SpotSeries& s,
                         const std::vector<double>& tau2, const Tau2Fn& fn);

// Projected-residual path N-hat_{m/n} = V-hat - theta-hat * B-hat, length n+1
// (zero below m = 2k).
std::vector<double> n_hat_path(const std::vector<double>& v_path,
                               const std::vector<double>& b_path,
                               double theta_hat);

// Local estimator of the limiting variance density,
//   alpha2[i] = 453/280 (n^2/k^2)(s2[i+k]-s2[i])^4
//             - 486/35  (n/k^2)   tau2[i] s4[i]
//             - 346/1225 (n^6/k^5) sum_{j=1..k} |dX_{i+j}|^8,   i = 0..n-2k.
std::vector<double> alpha2_series(const std::vector<double>& x,
                                  const SpotSeries& s,
                                  const std::vector<double>& tau2);

// Studentizer path: entry m (for m >= 2k+1) holds
//   s2hat_m = (1/n) sum_{i=1..m-2k} alpha2[i] (1 - f_i theta-frame terms):
//   A0 - 2 (B_m/D) A1 + (B_m/D)^2 A2 with A_j = (1/n) sum alpha2[i] f_i^j.
// Raw values may be negative; consumers floor/skip via the variance floor.
std::vector<double> s2_hat_path(const std::vector<double>& alpha2,
                                const DesignStats& design,
                                std::size_t n, std::size_t kn);

struct KsResult {
  double y_n = 0.0;          // sup_m |sqrt(n/k) N-hat / s-hat|
  std::size_t points_used = 0;
  std::size_t points_skipped = 0;  // studentizer at or below the floor
  std::size_t argmax_m = 0;
};

// Sup over the admissible grid (default from max(2k+1, ceil(t_min n)) to
// n-2k; cfg.sup_from_t_min = false starts at 2k+1). Throws
// DegenerateStudentization when no point is usable.
KsResult ks_statistic(const std::vector<double>& n_path,
                      const std::vector<double>& s2_path,
                      std::size_t n, std::size_t kn,
                      const EstimatorConfig& cfg);

struct GofReport {
  std::string f_label;
  std::size_t n = 0;
  std::size_t kn = 0;
  double theta_hat = 0.0;
  double d_hat = 0.0;
  double c_hat_f = 0.0;
  double y_n = 0.0;
  std::vector<double> n_path;    // length n+1
  std::vector<double> s2_path;   // length n+1, raw (possibly negative)
  std::size_t discarded_grid = 0;
  // Bootstrap block (empty/unset unless bootstrap_test produced the report).
  std::size_t B = 0;
  std::vector<double> boot;      // kept bootstrap sup statistics
  std::optional<double> p_value;
  std::size_t discarded_boot = 0;
  double alpha_rv = 0.0;      // realized variance of the data
  double kappa_star = 0.0;    // bootstrap reversion speed 5 theta / alpha_rv
  double xi_star = 0.0;       // bootstrap vol-of-vol sqrt(theta)
};

// Statistic-only pipeline (no bootstrap): spot series, local tau^2, design
// moments, residual path, studentizer, sup.
GofReport gof_statistic(const SampledPath& path, const Tau2Fn& fn,
                        const EstimatorConfig& cfg);

// Full bootstrap test. Simulates B square-root-variance paths with
// alpha* = realized variance, xi* = sqrt(theta-hat), kappa* = 5 theta-hat /
// alpha*, v0* = alpha*, x0* = 0, rho* = 0, no drift; recomputes the sup
// statistic on each and reports p = (1 + #{Y* >= y_n}) / (#kept + 1).
// `seed.id()` must have its low 18 bits clear (bootstrap slots live there).
// Throws BootstrapDegenerate when theta-hat <= 0.
GofReport bootstrap_test(const SampledPath& path, const Tau2Fn& fn,
                         std::size_t B, rng::Stream seed,
                         const EstimatorConfig& cfg, int substeps = 10,
                         int threads = 1);

// Realized variance sum (dX)^2 over the whole sample.
double realized_variance(const std::vector<double>& x);

}  // namespace volvol
