#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "volvol/spot.hpp"

namespace volvol {

// Local variance-of-variance with bias correction,
//   tau2[i] = (3n/2k) (s2[i+k]-s2[i])^2 - 6 (n/k^2) s4[i],  i = 0..n-2k.
// May be negative pointwise; only integrated quantities are meaningful.
std::vector<double> tau2_series(const SpotSeries& s);
double tau2_local(const SpotSeries& s, std::size_t i);

// Integrated estimator path: entry m holds
//   V-hat_{m/n} = (1/n) sum_{i=0..m-2k} tau2[i]
// for m >= 2k, zero before that. Length n+1.
std::vector<double> v_hat_path(const std::vector<double>& tau2,
                               std::size_t n, std::size_t kn);

// Scalar V-hat_t; requires floor(n t) >= 2k+1.
double v_hat(const SpotSeries& s, double t);

struct GStats {
  double g1 = 0.0;  // (1/n) sum_{i=1..m-k}  (s4[i])^2
  double g2 = 0.0;  // (1/n) sum_{i=1..m-2k} tau2[i] s4[i]
  double g3 = 0.0;  // (1/n) sum_{i=1..m-2k} (n^2/k^2)(s2[i+k]-s2[i])^4
};

GStats g_stats(const SpotSeries& s, double t);

// Estimated limiting variance of the standardized error,
//   C-hat = 453/280 g3 - (n/k^2) 486/35 g2 - (n^2/k^4) 1038/35 g1.
double c_hat(const GStats& g, std::size_t n, std::size_t kn);

// Integrated fourth power of the variance-of-variance,
//   T-hat = 3/4 g3 - 12 (n/k^2) g2 - 36 (n^2/k^4) g1.
double t_hat(const GStats& g, std::size_t n, std::size_t kn);

// Feasible standardized statistic sqrt(n/k) (V-hat - truth)/sqrt(C-hat).
// Throws NonPositiveVariance when c_hat <= 0.
double feasible_stat(double v_hat, double c_hat, double truth,
                     std::size_t n, std::size_t kn);

struct VolvolReport {
  std::size_t n = 0;
  std::size_t kn = 0;
  double t = 1.0;
  double c = 1.0;
  double v_hat = 0.0;
  double g1 = 0.0, g2 = 0.0, g3 = 0.0;
  double c_hat = 0.0;
  double t_hat = 0.0;
  std::optional<double> truth;   // externally supplied int tau^2
  std::optional<double> z;       // feasible statistic, when truth given and c_hat > 0
  std::optional<double> ci_lo, ci_hi;  // asymptotic interval, when c_hat > 0
  double ci_level = 0.95;
};

// Full pipeline on one path at horizon cfg.t.
VolvolReport analyze(const SampledPath& path, const EstimatorConfig& cfg,
                     std::optional<double> truth = std::nullopt,
                     double ci_level = 0.95);

}  // namespace volvol
