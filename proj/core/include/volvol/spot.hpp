#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "volvol/model.hpp"

namespace volvol {

struct EstimatorConfig {
  // Window constant: k_n = floor(c * sqrt(n)) unless kn_rule overrides.
  double c = 1.0;
  // Horizon for scalar estimates, in rescaled time (0,1].
  double t = 1.0;
  // Studentizer floor: grid points with s2-hat <= eps_var are excluded from
  // the sup statistic (and counted).
  double eps_var = 1e-12;
  // Default sup convention skips the early, noisy part of the grid.
  double t_min = 0.1;
  bool sup_from_t_min = true;  // false: sup over the whole defined grid
  std::function<std::size_t(std::size_t)> kn_rule;

  // Resolved window size; validates 2 <= k_n and 4*k_n <= n.
  std::size_t kn(std::size_t n) const;
};

// floor(n*t) with a guard against 0.1*2500-style representation error.
inline std::size_t grid_floor(std::size_t n, double t) {
  return static_cast<std::size_t>(static_cast<double>(n) * t + 1e-9);
}

struct SpotSeries {
  std::size_t n = 0;
  std::size_t kn = 0;
  // s2[i] = (n/k_n) sum_{j=1..k_n} (dX_{i+j})^2          for i = 0..n-k_n
  // s4[i] = (n^2/(3k_n)) sum_{j=1..k_n} |dX_{i+j}|^4     same range
  std::vector<double> s2, s4;
};

// Both spot series in one pass over the increments (rolling compensated
// windows: one add, one subtract per step).
SpotSeries spot_series(const std::vector<double>& x, const EstimatorConfig& cfg);
SpotSeries spot_series(const SampledPath& path, const EstimatorConfig& cfg);

// Single-series entry points.
std::vector<double> spot_vol2(const std::vector<double>& x, const EstimatorConfig& cfg);
std::vector<double> spot_quarticity(const std::vector<double>& x, const EstimatorConfig& cfg);

// Rolling window sums of a power of increments: out[i] = sum_{j=1..k} p[i+j],
// where p[l] = |x[l]-x[l-1]|^power, for i = 0..n-k. Shared kernel for the
// spot series and the eighth-power sums of the variance-density estimator.
std::vector<double> rolling_power_sums(const std::vector<double>& x,
                                       std::size_t k, int power);

}  // namespace volvol
