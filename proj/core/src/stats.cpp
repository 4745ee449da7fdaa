#include "volvol/stats.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <vector>

#include "volvol/parallel.hpp"

namespace volvol {

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("VOLVOL_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed > 0) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie strictly in (0,1)");
  }
  return normal_quantile_unchecked(p);
}

MeanVar mean_variance(std::span<const double> xs) {
  MeanVar out;
  out.count = xs.size();
  if (xs.empty()) return out;
  NeumaierSum s;
  for (double v : xs) s.add(v);
  out.mean = s.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return out;
  NeumaierSum sq;
  for (double v : xs) {
    const double d = v - out.mean;
    sq.add(d * d);
  }
  out.variance = sq.value() / static_cast<double>(xs.size() - 1);
  return out;
}

double ks_distance_to_normal(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("ks_distance_to_normal: empty sample");
  std::vector<double> s(xs.begin(), xs.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double cdf = normal_cdf(s[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(std::abs(cdf - lo), std::abs(hi - cdf)));
  }
  return d;
}

double regression_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("regression_slope: need two equal-length samples");
  }
  const double n = static_cast<double>(x.size());
  NeumaierSum sx, sy, sxx, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx.add(x[i]);
    sy.add(y[i]);
    sxx.add(x[i] * x[i]);
    sxy.add(x[i] * y[i]);
  }
  const double mx = sx.value() / n;
  const double my = sy.value() / n;
  const double cov = sxy.value() / n - mx * my;
  const double var = sxx.value() / n - mx * mx;
  if (var <= 0.0) throw std::invalid_argument("regression_slope: degenerate abscissae");
  return cov / var;
}

}  // namespace volvol
