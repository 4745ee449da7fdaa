#include "volvol/spot.hpp"

#include <cmath>
#include <stdexcept>

#include "volvol/stats.hpp"

namespace volvol {

std::size_t EstimatorConfig::kn(std::size_t n) const {
  if (n < 4) throw std::invalid_argument("estimator: need n >= 4");
  std::size_t k;
  if (kn_rule) {
    k = kn_rule(n);
  } else {
    if (!(c > 0.0)) throw std::invalid_argument("estimator: window constant c must be positive");
    k = static_cast<std::size_t>(std::floor(c * std::sqrt(static_cast<double>(n))));
  }
  if (k < 2) {
    throw std::invalid_argument("estimator: window k_n < 2; increase n or c");
  }
  if (4 * k > n) {
    throw std::invalid_argument("estimator: window too wide (need 4*k_n <= n)");
  }
  return k;
}

namespace {

void validate_path(const std::vector<double>& x) {
  if (x.size() < 5) throw std::invalid_argument("estimator: need at least 5 observations");
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("estimator: non-finite observation");
  }
}

}  // namespace

std::vector<double> rolling_power_sums(const std::vector<double>& x,
                                       std::size_t k, int power) {
  const std::size_t n = x.size() - 1;
  if (k == 0 || k > n) throw std::invalid_argument("rolling_power_sums: bad window");
  std::vector<double> p(n + 1);  // p[l] = |increment l|^power, l = 1..n
  for (std::size_t l = 1; l <= n; ++l) {
    const double d = x[l] - x[l - 1];
    double v;
    switch (power) {
      case 2: v = d * d; break;
      case 4: v = (d * d) * (d * d); break;
      case 8: { const double d2 = d * d; const double d4 = d2 * d2; v = d4 * d4; break; }
      default: v = std::pow(std::abs(d), power); break;
    }
    p[l] = v;
  }
  std::vector<double> out(n - k + 1);
  NeumaierSum roll;
  for (std::size_t j = 1; j <= k; ++j) roll.add(p[j]);
  out[0] = roll.value();
  for (std::size_t i = 1; i + k <= n; ++i) {
    roll.add(p[i + k]);
    roll.subtract(p[i]);
    const double v = roll.value();
    out[i] = v > 0.0 ? v : 0.0;  // clip rolling-subtraction dust
  }
  return out;
}

SpotSeries spot_series(const std::vector<double>& x, const EstimatorConfig& cfg) {
  validate_path(x);
  const std::size_t n = x.size() - 1;
  const std::size_t k = cfg.kn(n);

  SpotSeries out;
  out.n = n;
  out.kn = k;
  out.s2 = rolling_power_sums(x, k, 2);
  out.s4 = rolling_power_sums(x, k, 4);
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double scale2 = nn / kk;
  const double scale4 = nn * nn / (3.0 * kk);
  for (double& v : out.s2) v *= scale2;
  for (double& v : out.s4) v *= scale4;
  return out;
}

SpotSeries spot_series(const SampledPath& path, const EstimatorConfig& cfg) {
  return spot_series(path.x, cfg);
}

std::vector<double> spot_vol2(const std::vector<double>& x, const EstimatorConfig& cfg) {
  return spot_series(x, cfg).s2;
}

std::vector<double> spot_quarticity(const std::vector<double>& x, const EstimatorConfig& cfg) {
  return spot_series(x, cfg).s4;
}

}  // namespace volvol
