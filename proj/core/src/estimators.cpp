#include "volvol/estimators.hpp"

#include <cmath>
#include <ratio>
#include <stdexcept>
#include <string>

#include "volvol/errors.hpp"
#include "volvol/stats.hpp"

namespace volvol {

// The three quartic combinations must reproduce the limiting variance
// density 48/c^4 s^8 + 12/c^2 s^4 t^2 + 151/70 t^4 and annihilate the s^8
// and s^4 t^2 bands for the fourth-moment combination. Exact rational checks:
static_assert(std::ratio_equal_v<std::ratio_multiply<std::ratio<453, 280>, std::ratio<4, 3>>,
                                 std::ratio<151, 70>>);
static_assert(std::ratio_equal_v<
              std::ratio_subtract<std::ratio_multiply<std::ratio<453, 280>, std::ratio<16, 1>>,
                                  std::ratio<486, 35>>,
              std::ratio<12, 1>>);
static_assert(std::ratio_equal_v<
              std::ratio_subtract<std::ratio_multiply<std::ratio<453, 280>, std::ratio<48, 1>>,
                                  std::ratio<1038, 35>>,
              std::ratio<48, 1>>);
static_assert(std::ratio_equal_v<
              std::ratio_subtract<std::ratio_multiply<std::ratio<3, 4>, std::ratio<16, 1>>,
                                  std::ratio<12, 1>>,
              std::ratio<0, 1>>);
static_assert(std::ratio_equal_v<
              std::ratio_subtract<std::ratio_multiply<std::ratio<3, 4>, std::ratio<48, 1>>,
                                  std::ratio<36, 1>>,
              std::ratio<0, 1>>);
static_assert(std::ratio_equal_v<std::ratio_multiply<std::ratio<346, 1225>, std::ratio<105, 1>>,
                                 std::ratio<1038, 35>>);

std::vector<double> tau2_series(const SpotSeries& s) {
  const std::size_t n = s.n;
  const std::size_t k = s.kn;
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double lead = 1.5 * nn / kk;
  const double corr = 6.0 * nn / (kk * kk);
  std::vector<double> out(n - 2 * k + 1);
  for (std::size_t i = 0; i + 2 * k <= n; ++i) {
    const double d = s.s2[i + k] - s.s2[i];
    out[i] = lead * d * d - corr * s.s4[i];
  }
  return out;
}

double tau2_local(const SpotSeries& s, std::size_t i) {
  if (i + 2 * s.kn > s.n) throw std::invalid_argument("tau2_local: index beyond n-2k");
  const double nn = static_cast<double>(s.n);
  const double kk = static_cast<double>(s.kn);
  const double d = s.s2[i + s.kn] - s.s2[i];
  return 1.5 * nn / kk * d * d - 6.0 * nn / (kk * kk) * s.s4[i];
}

std::vector<double> v_hat_path(const std::vector<double>& tau2,
                               std::size_t n, std::size_t kn) {
  if (tau2.size() != n - 2 * kn + 1) {
    throw std::invalid_argument("v_hat_path: tau2 series has unexpected length");
  }
  std::vector<double> out(n + 1, 0.0);
  NeumaierSum acc;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t m = 2 * kn; m <= n; ++m) {
    acc.add(tau2[m - 2 * kn]);
    out[m] = acc.value() * inv_n;
  }
  return out;
}

double v_hat(const SpotSeries& s, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("v_hat: t must lie in (0,1]");
  const std::size_t m = grid_floor(s.n, t);
  if (m < 2 * s.kn + 1) {
    throw std::invalid_argument(
        "v_hat: horizon too small for the window; smallest usable t is " +
        std::to_string(static_cast<double>(2 * s.kn + 1) / static_cast<double>(s.n)));
  }
  NeumaierSum acc;
  const std::size_t k = s.kn;
  for (std::size_t i = 0; i + 2 * k <= m; ++i) {
    const double d = s.s2[i + k] - s.s2[i];
    const double nn = static_cast<double>(s.n);
    const double kk = static_cast<double>(k);
    acc.add(1.5 * nn / kk * d * d - 6.0 * nn / (kk * kk) * s.s4[i]);
  }
  return acc.value() / static_cast<double>(s.n);
}

GStats g_stats(const SpotSeries& s, double t) {
  if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("g_stats: t must lie in (0,1]");
  const std::size_t m = grid_floor(s.n, t);
  const std::size_t k = s.kn;
  if (m < 2 * k + 1) throw std::invalid_argument("g_stats: horizon too small for the window");
  const double nn = static_cast<double>(s.n);
  const double kk = static_cast<double>(k);
  const double lead = 1.5 * nn / kk;
  const double corr = 6.0 * nn / (kk * kk);
  const double quart_scale = nn * nn / (kk * kk);

  NeumaierSum a1, a2, a3;
  for (std::size_t i = 1; i + k <= m; ++i) a1.add(s.s4[i] * s.s4[i]);
  for (std::size_t i = 1; i + 2 * k <= m; ++i) {
    const double d = s.s2[i + k] - s.s2[i];
    const double d2 = d * d;
    const double tau2 = lead * d2 - corr * s.s4[i];
    a2.add(tau2 * s.s4[i]);
    a3.add(quart_scale * d2 * d2);
  }
  GStats g;
  g.g1 = a1.value() / nn;
  g.g2 = a2.value() / nn;
  g.g3 = a3.value() / nn;
  return g;
}

double c_hat(const GStats& g, std::size_t n, std::size_t kn) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(kn);
  const double r2 = nn / (kk * kk);
  return 453.0 / 280.0 * g.g3 - 486.0 / 35.0 * r2 * g.g2 - 1038.0 / 35.0 * r2 * r2 * g.g1;
}

double t_hat(const GStats& g, std::size_t n, std::size_t kn) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(kn);
  const double r2 = nn / (kk * kk);
  return 0.75 * g.g3 - 12.0 * r2 * g.g2 - 36.0 * r2 * r2 * g.g1;
}

double feasible_stat(double v_hat, double c_hat, double truth,
                     std::size_t n, std::size_t kn) {
  if (!(c_hat > 0.0)) {
    throw NonPositiveVariance("feasible_stat: estimated limiting variance is not positive (" +
                              std::to_string(c_hat) + ")");
  }
  const double rate = std::sqrt(static_cast<double>(n) / static_cast<double>(kn));
  return rate * (v_hat - truth) / std::sqrt(c_hat);
}

VolvolReport analyze(const SampledPath& path, const EstimatorConfig& cfg,
                     std::optional<double> truth, double ci_level) {
  if (!(ci_level > 0.0 && ci_level < 1.0)) {
    throw std::invalid_argument("analyze: ci_level must lie in (0,1)");
  }
  const SpotSeries s = spot_series(path, cfg);
  VolvolReport r;
  r.n = s.n;
  r.kn = s.kn;
  r.t = cfg.t;
  r.c = cfg.c;
  r.v_hat = v_hat(s, cfg.t);
  const GStats g = g_stats(s, cfg.t);
  r.g1 = g.g1;
  r.g2 = g.g2;
  r.g3 = g.g3;
  r.c_hat = c_hat(g, s.n, s.kn);
  r.t_hat = t_hat(g, s.n, s.kn);
  r.truth = truth;
  r.ci_level = ci_level;
  if (r.c_hat > 0.0) {
    const double half =
        normal_quantile(0.5 + ci_level / 2.0) *
        std::sqrt(r.c_hat * static_cast<double>(s.kn) / static_cast<double>(s.n));
    r.ci_lo = r.v_hat - half;
    r.ci_hi = r.v_hat + half;
    if (truth) r.z = feasible_stat(r.v_hat, r.c_hat, *truth, s.n, s.kn);
  }
  return r;
}

}  // namespace volvol
