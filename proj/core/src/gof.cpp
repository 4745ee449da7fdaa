#include "volvol/gof.hpp"

#include <cmath>
#include <stdexcept>

#include "volvol/errors.hpp"
#include "volvol/parallel.hpp"
#include "volvol/simulate.hpp"
#include "volvol/stats.hpp"

namespace volvol {

Tau2Fn Tau2Fn::heston() {
  return {"heston", [](double, double, double sigma2) { return sigma2; }};
}

Tau2Fn Tau2Fn::cev(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("Tau2Fn::cev: gamma must lie in [0,1]");
  }
  return {"cev(" + std::to_string(gamma) + ")",
          [gamma](double, double, double sigma2) {
            const double v = sigma2 > 0.0 ? sigma2 : 0.0;
            if (gamma == 0.0) return 1.0;
            if (gamma == 0.5) return v;
            if (gamma == 1.0) return v * v;
            return std::pow(v, 2.0 * gamma);
          }};
}

Tau2Fn Tau2Fn::constant() {
  return {"constant", [](double, double, double) { return 1.0; }};
}

double realized_variance(const std::vector<double>& x) {
  NeumaierSum acc;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double d = x[i] - x[i - 1];
    acc.add(d * d);
  }
  return acc.value();
}

DesignStats design_stats(const SampledPath& path, const SpotSeries& s,
                         const std::vector<double>& tau2, const Tau2Fn& fn) {
  if (!fn.f) throw std::invalid_argument("design_stats: empty hypothesis function");
  const std::size_t n = s.n;
  const std::size_t k = s.kn;
  const double inv_n = 1.0 / static_cast<double>(n);

  DesignStats out;
  out.fvals.resize(n - k + 1);
  for (std::size_t i = 0; i + k <= n; ++i) {
    const double v = fn.f(static_cast<double>(i) * inv_n, path.x[i], s.s2[i]);
    if (!std::isfinite(v)) {
      throw std::invalid_argument("design_stats: hypothesis function returned a non-finite value");
    }
    out.fvals[i] = v;
  }

  out.b_path.assign(n + 1, 0.0);
  NeumaierSum b_acc;
  for (std::size_t m = k; m <= n; ++m) {
    b_acc.add(out.fvals[m - k]);
    out.b_path[m] = b_acc.value() * inv_n;
  }

  NeumaierSum d_acc;
  for (std::size_t i = 0; i + k <= n; ++i) d_acc.add(out.fvals[i] * out.fvals[i]);
  out.d_hat = d_acc.value() * inv_n;
  if (!(out.d_hat > 0.0)) {
    throw DegenerateDesign("design_stats: hypothesized shape is zero on the sample (d_hat = 0)");
  }

  NeumaierSum c_acc;
  for (std::size_t i = 0; i + 2 * k <= n; ++i) c_acc.add(tau2[i] * out.fvals[i]);
  out.c_hat_f = c_acc.value() * inv_n;
  out.theta_hat = out.c_hat_f / out.d_hat;
  return out;
}

std::vector<double> n_hat_path(const std::vector<double>& v_path,
                               const std::vector<double>& b_path,
                               double theta_hat) {
  if (v_path.size() != b_path.size()) {
    throw std::invalid_argument("n_hat_path: path length mismatch");
  }
  std::vector<double> out(v_path.size());
  for (std::size_t m = 0; m < v_path.size(); ++m) {
    out[m] = v_path[m] - theta_hat * b_path[m];
  }
  return out;
}

std::vector<double> alpha2_series(const std::vector<double>& x,
                                  const SpotSeries& s,
                                  const std::vector<double>& tau2) {
  const std::size_t n = s.n;
  const std::size_t k = s.kn;
  if (x.size() != n + 1) throw std::invalid_argument("alpha2_series: path length mismatch");
  const std::vector<double> s8 = rolling_power_sums(x, k, 8);

  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  const double quart = 453.0 / 280.0 * nn * nn / (kk * kk);
  const double cross = 486.0 / 35.0 * nn / (kk * kk);
  const double n6 = nn * nn * nn * nn * nn * nn;
  const double k5 = kk * kk * kk * kk * kk;
  const double eighth = 346.0 / 1225.0 * n6 / k5;

  std::vector<double> out(n - 2 * k + 1);
  for (std::size_t i = 0; i + 2 * k <= n; ++i) {
    const double d = s.s2[i + k] - s.s2[i];
    const double d2 = d * d;
    out[i] = quart * d2 * d2 - cross * tau2[i] * s.s4[i] - eighth * s8[i];
  }
  return out;
}

std::vector<double> s2_hat_path(const std::vector<double>& alpha2,
                                const DesignStats& design,
                                std::size_t n, std::size_t kn) {
  if (alpha2.size() != n - 2 * kn + 1) {
    throw std::invalid_argument("s2_hat_path: alpha2 series has unexpected length");
  }
  std::vector<double> out(n + 1, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  const double inv_d = 1.0 / design.d_hat;
  NeumaierSum a0, a1, a2;
  // Sums start at i = 1; entry m uses i = 1..m-2k.
  for (std::size_t m = 2 * kn + 1; m <= n; ++m) {
    const std::size_t i = m - 2 * kn;
    const double f = design.fvals[i];
    a0.add(alpha2[i]);
    a1.add(alpha2[i] * f);
    a2.add(alpha2[i] * f * f);
    const double b_over_d = design.b_path[m] * inv_d;
    out[m] = inv_n * (a0.value() - 2.0 * b_over_d * a1.value() +
                      b_over_d * b_over_d * a2.value());
  }
  return out;
}

KsResult ks_statistic(const std::vector<double>& n_path,
                      const std::vector<double>& s2_path,
                      std::size_t n, std::size_t kn,
                      const EstimatorConfig& cfg) {
  if (n_path.size() != n + 1 || s2_path.size() != n + 1) {
    throw std::invalid_argument("ks_statistic: path length mismatch");
  }
  std::size_t m_lo = 2 * kn + 1;
  if (cfg.sup_from_t_min) {
    const double target = cfg.t_min * static_cast<double>(n);
    const std::size_t m_tmin = static_cast<std::size_t>(std::ceil(target - 1e-9));
    if (m_tmin > m_lo) m_lo = m_tmin;
  }
  const std::size_t m_hi = n - 2 * kn;
  const double rate = std::sqrt(static_cast<double>(n) / static_cast<double>(kn));

  KsResult r;
  if (m_lo > m_hi) {
    throw DegenerateStudentization("ks_statistic: no admissible grid point below n-2k");
  }
  for (std::size_t m = m_lo; m <= m_hi; ++m) {
    const double s2 = s2_path[m];
    if (!(s2 > cfg.eps_var)) {
      ++r.points_skipped;
      continue;
    }
    const double val = std::abs(rate * n_path[m] / std::sqrt(s2));
    if (r.points_used == 0 || val > r.y_n) {
      r.y_n = val;
      r.argmax_m = m;
    }
    ++r.points_used;
  }
  if (r.points_used == 0) {
    throw DegenerateStudentization(
        "ks_statistic: studentizer at or below the variance floor on the whole grid");
  }
  return r;
}

GofReport gof_statistic(const SampledPath& path, const Tau2Fn& fn,
                        const EstimatorConfig& cfg) {
  const SpotSeries s = spot_series(path, cfg);
  const std::vector<double> tau2 = tau2_series(s);
  const std::vector<double> v_path = v_hat_path(tau2, s.n, s.kn);
  const DesignStats design = design_stats(path, s, tau2, fn);

  GofReport rep;
  rep.f_label = fn.label;
  rep.n = s.n;
  rep.kn = s.kn;
  rep.theta_hat = design.theta_hat;
  rep.d_hat = design.d_hat;
  rep.c_hat_f = design.c_hat_f;
  rep.n_path = n_hat_path(v_path, design.b_path, design.theta_hat);
  const std::vector<double> alpha2 = alpha2_series(path.x, s, tau2);
  rep.s2_path = s2_hat_path(alpha2, design, s.n, s.kn);
  const KsResult ks = ks_statistic(rep.n_path, rep.s2_path, s.n, s.kn, cfg);
  rep.y_n = ks.y_n;
  rep.discarded_grid = ks.points_skipped;
  rep.alpha_rv = realized_variance(path.x);
  return rep;
}

GofReport bootstrap_test(const SampledPath& path, const Tau2Fn& fn,
                         std::size_t B, rng::Stream seed,
                         const EstimatorConfig& cfg, int substeps,
                         int threads) {
  if (B == 0) throw std::invalid_argument("bootstrap_test: B must be positive");
  if (B > rng::kMaxStreamBootSlot - 1) {
    throw std::invalid_argument("bootstrap_test: B exceeds the stream-id budget");
  }
  if ((seed.id() & ((1ull << 18) - 1)) != 0) {
    throw std::invalid_argument(
        "bootstrap_test: seed stream id must have its low 18 bits clear");
  }

  GofReport rep = gof_statistic(path, fn, cfg);
  rep.B = B;
  if (!(rep.theta_hat > 0.0)) {
    throw BootstrapDegenerate("bootstrap_test: projection scale theta_hat <= 0 (" +
                              std::to_string(rep.theta_hat) + ")");
  }
  rep.xi_star = std::sqrt(rep.theta_hat);
  rep.kappa_star = 5.0 * rep.theta_hat / rep.alpha_rv;

  ModelSpec star;
  star.kind = ModelKind::Heston;
  star.beta = 0.0;
  star.drift = PriceDrift::None;
  star.kappa = rep.kappa_star;
  star.alpha = rep.alpha_rv;
  star.xi = rep.xi_star;
  star.gamma = 0.5;
  star.rho = 0.0;
  star.x0 = 0.0;
  star.v0 = rep.alpha_rv;

  struct Draw {
    double y = 0.0;
    bool kept = false;
  };
  std::vector<Draw> draws(B);
  parallel_for(B, threads, [&](std::size_t b) {
    rng::Stream draw_seed(seed.key(), seed.id() + ((b + 1) << 2));
    const SampledPath boot_path =
        simulate(star, path.n, substeps, draw_seed, cfg.c, /*with_latent=*/false);
    try {
      const GofReport boot_rep = gof_statistic(boot_path, fn, cfg);
      draws[b] = {boot_rep.y_n, true};
    } catch (const DegenerateStudentization&) {
      draws[b] = {0.0, false};
    }
  });

  rep.boot.reserve(B);
  std::size_t exceed = 0;
  for (const Draw& d : draws) {
    if (!d.kept) {
      ++rep.discarded_boot;
      continue;
    }
    rep.boot.push_back(d.y);
    if (d.y >= rep.y_n) ++exceed;
  }
  if (rep.boot.empty()) {
    throw BootstrapDegenerate(
        "bootstrap_test: every bootstrap replication was degenerate");
  }
  rep.p_value = static_cast<double>(1 + exceed) /
                static_cast<double>(rep.boot.size() + 1);
  return rep;
}

}  // namespace volvol
