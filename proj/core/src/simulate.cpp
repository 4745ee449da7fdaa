#include "volvol/simulate.hpp"

#include <cmath>
#include <stdexcept>

namespace volvol {

double ModelSpec::elasticity() const {
  switch (kind) {
    case ModelKind::Heston: return 0.5;
    case ModelKind::Vasicek: return 0.0;
    case ModelKind::Cev: return gamma;
  }
  return 0.5;
}

double ModelSpec::tau2_of(double v) const {
  const double vp = v > 0.0 ? v : 0.0;
  switch (kind) {
    case ModelKind::Heston: return xi * xi * vp;
    case ModelKind::Vasicek: return xi * xi;
    case ModelKind::Cev: {
      if (gamma == 0.0) return xi * xi;
      if (gamma == 0.5) return xi * xi * vp;
      if (gamma == 1.0) return xi * xi * vp * vp;
      return xi * xi * std::pow(vp, 2.0 * gamma);
    }
  }
  return 0.0;
}

void ModelSpec::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw std::invalid_argument("model: kappa must be finite and >= 0");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("model: alpha must be finite and >= 0");
  }
  if (!(xi >= 0.0) || !std::isfinite(xi)) {
    throw std::invalid_argument("model: xi must be finite and >= 0");
  }
  if (!(v0 >= 0.0) || !std::isfinite(v0)) {
    throw std::invalid_argument("model: v0 must be finite and >= 0");
  }
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw std::invalid_argument("model: rho must lie in [-1,1]");
  }
  if (!std::isfinite(beta) || !std::isfinite(x0)) {
    throw std::invalid_argument("model: beta and x0 must be finite");
  }
  if (kind == ModelKind::Cev && !(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("model: elasticity gamma must lie in [0,1]");
  }
}

ModelSpec ModelSpec::heston(double beta, double kappa, double alpha, double xi,
                            double rho, double x0, double v0) {
  ModelSpec s;
  s.kind = ModelKind::Heston;
  s.beta = beta; s.kappa = kappa; s.alpha = alpha; s.xi = xi;
  s.gamma = 0.5; s.rho = rho; s.x0 = x0; s.v0 = v0;
  s.validate();
  return s;
}

ModelSpec ModelSpec::cev(double gamma, double beta, double kappa, double alpha,
                         double xi, double rho, double x0, double v0) {
  ModelSpec s;
  s.kind = ModelKind::Cev;
  s.beta = beta; s.kappa = kappa; s.alpha = alpha; s.xi = xi;
  s.gamma = gamma; s.rho = rho; s.x0 = x0; s.v0 = v0;
  s.validate();
  return s;
}

ModelSpec ModelSpec::vasicek(double beta, double kappa, double alpha, double xi,
                             double rho, double x0, double v0) {
  ModelSpec s;
  s.kind = ModelKind::Vasicek;
  s.beta = beta; s.kappa = kappa; s.alpha = alpha; s.xi = xi;
  s.gamma = 0.0; s.rho = rho; s.x0 = x0; s.v0 = v0;
  s.validate();
  return s;
}

bool check_feller(const ModelSpec& spec, std::string* warning) {
  const bool ok = 2.0 * spec.kappa * spec.alpha >= spec.xi * spec.xi;
  if (!ok && warning != nullptr) {
    *warning = "Feller condition violated (2*kappa*alpha < xi^2): the variance "
               "process can reach zero; truncation will clip negative proposals";
  }
  return ok;
}

void correlated_increments(double rho, double dt, rng::Stream& stream,
                           std::span<double> dw, std::span<double> dv) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw std::invalid_argument("correlated_increments: rho must lie in [-1,1]");
  }
  if (!(dt > 0.0)) {
    throw std::invalid_argument("correlated_increments: dt must be positive");
  }
  if (dw.size() != dv.size()) {
    throw std::invalid_argument("correlated_increments: output spans differ in size");
  }
  const double sqrt_dt = std::sqrt(dt);
  const double ortho = std::sqrt(1.0 - rho * rho) * sqrt_dt;
  for (std::size_t i = 0; i < dw.size(); ++i) {
    const auto [z0, z1] = stream.normal_pair();
    dw[i] = sqrt_dt * z0;
    dv[i] = rho * dw[i] + ortho * z1;
  }
}

std::pair<std::vector<double>, std::vector<double>> correlated_increments(
    double rho, std::size_t m, rng::Stream stream, double dt) {
  if (m == 0) throw std::invalid_argument("correlated_increments: m must be positive");
  if (dt == 0.0) dt = 1.0 / static_cast<double>(m);
  std::vector<double> dw(m), dv(m);
  correlated_increments(rho, dt, stream, dw, dv);
  return {std::move(dw), std::move(dv)};
}

SampledPath simulate(const ModelSpec& spec, std::size_t n, int substeps,
                     rng::Stream seed, double alpha2_c, bool with_latent) {
  spec.validate();
  if (n < 4) throw std::invalid_argument("simulate: need n >= 4 observation intervals");
  if (substeps < 1) throw std::invalid_argument("simulate: substeps must be >= 1");
  if (!(alpha2_c > 0.0)) throw std::invalid_argument("simulate: alpha2_c must be positive");

  const std::size_t m = n * static_cast<std::size_t>(substeps);
  const double dt = 1.0 / static_cast<double>(m);

  std::vector<double> dw(m), dv(m);
  correlated_increments(spec.rho, dt, seed, dw, dv);

  SampledPath path;
  path.n = n;
  path.x.resize(n + 1);

  PathLatent latent;
  if (with_latent) {
    latent.sigma2.resize(m + 1);
    latent.tau2.resize(m + 1);
    latent.alpha2_c = alpha2_c;
    latent.substeps = substeps;
    latent.seed_key = seed.key();
    latent.seed_id = seed.id();
  }

  // Elasticity dispatch hoisted out of the step loop.
  enum class DiffusionPow { Zero, Half, One, General };
  const double gamma = spec.elasticity();
  DiffusionPow mode = DiffusionPow::General;
  if (gamma == 0.0) mode = DiffusionPow::Zero;
  else if (gamma == 0.5) mode = DiffusionPow::Half;
  else if (gamma == 1.0) mode = DiffusionPow::One;

  const double c2 = alpha2_c * alpha2_c;
  const double c4 = c2 * c2;
  const double w8 = 48.0 / c4;
  const double w42 = 12.0 / c2;
  const double w44 = 151.0 / 70.0;
  const bool log_drift = spec.drift == PriceDrift::LogHeston;

  double x = spec.x0;
  double v = spec.v0;
  std::size_t truncated = 0;
  NeumaierSum iv_t2, iv_t4, iv_a2;

  path.x[0] = x;
  for (std::size_t k = 0; k < m; ++k) {
    const double vp = v > 0.0 ? v : 0.0;
    if (v < 0.0) ++truncated;

    double diffusion;
    switch (mode) {
      case DiffusionPow::Zero: diffusion = 1.0; break;
      case DiffusionPow::Half: diffusion = std::sqrt(vp); break;
      case DiffusionPow::One: diffusion = vp; break;
      default: diffusion = std::pow(vp, gamma); break;
    }
    const double t2 = spec.xi * spec.xi * diffusion * diffusion;

    if (with_latent) {
      latent.sigma2[k] = vp;
      latent.tau2[k] = t2;
      const double s4 = vp * vp;
      const double s8 = s4 * s4;
      iv_t2.add(t2 * dt);
      iv_t4.add(t2 * t2 * dt);
      iv_a2.add((w8 * s8 + w42 * s4 * t2 + w44 * t2 * t2) * dt);
    }

    const double mu = log_drift ? spec.beta - 0.5 * vp : 0.0;
    x += mu * dt + std::sqrt(vp) * dw[k];
    v += spec.kappa * (spec.alpha - vp) * dt + spec.xi * diffusion * dv[k];

    if ((k + 1) % static_cast<std::size_t>(substeps) == 0) {
      path.x[(k + 1) / static_cast<std::size_t>(substeps)] = x;
    }
  }

  if (with_latent) {
    latent.sigma2[m] = v > 0.0 ? v : 0.0;
    latent.tau2[m] = spec.tau2_of(v);
    latent.iv_tau2 = iv_t2.value();
    latent.iv_tau4 = iv_t4.value();
    latent.iv_alpha2 = iv_a2.value();
    latent.truncation_rate = static_cast<double>(truncated) / static_cast<double>(m);
    path.latent = std::move(latent);
  }
  return path;
}

}  // namespace volvol
