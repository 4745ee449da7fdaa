#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace volvol {

// Stochastic volatility families sharing the mean-reverting variance SDE
//   d(sigma^2)_t = kappa (alpha - sigma^2_t) dt + xi (sigma^2_t)^gamma dV_t
// with gamma = 1/2 (square-root), gamma free in [0,1] (constant-elasticity),
// or gamma = 0 (additive, variance clipped at zero).
enum class ModelKind { Heston, Cev, Vasicek };

// Price drift convention: the log-price form mu_t = beta - sigma^2_t / 2, or
// no drift at all (the bootstrap data-generating process is a pure
// martingale X_t = int sigma dW).
enum class PriceDrift { LogHeston, None };

struct ModelSpec {
  ModelKind kind = ModelKind::Heston;
  double beta = 0.3;
  double kappa = 5.0;
  double alpha = 0.2;
  double xi = 0.5;
  double gamma = 0.5;  // variance-diffusion elasticity; fixed per kind below
  double rho = 0.0;
  double x0 = 0.0;
  double v0 = 0.2;
  PriceDrift drift = PriceDrift::LogHeston;

  // Elasticity actually used: Heston pins 1/2, Vasicek pins 0.
  double elasticity() const;
  // Instantaneous variance-of-variance tau^2 = xi^2 * (v+)^(2*gamma).
  double tau2_of(double v) const;
  // Throws std::invalid_argument on out-of-domain parameters.
  void validate() const;

  static ModelSpec heston(double beta, double kappa, double alpha, double xi,
                          double rho, double x0, double v0);
  static ModelSpec cev(double gamma, double beta, double kappa, double alpha,
                       double xi, double rho, double x0, double v0);
  static ModelSpec vasicek(double beta, double kappa, double alpha, double xi,
                           double rho, double x0, double v0);
};

// Square-root-model non-degeneracy condition 2*kappa*alpha >= xi^2. Returns
// false (and fills `warning` when given) if violated; simulation proceeds
// either way, the truncation scheme absorbs negative excursions.
bool check_feller(const ModelSpec& spec, std::string* warning = nullptr);

// Latent ground truth carried by simulated paths, on the fine grid used by
// the Euler scheme (n * substeps intervals).
struct PathLatent {
  std::vector<double> sigma2;  // spot variance, fine grid, size m+1
  std::vector<double> tau2;    // spot variance-of-variance, fine grid
  double iv_tau2 = 0.0;        // int_0^1 tau^2 ds (left Riemann, fine grid)
  double iv_tau4 = 0.0;        // int_0^1 tau^4 ds
  double iv_alpha2 = 0.0;      // int_0^1 (48/c^4 s^8 + 12/c^2 s^4 t^2 + 151/70 t^4) ds
  double alpha2_c = 1.0;       // window constant used in iv_alpha2
  int substeps = 1;
  std::uint64_t seed_key = 0;
  std::uint64_t seed_id = 0;
  double truncation_rate = 0.0;  // fraction of fine steps with negative proposal
};

struct SampledPath {
  std::size_t n = 0;       // number of observation intervals on [0,1]
  std::vector<double> x;   // observations at i/n, size n+1
  std::optional<PathLatent> latent;
};

}  // namespace volvol
