#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "volvol/model.hpp"
#include "volvol/rng.hpp"

namespace volvol {

// Fill dw/dv with correlated Gaussian increment pairs: dW ~ N(0, dt) and
// dV = rho dW + sqrt(1-rho^2) dW_perp. Consumes exactly two normals per step.
void correlated_increments(double rho, double dt, rng::Stream& stream,
                           std::span<double> dw, std::span<double> dv);

// Allocating convenience overload: m increments with dt = 1/m by default.
std::pair<std::vector<double>, std::vector<double>> correlated_increments(
    double rho, std::size_t m, rng::Stream stream, double dt = 0.0);

// Euler scheme with full truncation (negative variance proposals enter drift
// and diffusion as max(v,0)) on a grid of n*substeps steps over [0,1],
// subsampled to n+1 observations. `alpha2_c` is the window constant the
// latent limiting-variance integral is evaluated with. Latent ground truth
// (fine-grid sigma^2/tau^2 and their integrals) is recorded unless
// with_latent is false (bootstrap draws skip it).
SampledPath simulate(const ModelSpec& spec, std::size_t n, int substeps,
                     rng::Stream seed, double alpha2_c = 1.0,
                     bool with_latent = true);

}  // namespace volvol
