#pragma once

#include "sarkit/raster.hpp"

namespace sarkit {

struct TvOptions {
  double lambda_scale = 1.5;  // lambda = lambda_scale * sigma
  double step = 0.248;
  int max_iterations = 300;
  double gap_tolerance = 1e-4;  // relative to |y|^2
  int gap_check_every = 10;
};

struct TvResult {
  RasterImage image;
  int iterations = 0;
  double gap = 0.0;
};

/// Isotropic ROF: argmin_u 1/2 |u - y|^2 + lambda TV(u), solved on the dual
/// with Chambolle's projection. Stops when the duality gap falls below
/// gap_tolerance * |y|^2 or after max_iterations.
TvResult tv_solve(const RasterImage& img, double lambda, const TvOptions& opts = {});

/// tv_solve with lambda = opts.lambda_scale * sigma.
RasterImage tv_denoise(const RasterImage& img, double sigma, const TvOptions& opts = {});

/// Primal ROF energy, used for the duality gap.
double rof_energy(const RasterImage& u, const RasterImage& y, double lambda);

}  // namespace sarkit
