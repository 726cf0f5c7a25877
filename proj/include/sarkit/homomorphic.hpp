#pragma once

#include "sarkit/cnn.hpp"
#include "sarkit/denoiser.hpp"
#include "sarkit/normalize.hpp"
#include "sarkit/raster.hpp"

namespace sarkit {

struct HomomorphicOptions {
  bool debias = true;
};

struct HomomorphicResult {
  RasterImage image;
  NormalizationParams normalization;
};

/// log -> quantile normalize -> denoise at the selected strength ->
/// un-normalize -> subtract psi(L) - log L -> exp.
HomomorphicResult homomorphic_run(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                                  const HomomorphicOptions& opts = {});

RasterImage homomorphic_despeckle(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                                  const HomomorphicOptions& opts = {});

/// Tolerance when matching psi(L) - log L against the value stored (as f32)
/// in a weight file.
inline constexpr double kBiasTermTolerance = 1e-4;

/// Direct inference with a network trained on log speckle under the bias-term
/// loss: x = y - residual(y) + trained_bias_term, using the network's own
/// input normalization. Throws ErrorKind::config if `looks` disagrees with the
/// bias term recorded in the weights.
RasterImage sarcnn_despeckle(const RasterImage& noisy, double looks, const CnnWeights& weights);

}  // namespace sarkit
