#include "sarkit/homomorphic.hpp"

#include <cmath>
#include <sstream>

#include "sarkit/error.hpp"
#include "sarkit/speckle.hpp"

namespace sarkit {

HomomorphicResult homomorphic_run(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                                  const HomomorphicOptions& opts) {
  const SpeckleModel model(looks);
  const RasterImage log_y = to_log(noisy);
  const auto grid = denoiser.sigma_grid();
  const NormalizationParams params = fit_normalization(log_y, looks, grid);

  const RasterImage den = denoiser.denoise(apply_normalization(log_y, params), params.sigma_train);
  if (!den.same_shape(log_y)) throw Error(ErrorKind::numerical, "homomorphic: denoiser changed the shape");
  const RasterImage log_x = unapply_normalization(den, params);

  const double bias = opts.debias ? model.log_mean : 0.0;
  std::vector<float> out(log_x.size());
  auto in = log_x.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(in[i] - bias);
  return {from_log(log_x.with_samples(std::move(out))), params};
}

RasterImage homomorphic_despeckle(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                                  const HomomorphicOptions& opts) {
  return homomorphic_run(noisy, looks, denoiser, opts).image;
}

RasterImage sarcnn_despeckle(const RasterImage& noisy, double looks, const CnnWeights& weights) {
  const SpeckleModel model(looks);
  if (std::abs(model.log_mean - weights.trained_bias_term) > kBiasTermTolerance) {
    std::ostringstream msg;
    msg << "sarcnn: looks " << looks << " implies bias term " << model.log_mean
        << " but the network was trained with " << weights.trained_bias_term;
    throw Error(ErrorKind::config, msg.str());
  }
  const RasterImage log_y = to_log(noisy);
  const auto& norm = weights.input_norm;
  std::vector<float> net_in(log_y.size());
  auto y = log_y.samples();
  for (std::size_t i = 0; i < net_in.size(); ++i) net_in[i] = (y[i] - norm.offset) * norm.scale;

  const RasterImage residual = cnn_forward_tiled(weights, log_y.with_samples(std::move(net_in)));
  auto res = residual.samples();
  std::vector<float> out(log_y.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(y[i] - res[i] / norm.scale + weights.trained_bias_term);
  }
  return from_log(log_y.with_samples(std::move(out)));
}

}  // namespace sarkit
