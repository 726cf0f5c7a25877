#pragma once

#include <memory>
#include <string>
#include <vector>

#include "sarkit/cnn.hpp"
#include "sarkit/raster.hpp"
#include "sarkit/tv.hpp"

namespace sarkit {

/// A Gaussian denoiser acting as the proximal operator of an image prior.
/// Inputs are normalized log images; `sigma` is the noise std in those units.
class GaussianDenoiser {
 public:
  virtual ~GaussianDenoiser() = default;

  virtual RasterImage denoise(const RasterImage& img, double sigma) const = 0;
  /// Strengths the denoiser can run at, ascending. Empty means any sigma.
  virtual std::vector<double> sigma_grid() const { return {}; }
  virtual std::string name() const = 0;
};

class IdentityDenoiser final : public GaussianDenoiser {
 public:
  RasterImage denoise(const RasterImage& img, double) const override { return img; }
  std::string name() const override { return "identity"; }
};

/// Local mean over a (2r+1)^2 window; ignores sigma.
class BoxMeanDenoiser final : public GaussianDenoiser {
 public:
  explicit BoxMeanDenoiser(int radius) : radius_(radius) {}
  RasterImage denoise(const RasterImage& img, double sigma) const override;
  std::string name() const override { return "box" + std::to_string(2 * radius_ + 1); }

 private:
  int radius_;
};

class TvDenoiser final : public GaussianDenoiser {
 public:
  explicit TvDenoiser(TvOptions opts = {}) : opts_(opts) {}
  RasterImage denoise(const RasterImage& img, double sigma) const override {
    return tv_denoise(img, sigma, opts_);
  }
  std::string name() const override { return "tv"; }
  const TvOptions& options() const { return opts_; }

 private:
  TvOptions opts_;
};

/// A bank of residual CNNs, one per trained noise level. denoise(img, s)
/// runs the network whose trained_sigma equals s and returns img - residual.
class CnnDenoiser final : public GaussianDenoiser {
 public:
  explicit CnnDenoiser(std::vector<CnnWeights> bank);
  explicit CnnDenoiser(CnnWeights weights);

  RasterImage denoise(const RasterImage& img, double sigma) const override;
  std::vector<double> sigma_grid() const override;
  std::string name() const override { return "cnn"; }

  const CnnWeights& weights_for(double sigma) const;

 private:
  std::vector<CnnWeights> bank_;
};

inline constexpr double kSigmaMatchTolerance = 1e-9;

}  // namespace sarkit
