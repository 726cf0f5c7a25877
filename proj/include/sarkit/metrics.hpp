#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "sarkit/raster.hpp"

namespace sarkit {

inline constexpr double kPsnrCap = 200.0;
inline constexpr double kEnlCap = 1e6;
inline constexpr long long kMinEnlArea = 1000;

/// 10 log10(max(ref)^2 / MSE) on amplitude images, capped at 200 dB.
double psnr(const RasterImage& ref, const RasterImage& est);

struct SsimOptions {
  int window = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
};

/// Mean SSIM over all fully-contained Gaussian windows. Dynamic range is
/// max(ref) - min(ref).
double ssim(const RasterImage& ref, const RasterImage& est, const SsimOptions& opts = {});

struct EnlEstimate {
  Region region;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double enl = 0.0;       // mean^2 / variance, intensity domain
  bool capped = false;    // zero or tiny variance, enl set to kEnlCap
};

EnlEstimate estimate_enl(const RasterImage& intensity, const Region& region);

/// noisy / denoised, pixelwise.
RasterImage ratio_residual(const RasterImage& noisy, const RasterImage& denoised);

/// Maps a speckled intensity image to an estimate of its reflectivity.
using DespeckleMethod = std::function<RasterImage(const RasterImage&)>;

struct RealizationScores {
  int index = 0;
  std::uint64_t seed = 0;
  double psnr_noisy = 0.0;
  double psnr = 0.0;
  double ssim_noisy = 0.0;
  double ssim = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
};

struct EvaluationReport {
  double looks = 1.0;
  std::uint64_t seed = 0;
  std::vector<RealizationScores> realizations;
  MeanStd psnr_noisy, psnr, ssim_noisy, ssim;
  MeanStd psnr_gain;
};

/// Draws `realizations` independent speckle images of `clean` (intensity),
/// runs `method` on each and scores amplitudes against sqrt(clean).
EvaluationReport evaluate_suite(const RasterImage& clean, const DespeckleMethod& method, double looks,
                                int realizations, std::uint64_t seed);

/// Seed of realization `index` derived from the suite seed.
std::uint64_t realization_seed(std::uint64_t seed, int index);

/// Tab-separated records then a summary table. Columns of the records:
/// realization seed psnr_noisy psnr ssim_noisy ssim
void write_report(std::ostream& os, const EvaluationReport& report);

}  // namespace sarkit
