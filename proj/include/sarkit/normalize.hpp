#pragma once

#include <span>
#include <vector>

#include "sarkit/raster.hpp"

namespace sarkit {

inline constexpr double kQuantileLow = 0.003;
inline constexpr double kQuantileHigh = 0.997;

/// The 14 noise levels 10/255, 15/255, ..., 75/255 of the pretrained AWGN bank.
std::vector<double> awgn_sigma_grid();

struct SigmaSelection {
  double value = 0.0;
  bool clamped_low = false;   // requested sigma below the grid; smallest level used
  bool clamped_high = false;  // requested sigma above the grid; largest level used
  bool found = false;         // a grid level <= requested sigma exists
};

/// Largest grid value <= sigma. An empty grid means a continuous denoiser and
/// returns sigma itself. Below the grid, returns the minimum with clamped_low;
/// above it, the maximum with clamped_high.
SigmaSelection select_sigma(std::span<const double> grid, double sigma);

/// Affine map of log-intensities [q_low, q_high] -> [0, gain].
struct NormalizationParams {
  double q_low = 0.0;
  double q_high = 1.0;
  double sigma = 0.0;        // log-speckle std after mapping to [0, 1]
  double sigma_train = 0.0;  // denoiser strength actually used
  double gain = 1.0;         // sigma_train / sigma
  bool clamped = false;      // sigma was below the grid
  bool clamped_high = false; // sigma was above the grid

  double range() const { return q_high - q_low; }
  double forward(double x) const { return gain * (x - q_low) / range(); }
  double inverse(double n) const { return n * range() / gain + q_low; }
};

/// Fits the 0.3% / 99.7% quantile bounds of a log image and selects the
/// denoiser strength for speckle with `looks` looks.
NormalizationParams fit_normalization(const RasterImage& log_img, double looks,
                                      std::span<const double> grid);

/// Same quantile bounds, different noise level (and hence gain).
NormalizationParams retarget(const NormalizationParams& params, double sigma,
                             std::span<const double> grid);

RasterImage apply_normalization(const RasterImage& log_img, const NormalizationParams& params);
RasterImage unapply_normalization(const RasterImage& normalized, const NormalizationParams& params);

}  // namespace sarkit
