#include "sarkit/normalize.hpp"

#include <cmath>

#include "sarkit/error.hpp"
#include "sarkit/order_stats.hpp"
#include "sarkit/speckle.hpp"

namespace sarkit {

std::vector<double> awgn_sigma_grid() {
  std::vector<double> grid;
  for (int level = 10; level <= 75; level += 5) grid.push_back(level / 255.0);
  return grid;
}

SigmaSelection select_sigma(std::span<const double> grid, double sigma) {
  if (grid.empty()) return {.value = sigma, .found = true};
  SigmaSelection sel;
  for (double g : grid) {
    if (g <= sigma && (!sel.found || g > sel.value)) {
      sel.value = g;
      sel.found = true;
    }
  }
  if (sel.found) {
    double hi = grid.front();
    for (double g : grid) hi = std::max(hi, g);
    sel.clamped_high = sigma > hi;
  } else {
    double lo = grid.front();
    for (double g : grid) lo = std::min(lo, g);
    sel.value = lo;
    sel.clamped_low = true;
  }
  return sel;
}

NormalizationParams retarget(const NormalizationParams& params, double sigma,
                             std::span<const double> grid) {
  NormalizationParams out = params;
  const auto sel = select_sigma(grid, sigma);
  out.sigma = sigma;
  out.sigma_train = sel.value;
  out.gain = sel.value / sigma;
  out.clamped = sel.clamped_low;
  out.clamped_high = sel.clamped_high;
  return out;
}

NormalizationParams fit_normalization(const RasterImage& log_img, double looks,
                                      std::span<const double> grid) {
  if (log_img.domain() != Domain::log_intensity) {
    throw Error(ErrorKind::input, "fit_normalization: expected a log-intensity image");
  }
  if (log_img.size() < 1000) {
    throw Error(ErrorKind::input, "fit_normalization: need at least 1000 samples");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::input, "sigma grid must be ascending");
  }
  const double probs[] = {kQuantileLow, kQuantileHigh};
  const auto q = nearest_rank_quantiles(log_img.samples(), probs);
  if (!(q[1] > q[0])) {
    throw Error(ErrorKind::input, "fit_normalization: degenerate image (q_high == q_low)");
  }
  NormalizationParams params;
  params.q_low = q[0];
  params.q_high = q[1];
  const double sigma = std::sqrt(polygamma1(looks)) / (q[1] - q[0]);
  return retarget(params, sigma, grid);
}

RasterImage apply_normalization(const RasterImage& log_img, const NormalizationParams& params) {
  std::vector<float> out(log_img.size());
  auto in = log_img.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(params.forward(in[i]));
  return log_img.with_samples(std::move(out));
}

RasterImage unapply_normalization(const RasterImage& normalized, const NormalizationParams& params) {
  std::vector<float> out(normalized.size());
  auto in = normalized.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = static_cast<float>(params.inverse(in[i]));
  return normalized.with_samples(std::move(out));
}

}  // namespace sarkit
