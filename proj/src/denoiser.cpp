#include "sarkit/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sarkit/error.hpp"
#include "sarkit/kernels.hpp"

namespace sarkit {

RasterImage BoxMeanDenoiser::denoise(const RasterImage& img, double) const {
  std::vector<float> out(img.size());
  kernels::parallel::box_mean(img.samples(), img.width(), img.height(), radius_, out);
  return img.with_samples(std::move(out));
}

CnnDenoiser::CnnDenoiser(std::vector<CnnWeights> bank) : bank_(std::move(bank)) {
  if (bank_.empty()) throw Error(ErrorKind::config, "CNN denoiser needs at least one network");
  for (const auto& w : bank_) w.validate();
  std::sort(bank_.begin(), bank_.end(),
            [](const CnnWeights& a, const CnnWeights& b) { return a.trained_sigma < b.trained_sigma; });
  for (std::size_t i = 1; i < bank_.size(); ++i) {
    if (bank_[i].trained_sigma == bank_[i - 1].trained_sigma) {
      throw Error(ErrorKind::config, "CNN bank has two networks for the same sigma");
    }
  }
}

CnnDenoiser::CnnDenoiser(CnnWeights weights) : CnnDenoiser(std::vector<CnnWeights>{std::move(weights)}) {}

std::vector<double> CnnDenoiser::sigma_grid() const {
  std::vector<double> grid;
  for (const auto& w : bank_) grid.push_back(w.trained_sigma);
  return grid;
}

const CnnWeights& CnnDenoiser::weights_for(double sigma) const {
  for (const auto& w : bank_) {
    if (std::abs(static_cast<double>(w.trained_sigma) - sigma) <= kSigmaMatchTolerance) return w;
  }
  std::ostringstream msg;
  msg << "strength mismatch: no network trained for sigma " << sigma;
  throw Error(ErrorKind::config, msg.str());
}

RasterImage CnnDenoiser::denoise(const RasterImage& img, double sigma) const {
  const auto& w = weights_for(sigma);
  const RasterImage residual = cnn_forward_tiled(w, img);
  std::vector<float> out(img.size());
  auto in = img.samples();
  auto res = residual.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] - res[i];
  return img.with_samples(std::move(out));
}

}  // namespace sarkit
