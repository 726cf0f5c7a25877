#include <algorithm>
#include <cmath>

#include "sarkit/kernels.hpp"
#include "sarkit/mulog.hpp"

namespace sarkit::kernels::serial {

void conv3x3(const Conv3x3Args& a) {
  const int w = a.width;
  const int h = a.height;
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  for (int oc = 0; oc < a.out_channels; ++oc) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        double acc = a.bias[oc];
        for (int ic = 0; ic < a.in_channels; ++ic) {
          const float* k = a.weights.data() + (static_cast<std::size_t>(oc) * a.in_channels + ic) * 9;
          for (int ky = 0; ky < 3; ++ky) {
            const int rr = r + ky - 1;
            if (rr < 0 || rr >= h) continue;
            for (int kx = 0; kx < 3; ++kx) {
              const int cc = c + kx - 1;
              if (cc < 0 || cc >= w) continue;
              acc += static_cast<double>(k[ky * 3 + kx]) * a.input[ic * plane + static_cast<std::size_t>(rr) * w + cc];
            }
          }
        }
        if (a.relu && acc < 0.0) acc = 0.0;
        a.output[oc * plane + static_cast<std::size_t>(r) * w + c] = static_cast<float>(acc);
      }
    }
  }
}

void tv_divergence(std::span<const double> px, std::span<const double> py, int w, int h,
                   std::span<double> div) {
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      double d = 0.0;
      if (c < w - 1) d += px[i];
      if (c > 0) d -= px[i - 1];
      if (r < h - 1) d += py[i];
      if (r > 0) d -= py[i - w];
      div[i] = d;
    }
  }
}

void tv_dual_step(std::span<const double> y, std::span<double> px, std::span<double> py,
                  std::span<double> scratch, int w, int h, double lambda, double tau) {
  tv_divergence(px, py, w, h, scratch);
  const std::size_t n = static_cast<std::size_t>(w) * h;
  for (std::size_t i = 0; i < n; ++i) scratch[i] -= y[i] / lambda;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      const double gx = c < w - 1 ? scratch[i + 1] - scratch[i] : 0.0;
      const double gy = r < h - 1 ? scratch[i + w] - scratch[i] : 0.0;
      const double denom = 1.0 + tau * std::sqrt(gx * gx + gy * gy);
      px[i] = (px[i] + tau * gx) / denom;
      py[i] = (py[i] + tau * gy) / denom;
    }
  }
}

int prox_data_sweep(std::span<const double> v, std::span<const double> y, double looks, double rho,
                    std::span<double> out) {
  int worst = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto sol = prox_data_solve(v[i], y[i], looks, rho);
    out[i] = sol.x;
    worst = std::max(worst, sol.iterations);
  }
  return worst;
}

void box_mean(std::span<const float> in, int w, int h, int radius, std::span<float> out) {
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double acc = 0.0;
      int count = 0;
      for (int rr = std::max(0, r - radius); rr <= std::min(h - 1, r + radius); ++rr) {
        for (int cc = std::max(0, c - radius); cc <= std::min(w - 1, c + radius); ++cc) {
          acc += in[static_cast<std::size_t>(rr) * w + cc];
          ++count;
        }
      }
      out[static_cast<std::size_t>(r) * w + c] = static_cast<float>(acc / count);
    }
  }
}

}  // namespace sarkit::kernels::serial
