#include <algorithm>
#include <cmath>
#include <vector>

#include "sarkit/kernels.hpp"
#include "sarkit/mulog.hpp"

namespace sarkit::kernels::parallel {

void conv3x3(const Conv3x3Args& a) {
  const int w = a.width;
  const int h = a.height;
  const std::size_t plane = static_cast<std::size_t>(w) * h;
  const float* in = a.input.data();
  const float* wts = a.weights.data();
  float* outp = a.output.data();

#pragma omp parallel for collapse(2) schedule(static)
  for (int oc = 0; oc < a.out_channels; ++oc) {
    for (int r = 0; r < h; ++r) {
      float* dst = outp + oc * plane + static_cast<std::size_t>(r) * w;
      std::fill(dst, dst + w, a.bias[oc]);
      for (int ic = 0; ic < a.in_channels; ++ic) {
        const float* k = wts + (static_cast<std::size_t>(oc) * a.in_channels + ic) * 9;
        for (int ky = 0; ky < 3; ++ky) {
          const int rr = r + ky - 1;
          if (rr < 0 || rr >= h) continue;
          const float* src = in + ic * plane + static_cast<std::size_t>(rr) * w;
          for (int kx = 0; kx < 3; ++kx) {
            const float kv = k[ky * 3 + kx];
            if (kv == 0.0f) continue;
            // dst[c] += kv * src[c + kx - 1] over the columns where the tap is inside
            const int dx = kx - 1;
            const int c0 = std::max(0, -dx);
            const int c1 = std::min(w, w - dx);
            for (int c = c0; c < c1; ++c) dst[c] += kv * src[c + dx];
          }
        }
      }
      if (a.relu) {
        for (int c = 0; c < w; ++c) dst[c] = std::max(dst[c], 0.0f);
      }
    }
  }
}

void tv_divergence(std::span<const double> px, std::span<const double> py, int w, int h,
                   std::span<double> div) {
#pragma omp parallel for schedule(static)
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
#pragma omp parallel
  {
#pragma omp for schedule(static)
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * w + c;
        double d = 0.0;
        if (c < w - 1) d += px[i];
        if (c > 0) d -= px[i - 1];
        if (r < h - 1) d += py[i];
        if (r > 0) d -= py[i - w];
        scratch[i] = d - y[i] / lambda;
      }
    }
#pragma omp for schedule(static)
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
}

int prox_data_sweep(std::span<const double> v, std::span<const double> y, double looks, double rho,
                    std::span<double> out) {
  int worst = 0;
  const long long n = static_cast<long long>(v.size());
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (long long i = 0; i < n; ++i) {
    const auto sol = prox_data_solve(v[i], y[i], looks, rho);
    out[i] = sol.x;
    worst = std::max(worst, sol.iterations);
  }
  return worst;
}

void box_mean(std::span<const float> in, int w, int h, int radius, std::span<float> out) {
  // Summed-area table with a zero guard row/column.
  const std::size_t sw = static_cast<std::size_t>(w) + 1;
  std::vector<double> sat(sw * (h + 1), 0.0);
  for (int r = 0; r < h; ++r) {
    double row = 0.0;
    for (int c = 0; c < w; ++c) {
      row += in[static_cast<std::size_t>(r) * w + c];
      sat[(r + 1) * sw + c + 1] = sat[r * sw + c + 1] + row;
    }
  }
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    const int r0 = std::max(0, r - radius);
    const int r1 = std::min(h, r + radius + 1);
    for (int c = 0; c < w; ++c) {
      const int c0 = std::max(0, c - radius);
      const int c1 = std::min(w, c + radius + 1);
      const double s = sat[r1 * sw + c1] - sat[r0 * sw + c1] - sat[r1 * sw + c0] + sat[r0 * sw + c0];
      out[static_cast<std::size_t>(r) * w + c] = static_cast<float>(s / ((r1 - r0) * (c1 - c0)));
    }
  }
}

}  // namespace sarkit::kernels::parallel
