#include "sarkit/tv.hpp"

#include <cmath>
#include <vector>

#include "sarkit/error.hpp"
#include "sarkit/kernels.hpp"

namespace sarkit {

namespace {

double tv_of(std::span<const double> u, int w, int h) {
  double total = 0.0;
  for (int r = 0; r < h; ++r) {
    double row = 0.0;
    for (int c = 0; c < w; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * w + c;
      const double gx = c + 1 < w ? u[i + 1] - u[i] : 0.0;
      const double gy = r + 1 < h ? u[i + w] - u[i] : 0.0;
      row += std::sqrt(gx * gx + gy * gy);
    }
    total += row;
  }
  return total;
}

}  // namespace

double rof_energy(const RasterImage& u, const RasterImage& y, double lambda) {
  std::vector<double> ud(u.samples().begin(), u.samples().end());
  double fit = 0.0;
  for (std::size_t i = 0; i < ud.size(); ++i) {
    const double d = ud[i] - y.samples()[i];
    fit += d * d;
  }
  return 0.5 * fit + lambda * tv_of(ud, u.width(), u.height());
}

TvResult tv_solve(const RasterImage& img, double lambda, const TvOptions& opts) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::input, "tv: lambda must be non-negative");
  if (lambda < 1e-12) return {img, 0, 0.0};

  const int w = img.width();
  const int h = img.height();
  const std::size_t n = img.size();
  std::vector<double> y(img.samples().begin(), img.samples().end());
  std::vector<double> px(n, 0.0), py(n, 0.0), scratch(n), div(n), u(n);

  double y_norm2 = 0.0;
  for (double v : y) y_norm2 += v * v;
  const double tol = opts.gap_tolerance * y_norm2;

  auto primal_from_dual = [&] {
    kernels::parallel::tv_divergence(px, py, w, h, div);
    for (std::size_t i = 0; i < n; ++i) u[i] = y[i] - lambda * div[i];
  };
  auto duality_gap = [&] {
    primal_from_dual();
    // P(u) - D(p) with D(p) = 1/2 |y|^2 - 1/2 |y - lambda div p|^2
    double fit = 0.0, unorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      fit += (u[i] - y[i]) * (u[i] - y[i]);
      unorm += u[i] * u[i];
    }
    const double primal = 0.5 * fit + lambda * tv_of(u, w, h);
    const double dual = 0.5 * y_norm2 - 0.5 * unorm;
    return primal - dual;
  };

  int it = 0;
  double gap = duality_gap();
  while (it < opts.max_iterations && gap > tol) {
    kernels::parallel::tv_dual_step(y, px, py, scratch, w, h, lambda, opts.step);
    ++it;
    if (it % opts.gap_check_every == 0 || it == opts.max_iterations) gap = duality_gap();
  }
  primal_from_dual();

  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(u[i]);
  return {img.with_samples(std::move(out)), it, gap};
}

RasterImage tv_denoise(const RasterImage& img, double sigma, const TvOptions& opts) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::input, "tv_denoise: sigma must be positive");
  return tv_solve(img, opts.lambda_scale * sigma, opts).image;
}

}  // namespace sarkit
