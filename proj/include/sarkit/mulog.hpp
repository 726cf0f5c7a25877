#pragma once

#include <cmath>
#include <vector>

#include "sarkit/denoiser.hpp"
#include "sarkit/normalize.hpp"
#include "sarkit/raster.hpp"

namespace sarkit {

/// Fisher-Tippett negative log-likelihood of log-intensity y given
/// log-reflectivity x, constants dropped: L(x - y) + L exp(y - x).
inline double ft_nll(double x, double y, double looks) {
  return looks * (x - y) + looks * std::exp(y - x);
}
inline double ft_nll_grad(double x, double y, double looks) {
  return looks - looks * std::exp(y - x);
}

inline constexpr int kProxMaxIterations = 100;

struct ProxSolution {
  double x = 0.0;
  int iterations = 0;
  double residual = 0.0;  // g(x) at return
};

/// argmin_x rho/2 (x - v)^2 + ft_nll(x; y, L) by bracketed Newton on
/// g(x) = rho (x - v) + L - L exp(y - x), which is strictly increasing.
ProxSolution prox_data_solve(double v, double y, double looks, double rho);
inline double prox_data(double v, double y, double looks, double rho) {
  return prox_data_solve(v, y, looks, rho).x;
}

struct MulogOptions {
  int iterations = 6;
  double beta0 = 1.0;
  double beta_growth = 1.3;
};

/// ADMM variables in log-intensity units.
struct AdmmState {
  int width = 0;
  int height = 0;
  std::vector<double> x;  // data-consistent estimate
  std::vector<double> z;  // denoiser output
  std::vector<double> u;  // scaled dual
  double beta = 0.0;
  int iteration = 0;
};

struct MulogResult {
  RasterImage image;
  AdmmState state;
  NormalizationParams normalization;
  std::vector<double> primal_residuals;  // |x - z| after each iteration
  std::vector<double> denoiser_sigmas;   // strength used at each iteration
  bool residual_warning = false;         // |x - z| grew over the last 3 iterations
  int max_prox_iterations = 0;
};

/// Plug-and-play ADMM coupling the Fisher-Tippett data term with `denoiser`.
///
/// The penalty at iteration k is rho_k = beta_k * L with beta_{k+1} =
/// beta_growth * beta_k, i.e. beta is measured relative to the curvature of
/// the data term at its minimum. The denoiser runs on the quantile-normalized
/// image at sigma_k = 1 / sqrt(rho_k) / (q_high - q_low), mapped onto its grid.
/// Returns exp(x).
MulogResult mulog_run(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                      const MulogOptions& opts = {});

RasterImage mulog_despeckle(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                            const MulogOptions& opts = {});

}  // namespace sarkit
