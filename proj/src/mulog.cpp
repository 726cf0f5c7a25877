#include "sarkit/mulog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sarkit/error.hpp"
#include "sarkit/kernels.hpp"

namespace sarkit {

ProxSolution prox_data_solve(double v, double y, double looks, double rho) {
  auto g = [&](double x) { return rho * (x - v) + looks - looks * std::exp(y - x); };
  double lo = std::min(v, y) - 40.0 / looks;
  double hi = std::max(v, y) + 40.0 / looks;

  ProxSolution sol;
  double x = v + looks * (y - v) / (rho + looks);
  double gx = g(x);
  while (sol.iterations < kProxMaxIterations) {
    if (std::abs(gx) <= 1e-10) break;
    if (gx > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    const double slope = rho + looks * std::exp(y - x);
    double next = x - gx / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    ++sol.iterations;
    // Rounding floor: g cannot be resolved more finely than one ulp of x.
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
      x = next;
      gx = g(x);
      break;
    }
    x = next;
    gx = g(x);
  }
  sol.x = x;
  sol.residual = gx;
  return sol;
}

MulogResult mulog_run(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                      const MulogOptions& opts) {
  if (opts.iterations < 1) throw Error(ErrorKind::input, "mulog: iterations must be >= 1");
  if (!(opts.beta0 > 0.0) || !(opts.beta_growth > 0.0)) {
    throw Error(ErrorKind::input, "mulog: beta0 and beta growth must be positive");
  }
  if (!(looks >= 1.0)) throw Error(ErrorKind::domain, "mulog: looks must be >= 1");

  const RasterImage log_y = to_log(noisy);
  const auto grid = denoiser.sigma_grid();
  const NormalizationParams base = fit_normalization(log_y, looks, grid);

  const std::size_t n = log_y.size();
  std::vector<double> y(log_y.samples().begin(), log_y.samples().end());

  MulogResult res{log_y, {}, base, {}, {}, false, 0};
  AdmmState& st = res.state;
  st.width = log_y.width();
  st.height = log_y.height();
  st.x = y;
  st.z = y;
  st.u.assign(n, 0.0);
  st.beta = opts.beta0;

  std::vector<double> v(n);
  std::vector<float> buf(n);
  for (int k = 0; k < opts.iterations; ++k) {
    const double rho = st.beta * looks;

    for (std::size_t i = 0; i < n; ++i) v[i] = st.z[i] - st.u[i];
    res.max_prox_iterations =
        std::max(res.max_prox_iterations, kernels::parallel::prox_data_sweep(v, y, looks, rho, st.x));

    const double sigma_norm = 1.0 / std::sqrt(rho) / base.range();
    const auto sel = select_sigma(grid, sigma_norm);
    if (!sel.found) {
      throw Error(ErrorKind::config, "mulog: iteration " + std::to_string(k + 1) +
                                         ": no denoiser strength <= " + std::to_string(sigma_norm));
    }
    const NormalizationParams p = retarget(base, sigma_norm, grid);
    for (std::size_t i = 0; i < n; ++i) buf[i] = static_cast<float>(p.forward(st.x[i] + st.u[i]));
    const RasterImage den =
        denoiser.denoise(RasterImage(st.width, st.height, Domain::log_intensity, buf), p.sigma_train);
    if (!den.same_shape(log_y)) throw Error(ErrorKind::numerical, "mulog: denoiser changed the shape");
    auto d = den.samples();
    double resid = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      st.z[i] = p.inverse(d[i]);
      st.u[i] += st.x[i] - st.z[i];
      resid += (st.x[i] - st.z[i]) * (st.x[i] - st.z[i]);
    }
    res.primal_residuals.push_back(std::sqrt(resid));
    res.denoiser_sigmas.push_back(p.sigma_train);
    st.iteration = k + 1;
    st.beta *= opts.beta_growth;
  }

  const auto& r = res.primal_residuals;
  if (r.size() >= 3) {
    const std::size_t m = r.size();
    res.residual_warning = r[m - 1] > r[m - 2] || r[m - 2] > r[m - 3];
  }

  std::vector<float> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<float>(st.x[i]);
  res.image = from_log(RasterImage(st.width, st.height, Domain::log_intensity, std::move(out)));
  return res;
}

RasterImage mulog_despeckle(const RasterImage& noisy, double looks, const GaussianDenoiser& denoiser,
                            const MulogOptions& opts) {
  return mulog_run(noisy, looks, denoiser, opts).image;
}

}  // namespace sarkit
