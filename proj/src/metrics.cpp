#include "sarkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>

#include "sarkit/error.hpp"
#include "sarkit/speckle.hpp"

namespace sarkit {

namespace {

void require_pair(const RasterImage& ref, const RasterImage& est, const char* op) {
  if (!ref.same_shape(est)) throw Error(ErrorKind::input, std::string(op) + ": shape mismatch");
  if (ref.domain() != Domain::amplitude || est.domain() != Domain::amplitude) {
    throw Error(ErrorKind::input, std::string(op) + ": both images must be amplitude");
  }
}

// Pairwise summation keeps the result independent of how callers batch work.
double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

MeanStd mean_std(const std::vector<double>& v) {
  MeanStd out;
  const double n = static_cast<double>(v.size());
  out.mean = pairwise_sum(v) / n;
  std::vector<double> dev(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) dev[i] = (v[i] - out.mean) * (v[i] - out.mean);
  out.std = v.size() > 1 ? std::sqrt(pairwise_sum(dev) / (n - 1.0)) : 0.0;
  return out;
}

}  // namespace

double psnr(const RasterImage& ref, const RasterImage& est) {
  require_pair(ref, est, "psnr");
  double peak = 0.0;
  for (float v : ref.samples()) peak = std::max(peak, static_cast<double>(v));
  double se = 0.0;
  auto a = ref.samples();
  auto b = est.samples();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - b[i];
    se += d * d;
  }
  const double mse = se / static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(peak * peak / mse));
}

double ssim(const RasterImage& ref, const RasterImage& est, const SsimOptions& opts) {
  require_pair(ref, est, "ssim");
  const int win = opts.window;
  const int w = ref.width();
  const int h = ref.height();
  if (w < win || h < win) throw Error(ErrorKind::input, "ssim: image smaller than the window");

  std::vector<double> g(win);
  double gsum = 0.0;
  for (int i = 0; i < win; ++i) {
    const double d = i - (win - 1) / 2.0;
    g[i] = std::exp(-d * d / (2.0 * opts.gaussian_sigma * opts.gaussian_sigma));
    gsum += g[i];
  }
  for (auto& v : g) v /= gsum;

  double lo = ref.samples()[0], hi = lo;
  for (float v : ref.samples()) {
    lo = std::min(lo, static_cast<double>(v));
    hi = std::max(hi, static_cast<double>(v));
  }
  const double range = hi - lo;
  const double c1 = (opts.k1 * range) * (opts.k1 * range);
  const double c2 = (opts.k2 * range) * (opts.k2 * range);

  // Separable "valid" filtering of x, y, x^2, y^2, xy.
  const int ow = w - win + 1;
  const int oh = h - win + 1;
  auto a = ref.samples();
  auto b = est.samples();
  std::vector<double> hx(static_cast<std::size_t>(h) * ow * 5, 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s[5] = {0, 0, 0, 0, 0};
      for (int k = 0; k < win; ++k) {
        const std::size_t i = static_cast<std::size_t>(r) * w + c + k;
        const double x = a[i], y = b[i];
        s[0] += g[k] * x;
        s[1] += g[k] * y;
        s[2] += g[k] * x * x;
        s[3] += g[k] * y * y;
        s[4] += g[k] * x * y;
      }
      for (int q = 0; q < 5; ++q) hx[(static_cast<std::size_t>(r) * ow + c) * 5 + q] = s[q];
    }
  }
  std::vector<double> local(static_cast<std::size_t>(oh) * ow);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      double s[5] = {0, 0, 0, 0, 0};
      for (int k = 0; k < win; ++k) {
        for (int q = 0; q < 5; ++q) s[q] += g[k] * hx[(static_cast<std::size_t>(r + k) * ow + c) * 5 + q];
      }
      const double mx = s[0], my = s[1];
      const double vx = s[2] - mx * mx;
      const double vy = s[3] - my * my;
      const double cxy = s[4] - mx * my;
      local[static_cast<std::size_t>(r) * ow + c] =
          ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
    }
  }
  return pairwise_sum(local) / static_cast<double>(local.size());
}

EnlEstimate estimate_enl(const RasterImage& intensity, const Region& region) {
  if (intensity.domain() != Domain::intensity) {
    throw Error(ErrorKind::input, "enl: expected an intensity image");
  }
  if (region.area() < kMinEnlArea) {
    throw Error(ErrorKind::input, "enl: region must cover at least 1000 pixels");
  }
  const RasterImage roi = intensity.crop(region);
  EnlEstimate est;
  est.region = region;
  const double n = static_cast<double>(roi.size());
  double sum = 0.0;
  for (float v : roi.samples()) sum += v;
  est.mean = sum / n;
  double ss = 0.0;
  for (float v : roi.samples()) ss += (v - est.mean) * (v - est.mean);
  est.variance = ss / (n - 1.0);
  const double enl = est.variance > 0.0 ? est.mean * est.mean / est.variance : kEnlCap;
  if (!(enl < kEnlCap)) {
    est.enl = kEnlCap;
    est.capped = true;
  } else {
    est.enl = enl;
  }
  if (!(est.enl > 0.0)) throw Error(ErrorKind::input, "enl: region has zero mean");
  return est;
}

RasterImage ratio_residual(const RasterImage& noisy, const RasterImage& denoised) {
  if (!noisy.same_shape(denoised)) throw Error(ErrorKind::input, "ratio: shape mismatch");
  if (noisy.domain() != Domain::intensity || denoised.domain() != Domain::intensity) {
    throw Error(ErrorKind::input, "ratio: both images must be intensity");
  }
  std::vector<float> out(noisy.size());
  auto a = noisy.samples();
  auto b = denoised.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(b[i] > 0.0f)) throw Error(ErrorKind::input, "ratio: denoised image has a zero sample");
    out[i] = a[i] / b[i];
  }
  return noisy.with_samples(std::move(out));
}

std::uint64_t realization_seed(std::uint64_t seed, int index) {
  return mix_seed(seed ^ 0x5ee5'5ee5'5ee5'5ee5ull, static_cast<std::uint64_t>(index));
}

EvaluationReport evaluate_suite(const RasterImage& clean, const DespeckleMethod& method, double looks,
                                int realizations, std::uint64_t seed) {
  if (realizations < 2) throw Error(ErrorKind::input, "evaluate: need at least 2 realizations");
  if (clean.domain() != Domain::intensity) throw Error(ErrorKind::input, "evaluate: clean must be intensity");
  const RasterImage ref = to_amplitude(clean);

  EvaluationReport rep;
  rep.looks = looks;
  rep.seed = seed;
  rep.realizations.resize(realizations);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < realizations; ++r) {
    try {
      RealizationScores s;
      s.index = r;
      s.seed = realization_seed(seed, r);
      const RasterImage noisy = simulate_speckle(clean, looks, s.seed);
      const RasterImage restored = method(noisy);
      const RasterImage noisy_amp = to_amplitude(noisy);
      const RasterImage est_amp = to_amplitude(restored);
      s.psnr_noisy = psnr(ref, noisy_amp);
      s.psnr = psnr(ref, est_amp);
      s.ssim_noisy = ssim(ref, noisy_amp);
      s.ssim = ssim(ref, est_amp);
      rep.realizations[r] = s;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> pn, p, sn, s, gain;
  for (const auto& rs : rep.realizations) {
    pn.push_back(rs.psnr_noisy);
    p.push_back(rs.psnr);
    sn.push_back(rs.ssim_noisy);
    s.push_back(rs.ssim);
    gain.push_back(rs.psnr - rs.psnr_noisy);
  }
  rep.psnr_noisy = mean_std(pn);
  rep.psnr = mean_std(p);
  rep.ssim_noisy = mean_std(sn);
  rep.ssim = mean_std(s);
  rep.psnr_gain = mean_std(gain);
  return rep;
}

void write_report(std::ostream& os, const EvaluationReport& rep) {
  const auto flags = os.flags();
  os << "# peak=max(ref) amplitude; ssim window=11 gaussian_sigma=1.5 K1=0.01 K2=0.03\n";
  os << "# looks=" << rep.looks << " seed=" << rep.seed << " realizations=" << rep.realizations.size() << "\n";
  os << "realization\tseed\tpsnr_noisy\tpsnr\tssim_noisy\tssim\n";
  os << std::fixed;
  for (const auto& r : rep.realizations) {
    os << r.index << '\t' << r.seed << '\t' << std::setprecision(4) << r.psnr_noisy << '\t' << r.psnr << '\t'
       << std::setprecision(5) << r.ssim_noisy << '\t' << r.ssim << '\n';
  }
  auto row = [&](const char* name, const MeanStd& ms, int prec) {
    os << std::left << std::setw(12) << name << std::right << std::setprecision(prec) << std::setw(10)
       << ms.mean << " +/- " << ms.std << '\n';
  };
  os << "\n";
  row("PSNR noisy", rep.psnr_noisy, 4);
  row("PSNR", rep.psnr, 4);
  row("PSNR gain", rep.psnr_gain, 4);
  row("SSIM noisy", rep.ssim_noisy, 5);
  row("SSIM", rep.ssim, 5);
  os.flags(flags);
}

}  // namespace sarkit
