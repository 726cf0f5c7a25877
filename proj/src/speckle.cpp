#include "sarkit/speckle.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sarkit/error.hpp"

namespace sarkit {

namespace {

void require_positive(double x, const char* fn) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorKind::domain, std::string(fn) + ": argument must be positive and finite");
  }
}

}  // namespace

double digamma(double x) {
  require_positive(x, "digamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ log x - 1/(2x) - sum B_2k / (2k x^2k)
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 -
      r * (691.0 / 32760 - r * (1.0 / 12)))))));
  return acc + std::log(x) - 0.5 / x - series;
}

double polygamma1(double x) {
  require_positive(x, "polygamma1");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  // psi(1,x) ~ 1/x + 1/(2x^2) + sum B_2k / x^(2k+1)
  const double r = 1.0 / (x * x);
  const double series =
      r * (1.0 / 6 - r * (1.0 / 30 - r * (1.0 / 42 - r * (1.0 / 30 - r * (5.0 / 66 -
      r * (691.0 / 2730 - r * (7.0 / 6)))))));
  return acc + 1.0 / x + 0.5 * r + series / x;
}

SpeckleModel::SpeckleModel(double l) : looks(l) {
  if (!(l >= 1.0) || !std::isfinite(l)) {
    throw Error(ErrorKind::domain, "number of looks must be >= 1");
  }
  log_mean = digamma(l) - std::log(l);
  log_var = polygamma1(l);
}

double gamma_speckle_pdf(double n, double looks) {
  if (!(n > 0.0)) return 0.0;
  const double log_norm = looks * std::log(looks) - std::lgamma(looks);
  return std::exp(log_norm + (looks - 1.0) * std::log(n) - looks * n);
}

double ft_speckle_pdf(double n_log, double looks) {
  const double log_norm = looks * std::log(looks) - std::lgamma(looks);
  return std::exp(log_norm + looks * n_log - looks * std::exp(n_log));
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double standard_normal(std::mt19937_64& eng) {
  const double u1 = uniform_open(eng);
  const double u2 = uniform_open(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double sample_gamma(std::mt19937_64& eng, double shape, double rate) {
  if (shape < 1.0) {
    const double g = sample_gamma(eng, shape + 1.0, 1.0);
    return g * std::pow(uniform_open(eng), 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(eng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(eng);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

RasterImage simulate_speckle(const RasterImage& reflectivity, double looks, std::uint64_t seed) {
  if (reflectivity.domain() != Domain::intensity) {
    throw Error(ErrorKind::input, "simulate_speckle: reflectivity must be an intensity image");
  }
  if (!(looks >= 1.0)) throw Error(ErrorKind::domain, "simulate_speckle: looks must be >= 1");
  for (float v : reflectivity.samples()) {
    if (!(v > 0.0f)) throw Error(ErrorKind::input, "simulate_speckle: reflectivity must be > 0");
  }
  const int w = reflectivity.width();
  const int h = reflectivity.height();
  std::vector<float> out(reflectivity.size());
  auto in = reflectivity.samples();
#pragma omp parallel for schedule(static)
  for (int r = 0; r < h; ++r) {
    std::mt19937_64 eng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    const std::size_t base = static_cast<std::size_t>(r) * w;
    for (int c = 0; c < w; ++c) {
      out[base + c] = static_cast<float>(in[base + c] * sample_gamma(eng, looks, looks));
    }
  }
  return RasterImage(w, h, Domain::intensity, std::move(out));
}

}  // namespace sarkit
