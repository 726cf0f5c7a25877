#pragma once

#include <cstdint>
#include <random>

#include "sarkit/raster.hpp"

namespace sarkit {

/// psi(x) = d/dx log Gamma(x). Throws ErrorKind::domain for x <= 0.
double digamma(double x);
/// psi(1, x) = d^2/dx^2 log Gamma(x). Throws ErrorKind::domain for x <= 0.
double polygamma1(double x);

/// Fully developed speckle with `looks` looks, and the moments of its log.
struct SpeckleModel {
  double looks;
  double log_mean;  // psi(L) - log L, the bias of log-intensity
  double log_var;   // psi(1, L)

  explicit SpeckleModel(double looks);
};

/// Gamma(shape L, rate L) density of the multiplicative speckle N.
double gamma_speckle_pdf(double n, double looks);
/// Density of log N (Fisher-Tippett); mode at 0.
double ft_speckle_pdf(double n_log, double looks);

/// Seed mixing for independent streams (SplitMix64 finalizer).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform on the open interval (0, 1) from 53 random bits.
inline double uniform_open(std::mt19937_64& eng) {
  return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& eng);

/// Marsaglia-Tsang squeeze sampler; shape < 1 uses the U^(1/a) boost.
/// Returns a Gamma(shape, rate) variate.
double sample_gamma(std::mt19937_64& eng, double shape, double rate);

/// Y = X * N with N ~ Gamma(L, L) i.i.d. Each image row draws from its own
/// stream derived from `seed`, so the result does not depend on thread count.
RasterImage simulate_speckle(const RasterImage& reflectivity, double looks, std::uint64_t seed);

}  // namespace sarkit
