#pragma once

// Data-parallel inner loops. Every kernel exists twice: `parallel` is the
// OpenMP version used by the library, `serial` is a plain reference kept for
// tests and the benchmark. Planes are row-major, `width` samples per row.

#include <span>

namespace sarkit::kernels {

/// One 3x3 convolution layer with zero padding ("same" output size).
/// input: [in_channels][height][width]; weights: [out][in][3][3];
/// output: [out_channels][height][width].
struct Conv3x3Args {
  std::span<const float> input;
  std::span<const float> weights;
  std::span<const float> bias;
  std::span<float> output;
  int in_channels = 1;
  int out_channels = 1;
  int width = 0;
  int height = 0;
  bool relu = false;
};

namespace serial {

void conv3x3(const Conv3x3Args& args);
/// One semi-implicit dual step of the Chambolle projection for
/// min 1/2 |u - y|^2 + lambda TV(u); `scratch` holds width*height doubles.
void tv_dual_step(std::span<const double> y, std::span<double> px, std::span<double> py,
                  std::span<double> scratch, int width, int height, double lambda, double tau);
/// Discrete divergence, the negative adjoint of the forward-difference gradient.
void tv_divergence(std::span<const double> px, std::span<const double> py, int width, int height,
                   std::span<double> div);
/// Pixelwise prox of the Fisher-Tippett negative log-likelihood. Returns the
/// largest Newton iteration count over the sweep.
int prox_data_sweep(std::span<const double> v, std::span<const double> y, double looks, double rho,
                    std::span<double> out);
/// Mean over a (2*radius+1)^2 window clipped to the image.
void box_mean(std::span<const float> in, int width, int height, int radius, std::span<float> out);

}  // namespace serial

namespace parallel {

void conv3x3(const Conv3x3Args& args);
void tv_dual_step(std::span<const double> y, std::span<double> px, std::span<double> py,
                  std::span<double> scratch, int width, int height, double lambda, double tau);
void tv_divergence(std::span<const double> px, std::span<const double> py, int width, int height,
                   std::span<double> div);
int prox_data_sweep(std::span<const double> v, std::span<const double> y, double looks, double rho,
                    std::span<double> out);
void box_mean(std::span<const float> in, int width, int height, int radius, std::span<float> out);

}  // namespace parallel

}  // namespace sarkit::kernels
