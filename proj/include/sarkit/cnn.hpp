#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "sarkit/raster.hpp"

namespace sarkit {

enum class LayerKind : std::uint8_t {
  conv_relu = 0,
  conv_bn_relu_folded = 1,  // batch norm already folded into kernel and bias
  conv = 2,
};

struct LayerSpec {
  LayerKind kind = LayerKind::conv_relu;
  int in_channels = 1;
  int out_channels = 1;
  std::vector<float> kernel;  // [out][in][3][3]
  std::vector<float> bias;    // [out]

  bool has_relu() const { return kind != LayerKind::conv; }
};

/// Input affine map applied before the network: (x - offset) * scale. The
/// residual is divided by `scale` on the way out. Identity unless the weight
/// file carries an NRM1 trailer.
struct InputNormalization {
  float offset = 0.0f;
  float scale = 1.0f;
};

/// Weights of a DnCNN-shaped residual network (3x3 kernels only).
struct CnnWeights {
  std::vector<LayerSpec> layers;
  float trained_sigma = 0.0f;
  float trained_bias_term = 0.0f;  // psi(L) - log L for SAR networks, 0 for AWGN ones
  InputNormalization input_norm;

  int depth() const { return static_cast<int>(layers.size()); }
  /// Radius of the receptive field: one pixel per 3x3 layer.
  int receptive_radius() const { return depth(); }
  /// Throws ErrorKind::parse with a "channel chain" message on inconsistency.
  void validate() const;
};

inline constexpr std::uint32_t kScnwVersion = 1;
inline constexpr float kBatchNormEps = 1e-5f;

// SCNW: "SCNW", u32 version, f32 trained_sigma, f32 trained_bias_term,
// u32 layer_count, then per layer u8 kind, u32 in, u32 out,
// f32 kernel[out][in][3][3], f32 bias[out] and, for kind 1, f32 gamma, beta,
// mean, var [out] each. Optional trailer: "NRM1", f32 offset, f32 scale.
// All little-endian.
CnnWeights decode_scnw(std::span<const std::uint8_t> bytes);
/// Folded batch-norm layers are written as kind 0 (equivalent forward pass).
std::vector<std::uint8_t> encode_scnw(const CnnWeights& weights);
CnnWeights load_weights(const std::filesystem::path& path);
void save_weights(const CnnWeights& weights, const std::filesystem::path& path);

/// Predicted residual of the network on a single-channel plane (no input
/// normalization applied). Returns a log-domain image of the same shape.
RasterImage cnn_forward(const CnnWeights& weights, const RasterImage& img);

/// Serial reference of cnn_forward built on kernels::serial.
RasterImage cnn_forward_reference(const CnnWeights& weights, const RasterImage& img);

inline constexpr int kCnnTileSize = 256;
inline constexpr int kCnnTileMargin = 19;

/// cnn_forward over overlapping tiles of at most `tile` pixels, each cropped
/// by `margin` pixels (widened to the receptive radius if the network is
/// deeper) before being stitched.
RasterImage cnn_forward_tiled(const CnnWeights& weights, const RasterImage& img,
                              int tile = kCnnTileSize, int margin = kCnnTileMargin);

}  // namespace sarkit
