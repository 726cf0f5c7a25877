#include "sarkit/cnn.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <string>

#include "sarkit/error.hpp"
#include "sarkit/kernels.hpp"

namespace sarkit {

namespace {

constexpr std::uint32_t kMaxChannels = 4096;
constexpr std::uint32_t kMaxLayers = 1024;

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw Error(ErrorKind::parse, std::string("SCNW: truncated ") + what);
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return bytes_[pos_++];
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  std::vector<float> f32s(std::size_t n, const char* what) {
    need(4 * n, what);
    std::vector<float> out(n);
    for (auto& v : out) v = f32(what);
    return out;
  }
  bool match(const char (&tag)[5]) {
    if (remaining() < 4 || std::memcmp(bytes_.data() + pos_, tag, 4) != 0) return false;
    pos_ += 4;
    return true;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_f32(std::vector<std::uint8_t>& buf, float v) { put_u32(buf, std::bit_cast<std::uint32_t>(v)); }

void fold_batch_norm(LayerSpec& layer, std::span<const float> gamma, std::span<const float> beta,
                     std::span<const float> mean, std::span<const float> var) {
  const std::size_t taps = static_cast<std::size_t>(layer.in_channels) * 9;
  for (int o = 0; o < layer.out_channels; ++o) {
    const double denom = static_cast<double>(var[o]) + kBatchNormEps;
    if (!(denom > 0.0)) throw Error(ErrorKind::parse, "SCNW: non-positive batch-norm variance");
    const double s = gamma[o] / std::sqrt(denom);
    for (std::size_t t = 0; t < taps; ++t) {
      float& k = layer.kernel[o * taps + t];
      k = static_cast<float>(s * k);
    }
    layer.bias[o] = static_cast<float>(s * (static_cast<double>(layer.bias[o]) - mean[o]) + beta[o]);
  }
}

}  // namespace

void CnnWeights::validate() const {
  if (layers.size() < 3) throw Error(ErrorKind::parse, "SCNW: need at least 3 layers");
  if (layers.front().in_channels != 1) {
    throw Error(ErrorKind::parse, "SCNW: channel chain: first layer must take 1 channel");
  }
  if (layers.back().out_channels != 1 || layers.back().kind != LayerKind::conv) {
    throw Error(ErrorKind::parse, "SCNW: channel chain: last layer must be a 1-channel conv");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (i > 0 && l.in_channels != layers[i - 1].out_channels) {
      throw Error(ErrorKind::parse, "SCNW: channel chain broken between layers " + std::to_string(i) +
                                        " and " + std::to_string(i + 1));
    }
    if (l.kernel.size() != static_cast<std::size_t>(l.out_channels) * l.in_channels * 9 ||
        l.bias.size() != static_cast<std::size_t>(l.out_channels)) {
      throw Error(ErrorKind::parse, "SCNW: tensor size mismatch in layer " + std::to_string(i + 1));
    }
  }
}

CnnWeights decode_scnw(std::span<const std::uint8_t> bytes) {
  ByteReader rd(bytes);
  if (!rd.match("SCNW")) throw Error(ErrorKind::parse, "SCNW: bad magic");
  const auto version = rd.u32("header");
  if (version != kScnwVersion) {
    throw Error(ErrorKind::parse, "SCNW: unsupported version " + std::to_string(version));
  }
  CnnWeights w;
  w.trained_sigma = rd.f32("header");
  w.trained_bias_term = rd.f32("header");
  const auto count = rd.u32("header");
  if (count > kMaxLayers) throw Error(ErrorKind::parse, "SCNW: implausible layer count");
  for (std::uint32_t i = 0; i < count; ++i) {
    LayerSpec layer;
    const auto kind = rd.u8("layer header");
    if (kind > 2) throw Error(ErrorKind::parse, "SCNW: unknown layer kind " + std::to_string(kind));
    layer.kind = static_cast<LayerKind>(kind);
    const auto in = rd.u32("layer header");
    const auto out = rd.u32("layer header");
    if (in == 0 || out == 0 || in > kMaxChannels || out > kMaxChannels) {
      throw Error(ErrorKind::parse, "SCNW: implausible channel count in layer " + std::to_string(i + 1));
    }
    if (!w.layers.empty() && static_cast<int>(in) != w.layers.back().out_channels) {
      throw Error(ErrorKind::parse, "SCNW: channel chain broken between layers " + std::to_string(i) +
                                        " and " + std::to_string(i + 1));
    }
    layer.in_channels = static_cast<int>(in);
    layer.out_channels = static_cast<int>(out);
    layer.kernel = rd.f32s(static_cast<std::size_t>(out) * in * 9, "tensor");
    layer.bias = rd.f32s(out, "tensor");
    if (layer.kind == LayerKind::conv_bn_relu_folded) {
      const auto gamma = rd.f32s(out, "tensor");
      const auto beta = rd.f32s(out, "tensor");
      const auto mean = rd.f32s(out, "tensor");
      const auto var = rd.f32s(out, "tensor");
      fold_batch_norm(layer, gamma, beta, mean, var);
    }
    w.layers.push_back(std::move(layer));
  }
  if (rd.match("NRM1")) {
    w.input_norm.offset = rd.f32("normalization trailer");
    w.input_norm.scale = rd.f32("normalization trailer");
    if (!(w.input_norm.scale > 0.0f)) throw Error(ErrorKind::parse, "SCNW: normalization scale must be > 0");
  }
  if (rd.remaining() != 0) throw Error(ErrorKind::parse, "SCNW: trailing data");
  w.validate();
  return w;
}

std::vector<std::uint8_t> encode_scnw(const CnnWeights& weights) {
  weights.validate();
  std::vector<std::uint8_t> buf;
  for (char c : {'S', 'C', 'N', 'W'}) buf.push_back(static_cast<std::uint8_t>(c));
  put_u32(buf, kScnwVersion);
  put_f32(buf, weights.trained_sigma);
  put_f32(buf, weights.trained_bias_term);
  put_u32(buf, static_cast<std::uint32_t>(weights.layers.size()));
  for (const auto& l : weights.layers) {
    const auto kind = l.kind == LayerKind::conv_bn_relu_folded ? LayerKind::conv_relu : l.kind;
    buf.push_back(static_cast<std::uint8_t>(kind));
    put_u32(buf, static_cast<std::uint32_t>(l.in_channels));
    put_u32(buf, static_cast<std::uint32_t>(l.out_channels));
    for (float k : l.kernel) put_f32(buf, k);
    for (float b : l.bias) put_f32(buf, b);
  }
  if (weights.input_norm.offset != 0.0f || weights.input_norm.scale != 1.0f) {
    for (char c : {'N', 'R', 'M', '1'}) buf.push_back(static_cast<std::uint8_t>(c));
    put_f32(buf, weights.input_norm.offset);
    put_f32(buf, weights.input_norm.scale);
  }
  return buf;
}

CnnWeights load_weights(const std::filesystem::path& path) { return decode_scnw(read_file_bytes(path)); }

void save_weights(const CnnWeights& weights, const std::filesystem::path& path) {
  write_file_bytes(path, encode_scnw(weights));
}

namespace {

template <typename ConvFn>
RasterImage run_layers(const CnnWeights& weights, const RasterImage& img, ConvFn conv) {
  const int w = img.width();
  const int h = img.height();
  const std::size_t plane = img.size();
  std::vector<float> cur(img.samples().begin(), img.samples().end());
  std::vector<float> next;
  int channels = 1;
  for (const auto& layer : weights.layers) {
    next.assign(plane * layer.out_channels, 0.0f);
    kernels::Conv3x3Args args;
    args.input = cur;
    args.weights = layer.kernel;
    args.bias = layer.bias;
    args.output = next;
    args.in_channels = channels;
    args.out_channels = layer.out_channels;
    args.width = w;
    args.height = h;
    args.relu = layer.has_relu();
    conv(args);
    cur.swap(next);
    channels = layer.out_channels;
  }
  for (float v : cur) {
    if (!std::isfinite(v)) throw Error(ErrorKind::numerical, "cnn_forward: non-finite activation");
  }
  return RasterImage(w, h, Domain::log_intensity, std::move(cur));
}

}  // namespace

RasterImage cnn_forward(const CnnWeights& weights, const RasterImage& img) {
  return run_layers(weights, img, [](const kernels::Conv3x3Args& a) { kernels::parallel::conv3x3(a); });
}

RasterImage cnn_forward_reference(const CnnWeights& weights, const RasterImage& img) {
  return run_layers(weights, img, [](const kernels::Conv3x3Args& a) { kernels::serial::conv3x3(a); });
}

RasterImage cnn_forward_tiled(const CnnWeights& weights, const RasterImage& img, int tile, int margin) {
  const int w = img.width();
  const int h = img.height();
  if (w <= tile && h <= tile) return cnn_forward(weights, img);
  margin = std::max(margin, weights.receptive_radius());
  const int core = tile - 2 * margin;
  if (core <= 0) throw Error(ErrorKind::config, "cnn tiling: tile too small for the receptive field");

  const RasterImage src = img.with_domain(Domain::log_intensity);
  std::vector<float> out(img.size());
  for (int r0 = 0; r0 < h; r0 += core) {
    for (int c0 = 0; c0 < w; c0 += core) {
      const int rh = std::min(core, h - r0);
      const int cw = std::min(core, w - c0);
      Region in_region;
      in_region.row = std::max(0, r0 - margin);
      in_region.col = std::max(0, c0 - margin);
      in_region.height = std::min(h, r0 + rh + margin) - in_region.row;
      in_region.width = std::min(w, c0 + cw + margin) - in_region.col;
      const RasterImage piece = cnn_forward(weights, src.crop(in_region));
      for (int r = 0; r < rh; ++r) {
        const auto row = piece.row(r0 - in_region.row + r).subspan(c0 - in_region.col, cw);
        std::copy(row.begin(), row.end(), out.begin() + static_cast<std::ptrdiff_t>(r0 + r) * w + c0);
      }
    }
  }
  return RasterImage(w, h, Domain::log_intensity, std::move(out));
}

}  // namespace sarkit
