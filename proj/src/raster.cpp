#include "sarkit/raster.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "sarkit/error.hpp"
#include "sarkit/order_stats.hpp"

namespace sarkit {

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::intensity: return "intensity";
    case Domain::amplitude: return "amplitude";
    case Domain::log_intensity: return "log_intensity";
  }
  return "unknown";
}

RasterImage::RasterImage(int width, int height, Domain domain, std::vector<float> samples)
    : width_(width), height_(height), domain_(domain), samples_(std::move(samples)) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::input, "raster dimensions must be positive");
  }
  if (samples_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorKind::input, "raster sample count does not match dimensions");
  }
  const bool nonneg = domain != Domain::log_intensity;
  for (float v : samples_) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::numerical, "raster contains a non-finite sample");
    }
    if (nonneg && v < 0.0f) {
      throw Error(ErrorKind::input,
                  std::string("negative sample in ") + std::string(to_string(domain)) + " raster");
    }
  }
}

RasterImage RasterImage::filled(int width, int height, Domain domain, float value) {
  if (width <= 0 || height <= 0) {
    throw Error(ErrorKind::input, "raster dimensions must be positive");
  }
  return RasterImage(width, height, domain,
                     std::vector<float>(static_cast<std::size_t>(width) * height, value));
}

double RasterImage::mean() const {
  double acc = 0.0;
  for (float v : samples_) acc += v;
  return acc / static_cast<double>(samples_.size());
}

RasterImage RasterImage::with_samples(std::vector<float> samples) const {
  return RasterImage(width_, height_, domain_, std::move(samples));
}

RasterImage RasterImage::with_domain(Domain domain) const {
  return RasterImage(width_, height_, domain, samples_);
}

RasterImage RasterImage::crop(const Region& region) const {
  if (region.row < 0 || region.col < 0 || region.height <= 0 || region.width <= 0 ||
      region.row + region.height > height_ || region.col + region.width > width_) {
    throw Error(ErrorKind::input, "crop region outside image");
  }
  std::vector<float> out;
  out.reserve(static_cast<std::size_t>(region.area()));
  for (int r = region.row; r < region.row + region.height; ++r) {
    auto src = row(r).subspan(region.col, region.width);
    out.insert(out.end(), src.begin(), src.end());
  }
  return RasterImage(region.width, region.height, domain_, std::move(out));
}

namespace {

void require_domain(const RasterImage& img, Domain d, const char* op) {
  if (img.domain() != d) {
    throw Error(ErrorKind::input, std::string(op) + ": expected " + std::string(to_string(d)) +
                                      " image, got " + std::string(to_string(img.domain())));
  }
}

}  // namespace

RasterImage to_log(const RasterImage& img, std::optional<double> floor) {
  require_domain(img, Domain::intensity, "to_log");
  double fl = 0.0;
  if (floor) {
    if (!(*floor > 0.0)) throw Error(ErrorKind::input, "to_log: floor must be positive");
    fl = *floor;
  } else {
    const double m = img.mean();
    if (!(m > 0.0)) throw Error(ErrorKind::input, "to_log: all-zero image, floor undefined");
    fl = 1e-10 * m;
  }
  std::vector<float> out(img.size());
  auto in = img.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(std::log(std::max(static_cast<double>(in[i]), fl)));
  }
  return RasterImage(img.width(), img.height(), Domain::log_intensity, std::move(out));
}

RasterImage from_log(const RasterImage& img) {
  require_domain(img, Domain::log_intensity, "from_log");
  std::vector<float> out(img.size());
  auto in = img.samples();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(std::exp(static_cast<double>(in[i])));
  }
  return RasterImage(img.width(), img.height(), Domain::intensity, std::move(out));
}

RasterImage to_amplitude(const RasterImage& intensity) {
  require_domain(intensity, Domain::intensity, "to_amplitude");
  std::vector<float> out(intensity.size());
  auto in = intensity.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(in[i]);
  return RasterImage(intensity.width(), intensity.height(), Domain::amplitude, std::move(out));
}

RasterImage to_intensity(const RasterImage& amplitude) {
  require_domain(amplitude, Domain::amplitude, "to_intensity");
  std::vector<float> out(amplitude.size());
  auto in = amplitude.samples();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[i] * in[i];
  return RasterImage(amplitude.width(), amplitude.height(), Domain::intensity, std::move(out));
}

namespace {

void put_u32(std::vector<std::uint8_t>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t off) {
  return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
         (static_cast<std::uint32_t>(b[off + 2]) << 16) |
         (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

constexpr std::size_t kRad1Header = 16;

}  // namespace

std::vector<std::uint8_t> encode_rad1(const RasterImage& img) {
  std::vector<std::uint8_t> buf;
  buf.reserve(kRad1Header + 4 * img.size());
  for (char c : {'R', 'A', 'D', '1'}) buf.push_back(static_cast<std::uint8_t>(c));
  put_u32(buf, static_cast<std::uint32_t>(img.width()));
  put_u32(buf, static_cast<std::uint32_t>(img.height()));
  buf.push_back(static_cast<std::uint8_t>(img.domain()));
  buf.insert(buf.end(), {0, 0, 0});
  for (float v : img.samples()) put_u32(buf, std::bit_cast<std::uint32_t>(v));
  return buf;
}

RasterImage decode_rad1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kRad1Header) {
    throw Error(ErrorKind::parse, "RAD1: truncated header");
  }
  if (bytes[0] != 'R' || bytes[1] != 'A' || bytes[2] != 'D' || bytes[3] != '1') {
    throw Error(ErrorKind::parse, "RAD1: bad magic");
  }
  const std::uint32_t w = get_u32(bytes, 4);
  const std::uint32_t h = get_u32(bytes, 8);
  const std::uint8_t tag = bytes[12];
  if (w == 0 || h == 0 || w > kMaxRasterDim || h > kMaxRasterDim ||
      static_cast<std::uint64_t>(w) * h > kMaxRasterSamples) {
    throw Error(ErrorKind::parse, "RAD1: dimension error (" + std::to_string(w) + "x" +
                                      std::to_string(h) + ")");
  }
  if (tag > 2) throw Error(ErrorKind::parse, "RAD1: unknown domain tag");
  if (bytes[13] != 0 || bytes[14] != 0 || bytes[15] != 0) {
    throw Error(ErrorKind::parse, "RAD1: reserved bytes not zero");
  }
  const std::uint64_t n = static_cast<std::uint64_t>(w) * h;
  if (bytes.size() < kRad1Header + 4 * n) throw Error(ErrorKind::parse, "RAD1: truncated payload");
  if (bytes.size() > kRad1Header + 4 * n) throw Error(ErrorKind::parse, "RAD1: trailing data");
  std::vector<float> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = std::bit_cast<float>(get_u32(bytes, kRad1Header + 4 * i));
  }
  return RasterImage(static_cast<int>(w), static_cast<int>(h), static_cast<Domain>(tag),
                     std::move(samples));
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::input, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::input, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::input, "short write to " + path.string());
}

RasterImage read_raster(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_rad1(bytes);
}

void write_raster(const RasterImage& img, const std::filesystem::path& path) {
  write_file_bytes(path, encode_rad1(img));
}

void write_pgm(const RasterImage& img, const std::filesystem::path& path) {
  std::vector<float> amp(img.size());
  auto in = img.samples();
  for (std::size_t i = 0; i < amp.size(); ++i) {
    switch (img.domain()) {
      case Domain::intensity: amp[i] = std::sqrt(in[i]); break;
      case Domain::amplitude: amp[i] = in[i]; break;
      case Domain::log_intensity: amp[i] = static_cast<float>(std::exp(0.5 * in[i])); break;
    }
  }
  const double probs[] = {0.999};
  const double top = nearest_rank_quantiles(amp, probs)[0];
  const double scale = top > 0.0 ? 65535.0 / top : 0.0;

  std::ostringstream header;
  header << "P5\n" << img.width() << " " << img.height() << "\n65535\n";
  const std::string h = header.str();
  std::vector<std::uint8_t> buf(h.begin(), h.end());
  buf.reserve(h.size() + 2 * amp.size());
  for (float a : amp) {
    const double v = std::clamp(std::round(a * scale), 0.0, 65535.0);
    const auto u = static_cast<std::uint16_t>(v);
    buf.push_back(static_cast<std::uint8_t>(u >> 8));
    buf.push_back(static_cast<std::uint8_t>(u & 0xff));
  }
  write_file_bytes(path, buf);
}

RasterImage read_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  std::size_t pos = 0;
  auto next_token = [&]() {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(bytes[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos])) tok.push_back(static_cast<char>(bytes[pos++]));
    if (tok.empty()) throw Error(ErrorKind::parse, "PGM: truncated header");
    return tok;
  };
  if (next_token() != "P5") throw Error(ErrorKind::parse, "PGM: bad magic");
  long w = 0, h = 0, maxval = 0;
  try {
    w = std::stol(next_token());
    h = std::stol(next_token());
    maxval = std::stol(next_token());
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::parse, "PGM: malformed header");
  }
  if (w <= 0 || h <= 0 || w > static_cast<long>(kMaxRasterDim) || h > static_cast<long>(kMaxRasterDim)) {
    throw Error(ErrorKind::parse, "PGM: dimension error");
  }
  if (maxval <= 0 || maxval > 65535) throw Error(ErrorKind::parse, "PGM: bad maxval");
  ++pos;  // single whitespace after maxval
  const std::size_t bps = maxval > 255 ? 2 : 1;
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  if (bytes.size() < pos + bps * n) throw Error(ErrorKind::parse, "PGM: truncated payload");
  std::vector<float> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = bps == 2 ? static_cast<float>((bytes[pos + 2 * i] << 8) | bytes[pos + 2 * i + 1])
                          : static_cast<float>(bytes[pos + i]);
  }
  return RasterImage(static_cast<int>(w), static_cast<int>(h), Domain::amplitude, std::move(samples));
}

}  // namespace sarkit
