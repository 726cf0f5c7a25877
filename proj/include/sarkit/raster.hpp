#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sarkit {

enum class Domain : std::uint8_t { intensity = 0, amplitude = 1, log_intensity = 2 };

std::string_view to_string(Domain d);

/// Axis-aligned pixel rectangle, top-left anchored.
struct Region {
  int row = 0;
  int col = 0;
  int height = 0;
  int width = 0;

  long long area() const { return static_cast<long long>(height) * width; }
};

/// Single-band raster of 32-bit samples tagged with its radiometric domain.
///
/// Construction validates the domain invariants: every sample is finite, and
/// intensity/amplitude samples are non-negative. Instances are never mutated
/// afterwards, so they can be shared freely across threads.
class RasterImage {
 public:
  RasterImage(int width, int height, Domain domain, std::vector<float> samples);

  static RasterImage filled(int width, int height, Domain domain, float value);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return samples_.size(); }
  Domain domain() const { return domain_; }

  float at(int row, int col) const { return samples_[static_cast<std::size_t>(row) * width_ + col]; }
  std::span<const float> samples() const { return samples_; }
  std::span<const float> row(int r) const {
    return std::span<const float>(samples_).subspan(static_cast<std::size_t>(r) * width_, width_);
  }

  double mean() const;

  /// Same shape and domain, new samples.
  RasterImage with_samples(std::vector<float> samples) const;
  RasterImage with_domain(Domain domain) const;

  RasterImage crop(const Region& region) const;

  bool same_shape(const RasterImage& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

 private:
  int width_;
  int height_;
  Domain domain_;
  std::vector<float> samples_;
};

/// log(max(sample, floor)). The default floor is 1e-10 times the image mean.
RasterImage to_log(const RasterImage& img, std::optional<double> floor = std::nullopt);
RasterImage from_log(const RasterImage& img);
RasterImage to_amplitude(const RasterImage& intensity);
RasterImage to_intensity(const RasterImage& amplitude);

// RAD1 container: "RAD1", u32 width, u32 height, u8 domain, 3 zero bytes,
// then width*height little-endian f32 samples, row-major.
inline constexpr std::uint32_t kMaxRasterDim = 1u << 20;
inline constexpr std::uint64_t kMaxRasterSamples = 1ull << 31;

std::vector<std::uint8_t> encode_rad1(const RasterImage& img);
RasterImage decode_rad1(std::span<const std::uint8_t> bytes);
RasterImage read_raster(const std::filesystem::path& path);
void write_raster(const RasterImage& img, const std::filesystem::path& path);

/// 16-bit binary PGM of the amplitude, scaled so the 99.9% amplitude quantile
/// maps to 65535 (brighter samples clip). Intensity input is square-rooted and
/// log input is exponentiated first.
void write_pgm(const RasterImage& img, const std::filesystem::path& path);
/// Reads P5 (maxval up to 65535); returns raw counts as an amplitude image.
RasterImage read_pgm(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace sarkit
