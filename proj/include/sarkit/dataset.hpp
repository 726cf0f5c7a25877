#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sarkit/denoiser.hpp"
#include "sarkit/metrics.hpp"
#include "sarkit/mulog.hpp"
#include "sarkit/raster.hpp"

namespace sarkit {

/// Co-registered acquisitions of one scene, all the same shape.
using TemporalStack = std::vector<RasterImage>;

/// Pixelwise mean intensity over the dates.
RasterImage temporal_multilook(const TemporalStack& stack);

inline constexpr std::size_t kRecommendedDates = 8;

struct GroundTruthResult {
  RasterImage image;
  RasterImage multilooked;
  EnlEstimate enl;  // of the multilooked image on the homogeneous region
  std::vector<std::string> warnings;
};

/// Temporal multilook, ENL on `homogeneous` gives the equivalent looks, then
/// MuLoG with `residual_denoiser` removes the remaining speckle.
GroundTruthResult generate_groundtruth(const TemporalStack& stack, const GaussianDenoiser& residual_denoiser,
                                       const Region& homogeneous, const MulogOptions& opts = {});

inline constexpr int kPatchSize = 40;
inline constexpr int kPatchStride = 10;

/// Number of anchors along one axis: floor((dim - size) / stride) + 1.
int patch_count_1d(int dim, int size, int stride);

struct Patch {
  int row = 0;
  int col = 0;
  RasterImage image;
};

/// Row-major patches with top-left anchors on a `stride` lattice.
std::vector<Patch> extract_patches(const RasterImage& img, int size = kPatchSize, int stride = kPatchStride);

/// The eight symmetries of the square, in this order.
enum class Dihedral : std::uint8_t {
  identity = 0,
  rot90,     // counter-clockwise
  rot180,
  rot270,
  flip_h,    // mirror columns
  flip_v,    // mirror rows
  transpose,
  antitranspose,
};
inline constexpr int kDihedralCount = 8;

RasterImage apply_dihedral(const RasterImage& patch, Dihedral t);
/// All eight transforms of a square patch, in enum order.
std::vector<RasterImage> augment(const RasterImage& patch);

struct PatchPair {
  RasterImage clean;  // log intensity
  RasterImage noisy;  // log intensity
  int image_id = 0;
  int row = 0;
  int col = 0;
  Dihedral augmentation = Dihedral::identity;
};

/// Speckles `clean` with `looks` looks, takes logs, extracts and augments
/// aligned patches.
std::vector<PatchPair> synthesize_pairs(const RasterImage& clean, double looks, std::uint64_t seed,
                                        int size = kPatchSize, int stride = kPatchStride, int image_id = 0);

/// Keeps samples at even (row, col); output is ceil(w/2) x ceil(h/2).
RasterImage subsample2(const RasterImage& img);

// Manifest: UTF-8 text, one record per line, tab-separated, preceded by a
// '#' header line naming the columns:
//   clean_path noisy_path image_id row col augmentation looks seed
// Paths are relative to the manifest directory.
inline constexpr const char* kManifestName = "manifest.tsv";
inline constexpr const char* kManifestHeader =
    "#clean_path\tnoisy_path\timage_id\trow\tcol\taugmentation\tlooks\tseed";

struct ManifestRecord {
  std::string clean_path;
  std::string noisy_path;
  int image_id = 0;
  int row = 0;
  int col = 0;
  int augmentation = 0;
  double looks = 1.0;
  std::uint64_t seed = 0;
};

/// Writes every pair as two RAD1 files plus the manifest into `dir`.
std::vector<ManifestRecord> write_pair_archive(const std::filesystem::path& dir,
                                               const std::vector<PatchPair>& pairs, double looks,
                                               std::uint64_t seed);
std::vector<ManifestRecord> read_manifest(const std::filesystem::path& manifest);

}  // namespace sarkit
