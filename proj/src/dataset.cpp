#include "sarkit/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "sarkit/error.hpp"
#include "sarkit/speckle.hpp"

namespace sarkit {

RasterImage temporal_multilook(const TemporalStack& stack) {
  if (stack.empty()) throw Error(ErrorKind::input, "multilook: empty stack");
  const auto& first = stack.front();
  for (const auto& img : stack) {
    if (!img.same_shape(first)) throw Error(ErrorKind::input, "multilook: dates differ in shape");
    if (img.domain() != Domain::intensity) throw Error(ErrorKind::input, "multilook: dates must be intensity");
  }
  const long long n = static_cast<long long>(first.size());
  std::vector<float> out(first.size());
  const double inv = 1.0 / static_cast<double>(stack.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto& img : stack) acc += img.samples()[i];
    out[i] = static_cast<float>(acc * inv);
  }
  return first.with_samples(std::move(out));
}

GroundTruthResult generate_groundtruth(const TemporalStack& stack, const GaussianDenoiser& residual_denoiser,
                                       const Region& homogeneous, const MulogOptions& opts) {
  std::vector<std::string> warnings;
  if (stack.size() < kRecommendedDates) {
    warnings.push_back("only " + std::to_string(stack.size()) + " dates; at least " +
                       std::to_string(kRecommendedDates) + " recommended");
  }
  RasterImage ml = temporal_multilook(stack);
  const EnlEstimate enl = estimate_enl(ml, homogeneous);
  if (enl.capped) warnings.push_back("homogeneous region has no measurable speckle; ENL capped");
  const double looks = std::max(1.0, enl.enl);
  RasterImage out = mulog_despeckle(ml, looks, residual_denoiser, opts);
  return {std::move(out), std::move(ml), enl, std::move(warnings)};
}

int patch_count_1d(int dim, int size, int stride) {
  if (size <= 0 || stride <= 0) throw Error(ErrorKind::input, "patches: size and stride must be positive");
  if (size > dim) return 0;
  return (dim - size) / stride + 1;
}

std::vector<Patch> extract_patches(const RasterImage& img, int size, int stride) {
  if (size > img.width() || size > img.height()) {
    throw Error(ErrorKind::input, "patches: patch size exceeds image dimension");
  }
  const int ny = patch_count_1d(img.height(), size, stride);
  const int nx = patch_count_1d(img.width(), size, stride);
  std::vector<Patch> out;
  out.reserve(static_cast<std::size_t>(nx) * ny);
  for (int i = 0; i < ny; ++i) {
    for (int j = 0; j < nx; ++j) {
      const Region r{i * stride, j * stride, size, size};
      out.push_back({r.row, r.col, img.crop(r)});
    }
  }
  return out;
}

RasterImage apply_dihedral(const RasterImage& p, Dihedral t) {
  if (p.width() != p.height()) throw Error(ErrorKind::input, "augment: patch must be square");
  const int n = p.width();
  std::vector<float> out(p.size());
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      int sr = r, sc = c;
      switch (t) {
        case Dihedral::identity: break;
        case Dihedral::rot90: sr = c; sc = n - 1 - r; break;
        case Dihedral::rot180: sr = n - 1 - r; sc = n - 1 - c; break;
        case Dihedral::rot270: sr = n - 1 - c; sc = r; break;
        case Dihedral::flip_h: sc = n - 1 - c; break;
        case Dihedral::flip_v: sr = n - 1 - r; break;
        case Dihedral::transpose: sr = c; sc = r; break;
        case Dihedral::antitranspose: sr = n - 1 - c; sc = n - 1 - r; break;
      }
      out[static_cast<std::size_t>(r) * n + c] = p.at(sr, sc);
    }
  }
  return p.with_samples(std::move(out));
}

std::vector<RasterImage> augment(const RasterImage& patch) {
  std::vector<RasterImage> out;
  out.reserve(kDihedralCount);
  for (int t = 0; t < kDihedralCount; ++t) out.push_back(apply_dihedral(patch, static_cast<Dihedral>(t)));
  return out;
}

std::vector<PatchPair> synthesize_pairs(const RasterImage& clean, double looks, std::uint64_t seed, int size,
                                        int stride, int image_id) {
  if (clean.domain() != Domain::intensity) throw Error(ErrorKind::input, "pairs: clean must be intensity");
  for (float v : clean.samples()) {
    if (!(v > 0.0f)) throw Error(ErrorKind::input, "pairs: clean image must be strictly positive");
  }
  const RasterImage noisy = simulate_speckle(clean, looks, seed);
  // A fixed floor keeps clean and noisy logs on the same scale.
  const double floor = 1e-10 * clean.mean();
  const auto clean_patches = extract_patches(to_log(clean, floor), size, stride);
  const auto noisy_patches = extract_patches(to_log(noisy, floor), size, stride);

  std::vector<PatchPair> out(clean_patches.size() * kDihedralCount,
                             PatchPair{clean_patches.front().image, clean_patches.front().image});
  const long long np = static_cast<long long>(clean_patches.size());
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < np; ++i) {
    for (int t = 0; t < kDihedralCount; ++t) {
      auto& pp = out[static_cast<std::size_t>(i) * kDihedralCount + t];
      pp.clean = apply_dihedral(clean_patches[i].image, static_cast<Dihedral>(t));
      pp.noisy = apply_dihedral(noisy_patches[i].image, static_cast<Dihedral>(t));
      pp.image_id = image_id;
      pp.row = clean_patches[i].row;
      pp.col = clean_patches[i].col;
      pp.augmentation = static_cast<Dihedral>(t);
    }
  }
  return out;
}

RasterImage subsample2(const RasterImage& img) {
  if (img.width() < 2 || img.height() < 2) throw Error(ErrorKind::input, "subsample2: image smaller than 2x2");
  const int ow = (img.width() + 1) / 2;
  const int oh = (img.height() + 1) / 2;
  std::vector<float> out;
  out.reserve(static_cast<std::size_t>(ow) * oh);
  for (int r = 0; r < img.height(); r += 2) {
    for (int c = 0; c < img.width(); c += 2) out.push_back(img.at(r, c));
  }
  return RasterImage(ow, oh, img.domain(), std::move(out));
}

std::vector<ManifestRecord> write_pair_archive(const std::filesystem::path& dir,
                                               const std::vector<PatchPair>& pairs, double looks,
                                               std::uint64_t seed) {
  std::filesystem::create_directories(dir);
  std::vector<ManifestRecord> records;
  records.reserve(pairs.size());
  std::ofstream manifest(dir / kManifestName, std::ios::trunc);
  if (!manifest) throw Error(ErrorKind::input, "cannot write manifest in " + dir.string());
  manifest << kManifestHeader << '\n';
  manifest.precision(17);
  char name[32];
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    ManifestRecord rec;
    std::snprintf(name, sizeof name, "clean_%07zu.rad", i);
    rec.clean_path = name;
    std::snprintf(name, sizeof name, "noisy_%07zu.rad", i);
    rec.noisy_path = name;
    rec.image_id = p.image_id;
    rec.row = p.row;
    rec.col = p.col;
    rec.augmentation = static_cast<int>(p.augmentation);
    rec.looks = looks;
    rec.seed = seed;
    write_raster(p.clean, dir / rec.clean_path);
    write_raster(p.noisy, dir / rec.noisy_path);
    manifest << rec.clean_path << '\t' << rec.noisy_path << '\t' << rec.image_id << '\t' << rec.row << '\t'
             << rec.col << '\t' << rec.augmentation << '\t' << rec.looks << '\t' << rec.seed << '\n';
    records.push_back(std::move(rec));
  }
  if (!manifest) throw Error(ErrorKind::input, "short write to manifest");
  return records;
}

std::vector<ManifestRecord> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "cannot open " + path.string());
  std::vector<ManifestRecord> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    ManifestRecord r;
    if (!(ss >> r.clean_path >> r.noisy_path >> r.image_id >> r.row >> r.col >> r.augmentation >> r.looks >>
          r.seed)) {
      throw Error(ErrorKind::parse, "manifest: malformed record on line " + std::to_string(lineno));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sarkit
