#pragma once

#include <vector>

#include "sarkit/raster.hpp"

namespace sarkit::testing {

/// Four quadrants with intensities 25, 100, 400, 1600 (6 dB steps).
inline RasterImage quadrant_scene(int size) {
  std::vector<float> v(static_cast<std::size_t>(size) * size);
  const int half = size / 2;
  for (int r = 0; r < size; ++r)
    for (int c = 0; c < size; ++c) {
      float x = 0.0f;
      if (r < half) x = c < half ? 25.0f : 100.0f;
      else x = c < half ? 400.0f : 1600.0f;
      v[static_cast<std::size_t>(r) * size + c] = x;
    }
  return RasterImage(size, size, Domain::intensity, std::move(v));
}

inline RasterImage constant_image(int w, int h, float value, Domain d = Domain::intensity) {
  return RasterImage::filled(w, h, d, value);
}

}  // namespace sarkit::testing
