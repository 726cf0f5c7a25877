#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace sarkit {

/// Nearest-rank index ceil(p*n) - 1, clamped to [0, n-1].
inline std::size_t nearest_rank_index(double p, std::size_t n) {
  const double rank = std::ceil(p * static_cast<double>(n));
  const long long idx = static_cast<long long>(rank) - 1;
  return static_cast<std::size_t>(std::clamp<long long>(idx, 0, static_cast<long long>(n) - 1));
}

/// Nearest-rank quantiles of an unsorted sample set (copies once, selects in place).
inline std::vector<double> nearest_rank_quantiles(std::span<const float> samples,
                                                  std::span<const double> probs) {
  std::vector<float> work(samples.begin(), samples.end());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) {
    const auto idx = nearest_rank_index(p, work.size());
    std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(idx), work.end());
    out.push_back(work[idx]);
  }
  return out;
}

}  // namespace sarkit
