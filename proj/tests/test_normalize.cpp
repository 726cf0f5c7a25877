#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sarkit/error.hpp"
#include "sarkit/normalize.hpp"
#include "sarkit/speckle.hpp"

using namespace sarkit;

namespace {

// Log image whose 0.3% / 99.7% nearest-rank quantiles are exactly lo and hi.
RasterImage log_image_with_range(double lo, double hi, int n = 2000) {
  std::vector<float> v(n);
  for (int i = 0; i < n; ++i) v[i] = static_cast<float>(lo + (hi - lo) * 0.5);
  const auto lo_idx = static_cast<int>(std::ceil(0.003 * n)) - 1;
  const auto hi_idx = static_cast<int>(std::ceil(0.997 * n)) - 1;
  for (int i = 0; i <= lo_idx; ++i) v[i] = static_cast<float>(lo);
  for (int i = hi_idx; i < n; ++i) v[i] = static_cast<float>(hi);
  return RasterImage(n / 40, 40, Domain::log_intensity, v);
}

}  // namespace

TEST_CASE("grid has the 14 AWGN levels") {
  const auto g = awgn_sigma_grid();
  REQUIRE(g.size() == 14);
  CHECK(g.front() == 10.0 / 255.0);
  CHECK(g.back() == 75.0 / 255.0);
}

TEST_CASE("fit: L=1 with a range of 10 selects 30/255") {
  // Oracle: enumerate the grid, keep the largest value <= sqrt(psi1(1)) / 10.
  const double sigma = 1.2825498301618641 / 10.0;
  double expected = 0.0;
  for (int k = 10; k <= 75; k += 5) {
    if (k / 255.0 <= sigma) expected = k / 255.0;
  }
  REQUIRE(expected == 30.0 / 255.0);

  const auto grid = awgn_sigma_grid();
  const auto p = fit_normalization(log_image_with_range(-4.0, 6.0), 1.0, grid);
  CHECK(p.q_low == -4.0);
  CHECK(p.q_high == 6.0);
  CHECK(std::abs(p.sigma - 0.128255) < 1e-6);
  CHECK(p.sigma_train == expected);
  CHECK(p.gain == doctest::Approx(expected / sigma));
  CHECK(p.gain <= 1.0);
  CHECK_FALSE(p.clamped);
}

TEST_CASE("selection boundary and clamping") {
  const auto grid = awgn_sigma_grid();
  auto s = select_sigma(grid, 10.0 / 255.0);
  CHECK(s.value == 10.0 / 255.0);
  CHECK_FALSE(s.clamped_low);

  NormalizationParams base;
  auto p = retarget(base, 10.0 / 255.0, grid);
  CHECK(p.gain == 1.0);

  p = retarget(base, 0.03, grid);
  CHECK(p.sigma_train == 10.0 / 255.0);
  CHECK(p.clamped);

  p = retarget(base, 0.9, grid);
  CHECK(p.sigma_train == 75.0 / 255.0);
  CHECK(p.gain < 1.0);
  CHECK(p.clamped_high);
  CHECK_FALSE(p.clamped);
  CHECK_FALSE(retarget(base, 75.0 / 255.0, grid).clamped_high);
  CHECK_FALSE(retarget(base, 0.2, grid).clamped_high);

  // continuous denoiser
  CHECK(select_sigma({}, 0.2).found);
  CHECK_FALSE(select_sigma({}, 0.2).clamped_high);
  p = retarget(base, 0.2, {});
  CHECK(p.sigma_train == 0.2);
  CHECK(p.gain == 1.0);
}

TEST_CASE("fit preconditions") {
  const auto grid = awgn_sigma_grid();
  CHECK_THROWS_AS(fit_normalization(RasterImage::filled(50, 50, Domain::log_intensity, 1.0f), 1.0, grid), Error);
  CHECK_THROWS_AS(fit_normalization(log_image_with_range(0, 1, 800), 1.0, grid), Error);
  CHECK_THROWS_AS(fit_normalization(RasterImage::filled(50, 50, Domain::intensity, 1.0f), 1.0, grid), Error);
  const std::vector<double> unsorted{0.2, 0.1};
  CHECK_THROWS_AS(fit_normalization(log_image_with_range(0, 1), 1.0, unsorted), Error);
}

TEST_CASE("apply / unapply") {
  const auto grid = awgn_sigma_grid();
  std::mt19937 rng(5);
  std::normal_distribution<float> d(2.0f, 1.5f);
  std::vector<float> v(64 * 64);
  for (auto& x : v) x = d(rng);
  const RasterImage img(64, 64, Domain::log_intensity, v);
  const auto p = fit_normalization(img, 2.0, grid);
  CHECK(p.forward(p.q_low) == 0.0);
  CHECK(p.forward(p.q_high) == doctest::Approx(p.gain));
  const auto back = unapply_normalization(apply_normalization(img, p), p);
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) worst = std::max(worst, std::abs(double(back.samples()[i]) - v[i]));
  CHECK(worst < 1e-5);
}

TEST_CASE("normalized noise std equals sigma_train on a speckled constant scene") {
  const auto grid = awgn_sigma_grid();
  const auto y = simulate_speckle(RasterImage::filled(512, 512, Domain::intensity, 50.0f), 1.0, 99);
  const auto ly = to_log(y);
  const auto p = fit_normalization(ly, 1.0, grid);
  const auto n = apply_normalization(ly, p);
  double s = 0, s2 = 0;
  for (float x : n.samples()) s += x;
  const double m = s / n.size();
  for (float x : n.samples()) s2 += (x - m) * (x - m);
  const double sd = std::sqrt(s2 / (n.size() - 1));
  CHECK(std::abs(sd / p.sigma_train - 1.0) < 0.02);
}

TEST_CASE("fit is permutation invariant and scale equivariant") {
  const auto grid = awgn_sigma_grid();
  const auto y = simulate_speckle(RasterImage::filled(64, 64, Domain::intensity, 5.0f), 1.0, 3);
  const auto ly = to_log(y);
  std::vector<float> perm(ly.samples().begin(), ly.samples().end());
  std::mt19937 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto a = fit_normalization(ly, 1.0, grid);
  const auto b = fit_normalization(ly.with_samples(perm), 1.0, grid);
  CHECK(a.q_low == b.q_low);
  CHECK(a.q_high == b.q_high);
  CHECK(a.sigma_train == b.sigma_train);

  for (double c : {0.01, 137.0}) {
    std::vector<float> scaled(y.samples().begin(), y.samples().end());
    for (auto& v : scaled) v = static_cast<float>(v * c);
    const auto lc = to_log(y.with_samples(scaled));
    const auto pc = fit_normalization(lc, 1.0, grid);
    const auto na = apply_normalization(ly, a);
    const auto nc = apply_normalization(lc, pc);
    for (std::size_t i = 0; i < na.size(); ++i) CHECK(std::abs(na.samples()[i] - nc.samples()[i]) < 1e-6);
  }
}
