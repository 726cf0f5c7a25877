#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

#include "sarkit/kernels.hpp"

using namespace sarkit;

namespace {

std::vector<float> random_floats(std::size_t n, unsigned seed, float lo = -1.0f, float hi = 1.0f) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<float> d(lo, hi);
  std::vector<float> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

struct ThreadScope {
  explicit ThreadScope(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadScope() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("conv3x3: parallel matches the serial reference") {
  ThreadScope threads(4);
  struct Shape {
    int cin, cout, w, h;
    bool relu;
  };
  for (const Shape s : {Shape{1, 8, 17, 13, true}, Shape{8, 8, 9, 21, true}, Shape{8, 1, 32, 32, false},
                        Shape{3, 5, 1, 1, false}, Shape{2, 2, 2, 40, true}}) {
    const auto [cin, cout, w, h, relu] = s;
    CAPTURE(cin);
    CAPTURE(cout);
    const std::size_t plane = static_cast<std::size_t>(w) * h;
    const auto in = random_floats(plane * cin, 1);
    const auto wts = random_floats(static_cast<std::size_t>(cin) * cout * 9, 2);
    const auto bias = random_floats(cout, 3);
    std::vector<float> a(plane * cout), b(plane * cout);
    kernels::Conv3x3Args args{in, wts, bias, a, cin, cout, w, h, relu};
    kernels::parallel::conv3x3(args);
    args.output = b;
    kernels::serial::conv3x3(args);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-5);
  }
}

TEST_CASE("conv3x3: linear without relu") {
  const int w = 12, h = 10;
  const std::size_t plane = w * h;
  const auto x1 = random_floats(plane * 2, 4);
  const auto x2 = random_floats(plane * 2, 5);
  std::vector<float> x12(plane * 2);
  for (std::size_t i = 0; i < x12.size(); ++i) x12[i] = x1[i] + x2[i];
  const auto wts = random_floats(2 * 3 * 9, 6);
  const auto bias = random_floats(3, 7);
  std::vector<float> y1(plane * 3), y2(plane * 3), y12(plane * 3);
  kernels::parallel::conv3x3({x1, wts, bias, y1, 2, 3, w, h, false});
  kernels::parallel::conv3x3({x2, wts, bias, y2, 2, 3, w, h, false});
  kernels::parallel::conv3x3({x12, wts, bias, y12, 2, 3, w, h, false});
  for (int oc = 0; oc < 3; ++oc)
    for (std::size_t p = 0; p < plane; ++p) {
      const std::size_t i = oc * plane + p;
      CHECK(std::abs(y12[i] - (y1[i] + y2[i] - bias[oc])) < 1e-5);
    }
}

TEST_CASE("tv dual step: parallel is bit-identical to serial") {
  ThreadScope threads(3);
  const int w = 23, h = 19;
  const std::size_t n = w * h;
  const auto yf = random_floats(n, 8, -2.0f, 2.0f);
  std::vector<double> y(yf.begin(), yf.end());
  std::vector<double> px1(n, 0.0), py1(n, 0.0), px2(n, 0.0), py2(n, 0.0), s1(n), s2(n);
  for (int it = 0; it < 25; ++it) {
    kernels::serial::tv_dual_step(y, px1, py1, s1, w, h, 0.3, 0.248);
    kernels::parallel::tv_dual_step(y, px2, py2, s2, w, h, 0.3, 0.248);
  }
  CHECK(px1 == px2);
  CHECK(py1 == py2);
  std::vector<double> d1(n), d2(n);
  kernels::serial::tv_divergence(px1, py1, w, h, d1);
  kernels::parallel::tv_divergence(px2, py2, w, h, d2);
  CHECK(d1 == d2);
}

TEST_CASE("tv divergence is the negative adjoint of the gradient") {
  const int w = 7, h = 5;
  const std::size_t n = w * h;
  const auto pxf = random_floats(n, 9), pyf = random_floats(n, 10), uf = random_floats(n, 11);
  std::vector<double> px(pxf.begin(), pxf.end()), py(pyf.begin(), pyf.end()), u(uf.begin(), uf.end());
  for (int r = 0; r < h; ++r) px[r * w + w - 1] = 0.0;
  for (int c = 0; c < w; ++c) py[(h - 1) * w + c] = 0.0;
  std::vector<double> div(n);
  kernels::serial::tv_divergence(px, py, w, h, div);
  double lhs = 0.0, rhs = 0.0;
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const std::size_t i = r * w + c;
      const double gx = c < w - 1 ? u[i + 1] - u[i] : 0.0;
      const double gy = r < h - 1 ? u[i + w] - u[i] : 0.0;
      lhs += gx * px[i] + gy * py[i];
      rhs -= u[i] * div[i];
    }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("prox sweep: parallel is bit-identical to serial") {
  ThreadScope threads(4);
  const std::size_t n = 5000;
  const auto vf = random_floats(n, 12, -5.0f, 5.0f), yf = random_floats(n, 13, -5.0f, 5.0f);
  std::vector<double> v(vf.begin(), vf.end()), y(yf.begin(), yf.end()), a(n), b(n);
  const int ia = kernels::serial::prox_data_sweep(v, y, 2.0, 0.7, a);
  const int ib = kernels::parallel::prox_data_sweep(v, y, 2.0, 0.7, b);
  CHECK(a == b);
  CHECK(ia == ib);
  CHECK(ia <= 100);
}

TEST_CASE("box mean: summed-area table matches the direct window") {
  ThreadScope threads(2);
  const int w = 31, h = 26;
  const auto in = random_floats(w * h, 14, 0.0f, 10.0f);
  std::vector<float> a(w * h), b(w * h);
  for (int radius : {0, 1, 3, 10, 40}) {
    kernels::serial::box_mean(in, w, h, radius, a);
    kernels::parallel::box_mean(in, w, h, radius, b);
    for (int i = 0; i < w * h; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-4);
  }
}
