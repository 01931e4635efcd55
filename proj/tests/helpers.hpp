#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "gapfuse/grid.hpp"

namespace gapfuse::testhelp {

inline Image random_image(int h, int w, std::mt19937& rng) {
  std::normal_distribution<double> dist;
  Image x(h, w);
  for (auto& p : x.pixels) p = dist(rng);
  return x;
}

inline double max_abs_diff(const Image& a, const Image& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.pixels.size(); ++i) {
    worst = std::max(worst, std::abs(a.pixels[i] - b.pixels[i]));
  }
  return worst;
}

inline double value_range(const Image& x) {
  auto [lo, hi] = std::minmax_element(x.pixels.begin(), x.pixels.end());
  return *hi - *lo;
}

// Smooth non-negative rain-like field: a few Gaussian cells over an exactly
// dry background.
inline Image bump_field(int h, int w, std::mt19937& rng, int n_bumps = 4) {
  std::uniform_real_distribution<double> ux(0.0, w), uy(0.0, h);
  std::uniform_real_distribution<double> amp(2.0, 8.0), sig(2.0, 5.0);
  Image x(h, w);
  for (int b = 0; b < n_bumps; ++b) {
    double cx = ux(rng), cy = uy(rng), a = amp(rng), s = sig(rng);
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
        x.at(r, c) += a * std::exp(-d2 / (2.0 * s * s));
      }
    }
  }
  for (auto& p : x.pixels) p = std::max(0.0, p - 0.3);
  return x;
}

inline RainGrid random_rain_grid(int h, int w, std::mt19937& rng, double missing_prob) {
  std::exponential_distribution<double> intensity(0.5);
  std::bernoulli_distribution gap(missing_prob);
  GridMeta meta{w, h, 0.25, {}, {}};
  std::vector<double> values(meta.pixel_count());
  Mask valid(meta.pixel_count(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = intensity(rng);
    if (gap(rng)) {
      valid[i] = 0;
      values[i] = 0.0;
    }
  }
  return RainGrid(meta, std::move(values), std::move(valid));
}

}  // namespace gapfuse::testhelp
