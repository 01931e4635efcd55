#include "gapfuse/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "gapfuse/errors.hpp"

namespace gapfuse {
namespace {

// Smallest wet intensity after thresholding. Keeps rain/no-rain detection
// well separated from the dry background even under multiplicative noise.
constexpr double kWetFloor = 0.5;
// Spread of the log-normal cell peak intensities.
constexpr double kLogAmpSigma = 0.5;

void validate(const SceneParams& p) {
  if (p.width < 1 || p.height < 1) throw ParamError("scene dimensions must be positive");
  if (!(p.cell_count >= 0.0) || !std::isfinite(p.cell_count)) {
    throw ParamError("cell count must be non-negative");
  }
  if (!(p.cell_scale > 0.0) || !std::isfinite(p.cell_scale)) {
    throw ParamError("cell scale must be positive");
  }
  if (!(p.intensity_scale > 0.0) || !std::isfinite(p.intensity_scale)) {
    throw ParamError("intensity scale must be positive");
  }
  if (!(p.wet_fraction_target > 0.0 && p.wet_fraction_target < 1.0)) {
    throw ParamError("wet fraction target must lie in (0, 1)");
  }
}

void validate(const SwathSpec& s) {
  if (!(s.coverage_fraction > 0.0 && s.coverage_fraction <= 1.0)) {
    throw ParamError("coverage fraction must lie in (0, 1]");
  }
  if (!(s.noise_sigma >= 0.0) || !std::isfinite(s.noise_sigma)) {
    throw ParamError("noise sigma must be non-negative");
  }
  if (!std::isfinite(s.angle_deg)) throw ParamError("swath angle must be finite");
  if (s.offset_fraction && !(*s.offset_fraction >= 0.0 && *s.offset_fraction <= 1.0)) {
    throw ParamError("offset fraction must lie in [0, 1]");
  }
}

// Selects exactly `count` pixels in ascending `key` order, ties broken by
// pixel index, starting at the rank chosen by `offset` in [0, 1].
Mask rank_select(const std::vector<double>& key, std::size_t count, double offset) {
  std::size_t n = key.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });
  std::size_t start = count >= n ? 0 : static_cast<std::size_t>(std::llround(offset * static_cast<double>(n - count)));
  Mask mask(n, 0);
  for (std::size_t i = start; i < std::min(n, start + count); ++i) mask[order[i]] = 1;
  return mask;
}

Mask swath_mask(int width, int height, const SwathSpec& s, std::mt19937_64& rng) {
  std::size_t n = static_cast<std::size_t>(width) * height;
  auto count = static_cast<std::size_t>(std::llround(s.coverage_fraction * static_cast<double>(n)));

  switch (s.kind) {
    case SwathKind::Band: {
      double offset = s.offset_fraction
                          ? *s.offset_fraction
                          : std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      double theta = s.angle_deg * std::numbers::pi / 180.0;
      double nx = -std::sin(theta);
      double ny = std::cos(theta);
      double cx = (width - 1) / 2.0;
      double cy = (height - 1) / 2.0;
      std::vector<double> proj(n);
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          proj[static_cast<std::size_t>(r) * width + c] = (c - cx) * nx + (r - cy) * ny;
        }
      }
      return rank_select(proj, count, offset);
    }
    case SwathKind::Disk: {
      double cx = (width - 1) / 2.0;
      double cy = (height - 1) / 2.0;
      std::vector<double> d2(n);
      for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
          d2[static_cast<std::size_t>(r) * width + c] =
              (c - cx) * (c - cx) + (r - cy) * (r - cy);
        }
      }
      return rank_select(d2, count, 0.0);
    }
    case SwathKind::RandomBlocks: {
      constexpr int kBlock = 8;
      int bw = (width + kBlock - 1) / kBlock;
      int bh = (height + kBlock - 1) / kBlock;
      std::vector<int> blocks(static_cast<std::size_t>(bw) * bh);
      std::iota(blocks.begin(), blocks.end(), 0);
      std::shuffle(blocks.begin(), blocks.end(), rng);

      Mask mask(n, 0);
      std::size_t marked = 0;
      for (int block : blocks) {
        if (marked >= count) break;
        int r0 = (block / bw) * kBlock;
        int c0 = (block % bw) * kBlock;
        for (int r = r0; r < std::min(r0 + kBlock, height) && marked < count; ++r) {
          for (int c = c0; c < std::min(c0 + kBlock, width) && marked < count; ++c) {
            mask[static_cast<std::size_t>(r) * width + c] = 1;
            ++marked;
          }
        }
      }
      return mask;
    }
  }
  throw ParamError("unknown swath kind");
}

}  // namespace

RainGrid gen_truth(const SceneParams& p) {
  validate(p);
  GridMeta meta{p.width, p.height, 0.25, {}, {}};
  std::mt19937_64 rng(p.seed);

  int n_cells = 0;
  if (p.cell_count > 0.0) {
    n_cells = std::poisson_distribution<int>(p.cell_count)(rng);
  }
  std::size_t n = meta.pixel_count();
  if (n_cells == 0) {
    return RainGrid(meta, std::vector<double>(n, 0.0), Mask(n, 1));
  }

  std::uniform_real_distribution<double> ux(0.0, p.width), uy(0.0, p.height);
  std::uniform_real_distribution<double> jitter(0.7, 1.3);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> field(n, 0.0);
  for (int cell = 0; cell < n_cells; ++cell) {
    double cx = ux(rng);
    double cy = uy(rng);
    double sigma = p.cell_scale * jitter(rng);
    double amp = p.intensity_scale * std::exp(kLogAmpSigma * gauss(rng));
    double inv = 1.0 / (2.0 * sigma * sigma);
    for (int r = 0; r < p.height; ++r) {
      for (int c = 0; c < p.width; ++c) {
        double d2 = (r - cy) * (r - cy) + (c - cx) * (c - cx);
        field[static_cast<std::size_t>(r) * p.width + c] += amp * std::exp(-d2 * inv);
      }
    }
  }

  // Quantile threshold: exactly the top `wet` values stay wet, re-based onto
  // the wet floor so every wet pixel is clearly above the dry background.
  auto wet = static_cast<std::size_t>(std::llround(p.wet_fraction_target * static_cast<double>(n)));
  double cut = -1.0;
  if (wet == 0) {
    cut = *std::max_element(field.begin(), field.end());
  } else if (wet < n) {
    std::vector<double> sorted(field);
    std::nth_element(sorted.begin(), sorted.begin() + (n - wet - 1), sorted.end());
    cut = sorted[n - wet - 1];
  }

  std::vector<double> values(n, 0.0);
  std::size_t achieved = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (field[i] > cut) {
      values[i] = field[i] - cut + kWetFloor;
      ++achieved;
    }
  }

  double achieved_fraction = static_cast<double>(achieved) / static_cast<double>(n);
  if (std::abs(achieved_fraction - p.wet_fraction_target) > 0.1) {
    throw ParamError("wet fraction " + std::to_string(p.wet_fraction_target) +
                     " unreachable; achieved " + std::to_string(achieved_fraction));
  }
  return RainGrid(meta, std::move(values), Mask(n, 1));
}

RainGrid observe(const RainGrid& truth, const SwathSpec& s) {
  validate(s);
  std::mt19937_64 rng(s.seed);
  Mask swath = swath_mask(truth.width(), truth.height(), s, rng);

  std::size_t n = truth.meta().pixel_count();
  std::vector<double> values(n, 0.0);
  Mask valid(n, 0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!swath[i] || !truth.valid_at(i)) continue;
    valid[i] = 1;
    values[i] = truth.value_at(i);
    if (s.noise_sigma > 0.0) values[i] *= std::exp(s.noise_sigma * gauss(rng));
  }
  return RainGrid(truth.meta(), std::move(values), std::move(valid));
}

std::optional<PairSample> gen_pair(const SceneParams& p, const SwathSpec& sa,
                                   const SwathSpec& sb) {
  RainGrid truth = gen_truth(p);
  RainGrid a = observe(truth, sa);
  RainGrid b = observe(truth, sb);
  if (valid_pixel_count(a) < kMinValidPixels || valid_pixel_count(b) < kMinValidPixels) {
    return std::nullopt;
  }
  return PairSample{std::move(truth), std::move(a), std::move(b)};
}

}  // namespace gapfuse
