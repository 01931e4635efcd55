#pragma once

#include <cstdint>
#include <optional>

#include "gapfuse/grid.hpp"

namespace gapfuse {

// Images with fewer valid pixels than this are unusable for fusion studies.
inline constexpr int kMinValidPixels = 40;

struct SceneParams {
  std::uint64_t seed = 0;
  int width = 64;
  int height = 64;
  double cell_count = 6.0;         // expected number of rain cells (Poisson mean)
  double cell_scale = 6.0;         // cell correlation length, pixels
  double intensity_scale = 4.0;    // log-normal median of cell peak intensity, mm/hr
  double wet_fraction_target = 0.3;
};

enum class SwathKind { Band, Disk, RandomBlocks };

struct SwathSpec {
  SwathKind kind = SwathKind::Band;
  double coverage_fraction = 0.6;
  double angle_deg = 0.0;  // band travel direction; 0 keeps whole rows
  double noise_sigma = 0.25;
  std::uint64_t seed = 0;
  // Band placement across the grid: 0 and 1 are the two extremes, 0.5 is
  // centered. Unset means the placement is drawn from the seed.
  std::optional<double> offset_fraction;
};

// Gap-free synthetic rain scene: superposed Gaussian cells, log-normal peak
// intensities, quantile-thresholded so the wet pixel fraction hits the target.
RainGrid gen_truth(const SceneParams& p);

// Satellite-style view of a scene: pixels outside the swath become missing,
// surviving values pick up multiplicative log-normal noise.
RainGrid observe(const RainGrid& truth, const SwathSpec& s);

struct PairSample {
  RainGrid truth;
  RainGrid a;
  RainGrid b;
};

// A coincident observation pair of one scene. Empty when either view fails
// the minimum-valid-pixel rule; real generation failures throw instead.
std::optional<PairSample> gen_pair(const SceneParams& p, const SwathSpec& sa, const SwathSpec& sb);

}  // namespace gapfuse
