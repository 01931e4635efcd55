#pragma once

#include <span>
#include <vector>

#include "gapfuse/grid.hpp"

namespace gapfuse {

// How gaps are filled before the transform. Zero treats missing pixels as dry
// background; CrossFill borrows the other image's value where it has one.
enum class MissingFill { Zero, CrossFill };

struct FusionConfig {
  int levels = 4;
  int orientations = 16;
  int inner_depth = 2;
  MissingFill missing_fill = MissingFill::Zero;
  double rain_threshold = 0.0;  // drives the rain-support stage of the pipeline
};

// Elementwise absolute-value-maximum selection; ties keep a.
std::vector<double> avms_merge(std::span<const double> a, std::span<const double> b);
Image avms_merge(const Image& a, const Image& b);

// Merge one pair of subimages: a bandpass decomposition of each, AVMS on
// every detail level and on the base, then synthesis.
Image fuse_subimage_pair(const Image& a, const Image& b, int inner_depth);

// The texture product: gap-fill, decompose both inputs, merge every subband
// (highpass, each oriented band, low residual), synthesize. Gap-free output;
// may undershoot slightly below zero, the composition stage clamps.
Image produce_texture(const RainGrid& a, const RainGrid& b, const FusionConfig& cfg);

// Gap-filled copy of g's pixel values under the given policy.
Image fill_missing(const RainGrid& g, const RainGrid& other, MissingFill policy);

}  // namespace gapfuse
