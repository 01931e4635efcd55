#pragma once

#include "gapfuse/fusion.hpp"
#include "gapfuse/grid.hpp"

namespace gapfuse {

// Texture constrained by the rain-support mask: code 1 keeps the (clamped)
// texture value, 0 forces a dry valid pixel, -1 stays missing.
RainGrid produce_fused(const Image& texture, const ShapeGrid& shape);

// The full method: texture production, shape production, composition.
RainGrid run_pipeline(const RainGrid& a, const RainGrid& b, const FusionConfig& cfg);

// Reference methods the evaluation compares against.
RainGrid baseline_interpolation(const RainGrid& a, const RainGrid& b);
RainGrid baseline_pyramid(const RainGrid& a, const RainGrid& b, const FusionConfig& cfg);

}  // namespace gapfuse
