#pragma once

#include "gapfuse/grid.hpp"

namespace gapfuse {

// Pixelwise mean where both inputs are valid, carry-through where exactly one
// is, missing where neither is. Doubles as the interpolation baseline.
RainGrid interpolate_pair(const RainGrid& a, const RainGrid& b);

// Ternary rain-support mask: -1 where both inputs are missing, otherwise 1
// where the interpolated intensity exceeds the threshold, else 0.
ShapeGrid produce_shape(const RainGrid& a, const RainGrid& b, double rain_threshold = 0.0);

}  // namespace gapfuse
