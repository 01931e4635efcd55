#include "gapfuse/compose.hpp"

#include <algorithm>

#include "gapfuse/errors.hpp"
#include "gapfuse/shape.hpp"

namespace gapfuse {

RainGrid produce_fused(const Image& texture, const ShapeGrid& shape) {
  if (texture.width != shape.meta().width || texture.height != shape.meta().height) {
    throw ShapeMismatchError("texture and shape differ in extent");
  }
  std::size_t n = texture.pixels.size();
  std::vector<double> values(n, 0.0);
  Mask valid(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    switch (shape.code_at(i)) {
      case 1:
        values[i] = std::max(texture.pixels[i], 0.0);
        valid[i] = 1;
        break;
      case 0:
        valid[i] = 1;
        break;
      default:
        break;  // stays missing
    }
  }
  return RainGrid(shape.meta(), std::move(values), std::move(valid));
}

RainGrid run_pipeline(const RainGrid& a, const RainGrid& b, const FusionConfig& cfg) {
  Image texture = produce_texture(a, b, cfg);
  ShapeGrid shape = produce_shape(a, b, cfg.rain_threshold);
  return produce_fused(texture, shape);
}

RainGrid baseline_interpolation(const RainGrid& a, const RainGrid& b) {
  return interpolate_pair(a, b);
}

RainGrid baseline_pyramid(const RainGrid& a, const RainGrid& b, const FusionConfig& cfg) {
  Image texture = produce_texture(a, b, cfg);
  std::size_t n = texture.pixels.size();
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = std::max(texture.pixels[i], 0.0);
  return RainGrid(a.meta(), std::move(values), Mask(n, 1));
}

}  // namespace gapfuse
