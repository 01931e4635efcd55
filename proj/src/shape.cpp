#include "gapfuse/shape.hpp"

#include "gapfuse/errors.hpp"

namespace gapfuse {

RainGrid interpolate_pair(const RainGrid& a, const RainGrid& b) {
  if (!a.meta().same_extent(b.meta())) throw ShapeMismatchError("input grids differ in extent");
  std::size_t n = a.meta().pixel_count();
  std::vector<double> values(n, 0.0);
  Mask valid(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    bool va = a.valid_at(i);
    bool vb = b.valid_at(i);
    if (va && vb) {
      values[i] = 0.5 * (a.value_at(i) + b.value_at(i));
      valid[i] = 1;
    } else if (va) {
      values[i] = a.value_at(i);
      valid[i] = 1;
    } else if (vb) {
      values[i] = b.value_at(i);
      valid[i] = 1;
    }
  }
  return RainGrid(a.meta(), std::move(values), std::move(valid));
}

ShapeGrid produce_shape(const RainGrid& a, const RainGrid& b, double rain_threshold) {
  if (rain_threshold < 0.0) throw ParamError("rain threshold cannot be negative");
  RainGrid merged = interpolate_pair(a, b);
  std::size_t n = merged.meta().pixel_count();
  std::vector<std::int8_t> codes(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!merged.valid_at(i)) {
      codes[i] = -1;
    } else {
      codes[i] = merged.value_at(i) > rain_threshold ? 1 : 0;
    }
  }
  return ShapeGrid(merged.meta(), std::move(codes));
}

}  // namespace gapfuse
