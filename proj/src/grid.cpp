#include "gapfuse/grid.hpp"

#include <cmath>
#include <string>

namespace gapfuse {

void GridMeta::validate() const {
  if (width < 1 || height < 1) {
    throw ParamError("grid dimensions must be at least 1x1, got " + std::to_string(width) + "x" +
                     std::to_string(height));
  }
  if (!(cell_size_deg > 0.0) || !std::isfinite(cell_size_deg)) {
    throw ParamError("cell size must be a positive number of degrees");
  }
}

RainGrid::RainGrid(GridMeta meta, std::vector<double> values, Mask valid)
    : meta_(meta), values_(std::move(values)), valid_(std::move(valid)) {
  meta_.validate();
  if (values_.size() != meta_.pixel_count() || valid_.size() != meta_.pixel_count()) {
    throw ShapeMismatchError("value/mask buffers do not match grid dimensions");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (valid_[i]) {
      if (!std::isfinite(values_[i]) || values_[i] < 0.0) {
        throw ParamError("valid pixel " + std::to_string(i) +
                         " holds a negative or non-finite intensity");
      }
    } else {
      values_[i] = 0.0;  // missing pixels carry no intensity
    }
  }
}

RainGrid RainGrid::constant(const GridMeta& meta, double value) {
  meta.validate();  // before sizing buffers: a bad extent must not drive an allocation
  return RainGrid(meta, std::vector<double>(meta.pixel_count(), value),
                  Mask(meta.pixel_count(), 1));
}

RainGrid RainGrid::all_missing(const GridMeta& meta) {
  meta.validate();
  return RainGrid(meta, std::vector<double>(meta.pixel_count(), 0.0),
                  Mask(meta.pixel_count(), 0));
}

RainGrid RainGrid::from_image(const Image& img, double cell_size_deg) {
  GridMeta meta;
  meta.width = img.width;
  meta.height = img.height;
  meta.cell_size_deg = cell_size_deg;
  return RainGrid(meta, img.pixels, Mask(img.pixels.size(), 1));
}

ShapeGrid::ShapeGrid(GridMeta meta, std::vector<std::int8_t> codes)
    : meta_(meta), codes_(std::move(codes)) {
  meta_.validate();
  if (codes_.size() != meta_.pixel_count()) {
    throw ShapeMismatchError("code buffer does not match grid dimensions");
  }
  for (std::int8_t c : codes_) {
    if (c < -1 || c > 1) {
      throw ParamError("shape codes must lie in {-1, 0, 1}");
    }
  }
}

int valid_pixel_count(const RainGrid& g) {
  int n = 0;
  for (std::uint8_t v : g.valid()) n += (v != 0);
  return n;
}

Mask common_valid_mask(std::span<const RainGrid> grids) {
  if (grids.empty()) {
    throw ParamError("common_valid_mask needs at least one grid");
  }
  const GridMeta& meta = grids.front().meta();
  for (const RainGrid& g : grids) {
    if (!g.meta().same_extent(meta)) {
      throw ShapeMismatchError("grids passed to common_valid_mask differ in dimensions");
    }
  }
  Mask out(meta.pixel_count(), 1);
  for (const RainGrid& g : grids) {
    const Mask& v = g.valid();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] &= v[i];
  }
  return out;
}

}  // namespace gapfuse
