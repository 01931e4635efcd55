#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gapfuse/errors.hpp"

namespace gapfuse {

// Geometry shared by every raster. origin_* are informational only; all
// processing works in pixel space.
struct GridMeta {
  int width = 0;
  int height = 0;
  double cell_size_deg = 0.25;
  std::optional<double> origin_lat;
  std::optional<double> origin_lon;

  std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
  bool same_extent(const GridMeta& other) const {
    return width == other.width && height == other.height;
  }
  void validate() const;
};

// Gap-free real-valued image, the working type for transform and texture
// math. Row-major, pixel (row, col) at row * width + col.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(int h, int w, double fill = 0.0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  double& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
  std::size_t size() const { return pixels.size(); }
  bool same_shape(const Image& other) const {
    return width == other.width && height == other.height;
  }
};

// Per-pixel validity; 1 = valid, 0 = missing.
using Mask = std::vector<std::uint8_t>;

// Rain-intensity raster with an explicit missing-pixel mask. Valid pixels
// hold finite values >= 0 mm/hr; missing pixels are normalized to carry 0 so
// their stored value can never leak into arithmetic as an intensity.
// Immutable after construction.
class RainGrid {
 public:
  RainGrid(GridMeta meta, std::vector<double> values, Mask valid);

  static RainGrid constant(const GridMeta& meta, double value);
  static RainGrid all_missing(const GridMeta& meta);
  // Gap-free grid from an image (all pixels valid).
  static RainGrid from_image(const Image& img, double cell_size_deg = 0.25);

  const GridMeta& meta() const { return meta_; }
  int width() const { return meta_.width; }
  int height() const { return meta_.height; }

  double value(int row, int col) const {
    return values_[static_cast<std::size_t>(row) * meta_.width + col];
  }
  bool is_valid(int row, int col) const {
    return valid_[static_cast<std::size_t>(row) * meta_.width + col] != 0;
  }
  double value_at(std::size_t i) const { return values_[i]; }
  bool valid_at(std::size_t i) const { return valid_[i] != 0; }

  const std::vector<double>& values() const { return values_; }
  const Mask& valid() const { return valid_; }

 private:
  GridMeta meta_;
  std::vector<double> values_;
  Mask valid_;
};

// Ternary rain-support raster: -1 missing, 0 no rain can occur, 1 rain can
// occur.
class ShapeGrid {
 public:
  ShapeGrid(GridMeta meta, std::vector<std::int8_t> codes);

  const GridMeta& meta() const { return meta_; }
  int width() const { return meta_.width; }
  int height() const { return meta_.height; }
  std::int8_t code(int row, int col) const {
    return codes_[static_cast<std::size_t>(row) * meta_.width + col];
  }
  std::int8_t code_at(std::size_t i) const { return codes_[i]; }
  const std::vector<std::int8_t>& codes() const { return codes_; }

 private:
  GridMeta meta_;
  std::vector<std::int8_t> codes_;
};

// Number of pixels whose valid flag is set.
int valid_pixel_count(const RainGrid& g);

// Mask that is true exactly where every input grid is valid. All grids must
// share dimensions; the list must be non-empty.
Mask common_valid_mask(std::span<const RainGrid> grids);

}  // namespace gapfuse
