#include "gapfuse/fusion.hpp"

#include <cmath>
#include <string>

#include "gapfuse/errors.hpp"
#include "gapfuse/pyramid.hpp"

namespace gapfuse {
namespace {

void merge_into(std::span<const double> a, std::span<const double> b, std::span<double> out) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = std::abs(a[i]) >= std::abs(b[i]) ? a[i] : b[i];
  }
}

void check_finite(std::span<const double> v, const char* which) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ParamError(std::string(which) + " input holds a non-finite value");
  }
}

void validate_config(const FusionConfig& cfg, int width, int height) {
  if (cfg.orientations < 1) throw ParamError("orientation count must be at least 1");
  if (cfg.inner_depth < 0) throw ParamError("inner depth cannot be negative");
  if (cfg.rain_threshold < 0.0) throw ParamError("rain threshold cannot be negative");
  int deepest = max_levels(width, height);
  if (cfg.levels < 0 || cfg.levels > deepest) {
    throw DepthError("config requests " + std::to_string(cfg.levels) + " levels; grid supports " +
                     std::to_string(deepest));
  }
}

}  // namespace

std::vector<double> avms_merge(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeMismatchError("coefficient arrays differ in length");
  check_finite(a, "left");
  check_finite(b, "right");
  std::vector<double> out(a.size());
  merge_into(a, b, out);
  return out;
}

Image avms_merge(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height) {
    throw ShapeMismatchError("subimages differ in shape");
  }
  check_finite(a.pixels, "left");
  check_finite(b.pixels, "right");
  Image out(a.height, a.width);
  merge_into(a.pixels, b.pixels, out.pixels);
  return out;
}

Image fuse_subimage_pair(const Image& a, const Image& b, int inner_depth) {
  if (a.width != b.width || a.height != b.height) {
    throw ShapeMismatchError("subimages differ in shape");
  }
  LaplacianPyramid pa = build_laplacian(a, inner_depth);
  LaplacianPyramid pb = build_laplacian(b, inner_depth);
  LaplacianPyramid merged;
  merged.details.reserve(pa.details.size());
  for (std::size_t l = 0; l < pa.details.size(); ++l) {
    merged.details.push_back(avms_merge(pa.details[l], pb.details[l]));
  }
  merged.base = avms_merge(pa.base, pb.base);
  return reconstruct_laplacian(merged);
}

Image fill_missing(const RainGrid& g, const RainGrid& other, MissingFill policy) {
  Image out(g.height(), g.width());
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    if (g.valid_at(i)) {
      out.pixels[i] = g.value_at(i);
    } else if (policy == MissingFill::CrossFill && other.valid_at(i)) {
      out.pixels[i] = other.value_at(i);
    } else {
      out.pixels[i] = 0.0;
    }
  }
  return out;
}

Image produce_texture(const RainGrid& a, const RainGrid& b, const FusionConfig& cfg) {
  if (!a.meta().same_extent(b.meta())) throw ShapeMismatchError("input grids differ in extent");
  validate_config(cfg, a.width(), a.height());

  Image fa = fill_missing(a, b, cfg.missing_fill);
  Image fb = fill_missing(b, a, cfg.missing_fill);

  SteerablePyramid pa = build_steerable(fa, cfg.levels, cfg.orientations);
  SteerablePyramid pb = build_steerable(fb, cfg.levels, cfg.orientations);

  auto clamp_depth = [&](const Image& sub) {
    return std::min(cfg.inner_depth, max_levels(sub.width, sub.height));
  };

  SteerablePyramid fused;
  fused.source_width = pa.source_width;
  fused.source_height = pa.source_height;
  fused.orientations = pa.orientations;
  fused.highpass = fuse_subimage_pair(pa.highpass, pb.highpass, clamp_depth(pa.highpass));
  fused.bands.resize(pa.bands.size());
  for (std::size_t l = 0; l < pa.bands.size(); ++l) {
    fused.bands[l].reserve(pa.bands[l].size());
    for (std::size_t k = 0; k < pa.bands[l].size(); ++k) {
      const Image& sa = pa.bands[l][k];
      fused.bands[l].push_back(fuse_subimage_pair(sa, pb.bands[l][k], clamp_depth(sa)));
    }
  }
  fused.lowpass = fuse_subimage_pair(pa.lowpass, pb.lowpass, clamp_depth(pa.lowpass));

  return reconstruct_steerable(fused);
}

}  // namespace gapfuse
