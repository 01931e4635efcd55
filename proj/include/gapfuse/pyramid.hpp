#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "gapfuse/grid.hpp"

namespace gapfuse {

// Frequency-domain masks sampled on an unshifted DFT grid (DC at index [0,0],
// row-major). `low` is the raised-cosine-in-log-frequency lowpass, `high` its
// quadrature complement sqrt(1 - low^2). For level stages `angular` holds the
// K oriented masks; they satisfy sum_k |angular[k]|^2 = 1 at every sample, so
// |high|^2 * sum_k |angular[k]|^2 + |low|^2 = 1 (the tiling identity).
struct StageMasks {
  int width = 0;
  int height = 0;
  std::vector<double> low;
  std::vector<double> high;
  std::vector<std::vector<std::complex<double>>> angular;
};

struct FilterBank {
  int levels = 0;
  int orientations = 0;
  StageMasks stage0;               // residual split on the input grid
  std::vector<StageMasks> stages;  // one per level, on successively halved grids

  static FilterBank create(int height, int width, int levels, int orientations);
};

// Immutable shared banks, cached per geometry. Safe to use from many threads.
std::shared_ptr<const FilterBank> filter_bank_for(int height, int width, int levels,
                                                  int orientations);

// Largest decomposition depth: every level grid must stay an integer size and
// the coarsest residual must keep at least 4 pixels per side.
int max_levels(int width, int height);

struct SteerablePyramid {
  int source_width = 0;
  int source_height = 0;
  int orientations = 0;
  Image highpass;                         // full-resolution residual
  std::vector<std::vector<Image>> bands;  // [level][orientation], level 0 finest
  Image lowpass;                          // coarsest residual

  int levels() const { return static_cast<int>(bands.size()); }

  // Sum of squared coefficients weighted by the subsampling measure (4^level),
  // which equals the squared L2 norm of the source image for this transform.
  double coefficient_energy() const;
};

SteerablePyramid build_steerable(const Image& x, int levels, int orientations);
Image reconstruct_steerable(const SteerablePyramid& p);

struct LaplacianPyramid {
  std::vector<Image> details;  // fine to coarse
  Image base;

  int depth() const { return static_cast<int>(details.size()); }
};

LaplacianPyramid build_laplacian(const Image& x, int depth);
Image reconstruct_laplacian(const LaplacianPyramid& p);

}  // namespace gapfuse
