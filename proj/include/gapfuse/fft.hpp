#pragma once

#include <complex>
#include <vector>

#include "gapfuse/grid.hpp"

namespace gapfuse {

// Row-major 2-D spectrum. Forward transforms are unnormalized; inverse
// transforms carry the 1/(width*height) factor.
struct Spectrum {
  int width = 0;
  int height = 0;
  std::vector<std::complex<double>> bins;

  Spectrum() = default;
  Spectrum(int h, int w) : width(w), height(h), bins(static_cast<std::size_t>(w) * h) {}

  std::complex<double>& at(int row, int col) {
    return bins[static_cast<std::size_t>(row) * width + col];
  }
  const std::complex<double>& at(int row, int col) const {
    return bins[static_cast<std::size_t>(row) * width + col];
  }
};

// Signed frequency index for bin i of an n-point transform, in [-n/2, n/2).
inline int signed_freq_index(int i, int n) { return i < (n + 1) / 2 ? i : i - n; }

Spectrum fft2(const Image& img);

// Inverse transform that projects onto the reals. Imaginary residue is
// bounded by round-off for every spectrum this library produces; residue
// above 1e-9 (relative to the result magnitude) raises InternalError.
Image ifft2_real(const Spectrum& spec);

}  // namespace gapfuse
