#include "gapfuse/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>

#include "gapfuse/errors.hpp"
#include "gapfuse/fft.hpp"

namespace gapfuse {
namespace {

constexpr int kMinSubbandSize = 4;
constexpr double kPi = std::numbers::pi;

double ipow(double x, int n) {
  double acc = 1.0;
  for (double base = x; n > 0; n >>= 1, base *= base) {
    if (n & 1) acc *= base;
  }
  return acc;
}

// Raised cosine in log2 frequency: 1 below cutoff/2, 0 above cutoff.
double radial_low(double r, double cutoff) {
  if (r <= cutoff / 2.0) return 1.0;
  if (r >= cutoff) return 0.0;
  return std::cos(kPi / 2.0 * std::log2(2.0 * r / cutoff));
}

// Normalizer making sum_k A^2 cos^(2K-2)(theta - pi k / K) = 1; the sampled sum
// is exactly flat in theta because cos^(2K-2) has no harmonics above 2K-2.
double angular_norm(int orientations) {
  int m = orientations - 1;
  double log_a2 = 2.0 * m * std::numbers::ln2 + 2.0 * std::lgamma(m + 1.0) -
                  std::lgamma(2.0 * m + 1.0) - std::log(static_cast<double>(orientations));
  return std::exp(0.5 * log_a2);
}

StageMasks make_stage(int height, int width, double cutoff, int orientations) {
  StageMasks s;
  s.width = width;
  s.height = height;
  std::size_t n = static_cast<std::size_t>(width) * height;
  s.low.resize(n);
  s.high.resize(n);

  std::vector<double> theta(orientations > 0 ? n : 0);
  for (int iy = 0; iy < height; ++iy) {
    double fy = 2.0 * kPi * signed_freq_index(iy, height) / height;
    for (int ix = 0; ix < width; ++ix) {
      double fx = 2.0 * kPi * signed_freq_index(ix, width) / width;
      std::size_t i = static_cast<std::size_t>(iy) * width + ix;
      double low = radial_low(std::hypot(fx, fy), cutoff);
      s.low[i] = low;
      s.high[i] = std::sqrt(std::max(0.0, 1.0 - low * low));
      if (orientations > 0) theta[i] = std::atan2(fy, fx);
    }
  }

  if (orientations > 0) {
    int m = orientations - 1;
    double amp = angular_norm(orientations);
    // (-i)^m phase; with the conjugate applied on synthesis the analysis and
    // synthesis masks multiply to |.|^2, and the phase keeps each oriented
    // band real valued (the mask is Hermitian-symmetric by construction).
    static constexpr std::complex<double> kPhases[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
    std::complex<double> phase = kPhases[m % 4];
    s.angular.resize(orientations);
    for (int k = 0; k < orientations; ++k) {
      double center = kPi * k / orientations;
      auto& mask = s.angular[k];
      mask.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        mask[i] = phase * (amp * ipow(std::cos(theta[i] - center), m));
      }
    }
  }
  return s;
}

// Keep the central frequency quadrant. Value scale 1/4 preserves the sample
// semantics of the decimated field (a constant stays the same constant).
Spectrum crop_half(const Spectrum& s) {
  int oh = s.height / 2;
  int ow = s.width / 2;
  Spectrum out(oh, ow);
  for (int iy = 0; iy < oh; ++iy) {
    int sy = signed_freq_index(iy, oh);
    int src_y = sy < 0 ? sy + s.height : sy;
    for (int ix = 0; ix < ow; ++ix) {
      int sx = signed_freq_index(ix, ow);
      int src_x = sx < 0 ? sx + s.width : sx;
      out.at(iy, ix) = 0.25 * s.at(src_y, src_x);
    }
  }
  return out;
}

Spectrum pad_double(const Spectrum& s, int target_height, int target_width) {
  Spectrum out(target_height, target_width);
  for (int iy = 0; iy < s.height; ++iy) {
    int sy = signed_freq_index(iy, s.height);
    int dst_y = sy < 0 ? sy + target_height : sy;
    for (int ix = 0; ix < s.width; ++ix) {
      int sx = signed_freq_index(ix, s.width);
      int dst_x = sx < 0 ? sx + target_width : sx;
      out.at(dst_y, dst_x) = 4.0 * s.at(iy, ix);
    }
  }
  return out;
}

class BankCache {
 public:
  std::shared_ptr<const FilterBank> get(int height, int width, int levels, int orientations) {
    std::scoped_lock lock(mutex_);
    auto key = std::tuple(height, width, levels, orientations);
    auto it = banks_.find(key);
    if (it != banks_.end()) return it->second;
    auto bank =
        std::make_shared<const FilterBank>(FilterBank::create(height, width, levels, orientations));
    banks_.emplace(key, bank);
    return bank;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int>, std::shared_ptr<const FilterBank>> banks_;
};

void check_build_args(const Image& x, int levels, int orientations) {
  if (x.width < 1 || x.height < 1) throw ParamError("image dimensions must be positive");
  for (double v : x.pixels) {
    if (!std::isfinite(v)) throw ParamError("image contains non-finite values");
  }
  if (orientations < 1) throw ParamError("orientation count must be at least 1");
  int deepest = max_levels(x.width, x.height);
  if (levels < 0 || levels > deepest) {
    throw DepthError("requested " + std::to_string(levels) + " levels; grid " +
                     std::to_string(x.width) + "x" + std::to_string(x.height) + " supports at most " +
                     std::to_string(deepest));
  }
}

const double kReduceKernel[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16, 1.0 / 16};

int reflect(int i, int n) {
  while (i < 0 || i >= n) {
    if (i < 0) i = -1 - i;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

Image laplacian_reduce(const Image& x) {
  int oh = (x.height + 1) / 2;
  int ow = (x.width + 1) / 2;
  Image tmp(x.height, ow);
  for (int r = 0; r < x.height; ++r) {
    for (int c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) acc += kReduceKernel[t + 2] * x.at(r, reflect(2 * c + t, x.width));
      tmp.at(r, c) = acc;
    }
  }
  Image out(oh, ow);
  for (int r = 0; r < oh; ++r) {
    for (int c = 0; c < ow; ++c) {
      double acc = 0.0;
      for (int t = -2; t <= 2; ++t) acc += kReduceKernel[t + 2] * tmp.at(reflect(2 * r + t, x.height), c);
      out.at(r, c) = acc;
    }
  }
  return out;
}

// Zero-insert upsampling followed by the doubled kernel, written as the two
// direct phase formulas. Preserves constants exactly.
void expand_line(const double* src, int n, double* dst, int on, std::ptrdiff_t src_stride,
                 std::ptrdiff_t dst_stride) {
  for (int o = 0; o < on; ++o) {
    double v;
    if (o % 2 == 0) {
      int i = o / 2;
      v = (src[reflect(i - 1, n) * src_stride] + 6.0 * src[i * src_stride] +
           src[reflect(i + 1, n) * src_stride]) /
          8.0;
    } else {
      int i = (o - 1) / 2;
      v = (src[i * src_stride] + src[reflect(i + 1, n) * src_stride]) / 2.0;
    }
    dst[o * dst_stride] = v;
  }
}

Image laplacian_expand(const Image& x, int target_height, int target_width) {
  Image tmp(x.height, target_width);
  for (int r = 0; r < x.height; ++r) {
    expand_line(&x.pixels[static_cast<std::size_t>(r) * x.width], x.width,
                &tmp.pixels[static_cast<std::size_t>(r) * target_width], target_width, 1, 1);
  }
  Image out(target_height, target_width);
  for (int c = 0; c < target_width; ++c) {
    expand_line(&tmp.pixels[c], x.height, &out.pixels[c], target_height, target_width, target_width);
  }
  return out;
}

}  // namespace

int max_levels(int width, int height) {
  if (width < 1 || height < 1) return 0;
  int levels = 0;
  while (width % 2 == 0 && height % 2 == 0 && std::min(width, height) / 2 >= kMinSubbandSize) {
    width /= 2;
    height /= 2;
    ++levels;
  }
  return levels;
}

FilterBank FilterBank::create(int height, int width, int levels, int orientations) {
  FilterBank bank;
  bank.levels = levels;
  bank.orientations = orientations;
  bank.stage0 = make_stage(height, width, kPi / 2.0, 0);
  bank.stages.reserve(levels);
  for (int l = 0; l < levels; ++l) {
    bank.stages.push_back(make_stage(height >> l, width >> l, kPi / 4.0, orientations));
  }
  return bank;
}

std::shared_ptr<const FilterBank> filter_bank_for(int height, int width, int levels,
                                                  int orientations) {
  static BankCache cache;
  return cache.get(height, width, levels, orientations);
}

SteerablePyramid build_steerable(const Image& x, int levels, int orientations) {
  check_build_args(x, levels, orientations);
  auto bank = filter_bank_for(x.height, x.width, levels, orientations);

  Spectrum spec = fft2(x);
  std::size_t n = spec.bins.size();

  SteerablePyramid p;
  p.source_width = x.width;
  p.source_height = x.height;
  p.orientations = orientations;

  Spectrum hi(x.height, x.width);
  for (std::size_t i = 0; i < n; ++i) hi.bins[i] = spec.bins[i] * bank->stage0.high[i];
  p.highpass = ifft2_real(hi);

  Spectrum low(x.height, x.width);
  for (std::size_t i = 0; i < n; ++i) low.bins[i] = spec.bins[i] * bank->stage0.low[i];

  p.bands.resize(levels);
  for (int l = 0; l < levels; ++l) {
    const StageMasks& stage = bank->stages[l];
    std::size_t m = low.bins.size();
    p.bands[l].reserve(orientations);
    Spectrum band(low.height, low.width);
    for (int k = 0; k < orientations; ++k) {
      const auto& ang = stage.angular[k];
      for (std::size_t i = 0; i < m; ++i) band.bins[i] = low.bins[i] * stage.high[i] * ang[i];
      p.bands[l].push_back(ifft2_real(band));
    }
    for (std::size_t i = 0; i < m; ++i) low.bins[i] *= stage.low[i];
    low = crop_half(low);
  }
  p.lowpass = ifft2_real(low);
  return p;
}

Image reconstruct_steerable(const SteerablePyramid& p) {
  int levels = p.levels();
  if (p.source_width < 1 || p.source_height < 1 || p.orientations < 1) {
    throw ShapeMismatchError("pyramid metadata is not populated");
  }
  if (p.highpass.width != p.source_width || p.highpass.height != p.source_height) {
    throw ShapeMismatchError("highpass band does not match source dimensions");
  }
  for (int l = 0; l < levels; ++l) {
    if (static_cast<int>(p.bands[l].size()) != p.orientations) {
      throw ShapeMismatchError("level " + std::to_string(l) + " holds " +
                               std::to_string(p.bands[l].size()) + " bands, expected " +
                               std::to_string(p.orientations));
    }
    int ew = p.source_width >> l;
    int eh = p.source_height >> l;
    for (const Image& b : p.bands[l]) {
      if (b.width != ew || b.height != eh) {
        throw ShapeMismatchError("level " + std::to_string(l) + " band is " +
                                 std::to_string(b.width) + "x" + std::to_string(b.height) +
                                 ", expected " + std::to_string(ew) + "x" + std::to_string(eh));
      }
    }
  }
  if (p.lowpass.width != (p.source_width >> levels) ||
      p.lowpass.height != (p.source_height >> levels)) {
    throw ShapeMismatchError("lowpass residual does not match the level chain");
  }

  auto bank = filter_bank_for(p.source_height, p.source_width, levels, p.orientations);

  Spectrum acc = fft2(p.lowpass);
  for (int l = levels - 1; l >= 0; --l) {
    const StageMasks& stage = bank->stages[l];
    Spectrum up = pad_double(acc, stage.height, stage.width);
    std::size_t m = up.bins.size();
    for (std::size_t i = 0; i < m; ++i) up.bins[i] *= stage.low[i];
    for (int k = 0; k < p.orientations; ++k) {
      Spectrum band = fft2(p.bands[l][k]);
      const auto& ang = stage.angular[k];
      for (std::size_t i = 0; i < m; ++i) {
        up.bins[i] += band.bins[i] * stage.high[i] * std::conj(ang[i]);
      }
    }
    acc = std::move(up);
  }

  Spectrum hi = fft2(p.highpass);
  std::size_t n = acc.bins.size();
  for (std::size_t i = 0; i < n; ++i) {
    acc.bins[i] = acc.bins[i] * bank->stage0.low[i] + hi.bins[i] * bank->stage0.high[i];
  }
  return ifft2_real(acc);
}

double SteerablePyramid::coefficient_energy() const {
  auto sum_sq = [](const Image& img) {
    double s = 0.0;
    for (double v : img.pixels) s += v * v;
    return s;
  };
  double total = sum_sq(highpass);
  double weight = 1.0;
  for (const auto& level : bands) {
    for (const Image& b : level) total += weight * sum_sq(b);
    weight *= 4.0;
  }
  total += weight * sum_sq(lowpass);
  return total;
}

LaplacianPyramid build_laplacian(const Image& x, int depth) {
  int deepest = max_levels(x.width, x.height);
  if (depth < 0 || depth > deepest) {
    throw DepthError("requested depth " + std::to_string(depth) + "; subimage " +
                     std::to_string(x.width) + "x" + std::to_string(x.height) +
                     " supports at most " + std::to_string(deepest));
  }
  LaplacianPyramid p;
  p.details.reserve(depth);
  Image cur = x;
  for (int l = 0; l < depth; ++l) {
    Image next = laplacian_reduce(cur);
    Image approx = laplacian_expand(next, cur.height, cur.width);
    Image detail(cur.height, cur.width);
    for (std::size_t i = 0; i < cur.pixels.size(); ++i) {
      detail.pixels[i] = cur.pixels[i] - approx.pixels[i];
    }
    p.details.push_back(std::move(detail));
    cur = std::move(next);
  }
  p.base = std::move(cur);
  return p;
}

Image reconstruct_laplacian(const LaplacianPyramid& p) {
  Image cur = p.base;
  for (int l = p.depth() - 1; l >= 0; --l) {
    const Image& detail = p.details[l];
    if ((detail.height + 1) / 2 != cur.height || (detail.width + 1) / 2 != cur.width) {
      throw ShapeMismatchError("detail level " + std::to_string(l) +
                               " does not chain onto the coarser level");
    }
    Image up = laplacian_expand(cur, detail.height, detail.width);
    for (std::size_t i = 0; i < up.pixels.size(); ++i) up.pixels[i] += detail.pixels[i];
    cur = std::move(up);
  }
  return cur;
}

}  // namespace gapfuse
