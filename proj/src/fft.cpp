#include "gapfuse/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace gapfuse {
namespace {

// FFTW plan creation is not thread safe; execution through fftw_execute_dft
// on caller-owned buffers is. Plans are cached per (height, width, sign) and
// created against scratch buffers with the alignment fftw_malloc guarantees,
// so they can be replayed on any fftw_malloc'd buffer of the same size.
class PlanCache {
 public:
  fftw_plan get(int height, int width, int sign) {
    std::scoped_lock lock(mutex_);
    auto key = std::tuple(height, width, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;

    std::size_t n = static_cast<std::size_t>(height) * width;
    fftw_complex* in = fftw_alloc_complex(n);
    fftw_complex* out = fftw_alloc_complex(n);
    fftw_plan plan = fftw_plan_dft_2d(height, width, in, out, sign, FFTW_ESTIMATE);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

void execute(int height, int width, int sign, const std::complex<double>* in,
             std::complex<double>* out) {
  std::size_t n = static_cast<std::size_t>(height) * width;
  FftwBuffer bin(n), bout(n);
  // fftw_complex and std::complex<double> are layout-compatible; staging
  // through fftw-allocated buffers keeps the plan's alignment assumptions.
  std::copy(in, in + n, reinterpret_cast<std::complex<double>*>(bin.data));
  fftw_plan plan = plan_cache().get(height, width, sign);
  fftw_execute_dft(plan, bin.data, bout.data);
  const auto* staged = reinterpret_cast<const std::complex<double>*>(bout.data);
  std::copy(staged, staged + n, out);
}

}  // namespace

Spectrum fft2(const Image& img) {
  Spectrum spec(img.height, img.width);
  std::vector<std::complex<double>> in(img.pixels.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = img.pixels[i];
  execute(img.height, img.width, FFTW_FORWARD, in.data(), spec.bins.data());
  return spec;
}

Image ifft2_real(const Spectrum& spec) {
  std::size_t n = spec.bins.size();
  std::vector<std::complex<double>> out(n);
  execute(spec.height, spec.width, FFTW_BACKWARD, spec.bins.data(), out.data());

  Image img(spec.height, spec.width);
  double scale = 1.0 / static_cast<double>(n);
  double max_real = 0.0;
  double max_imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double re = out[i].real() * scale;
    img.pixels[i] = re;
    max_real = std::max(max_real, std::abs(re));
    max_imag = std::max(max_imag, std::abs(out[i].imag()) * scale);
  }
  if (max_imag > 1e-9 * std::max(1.0, max_real)) {
    throw InternalError("inverse transform left imaginary residue " + std::to_string(max_imag) +
                        "; spectrum was not conjugate symmetric");
  }
  return img;
}

}  // namespace gapfuse
