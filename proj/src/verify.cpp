#include "gapfuse/verify.hpp"

#include <algorithm>
#include <cmath>

#include "gapfuse/errors.hpp"

namespace gapfuse {
namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ContingencyTable contingency(const RainGrid& truth, const RainGrid& pred, double threshold) {
  if (!truth.meta().same_extent(pred.meta())) {
    throw ShapeMismatchError("truth and prediction differ in extent");
  }
  if (!std::isfinite(threshold)) throw ParamError("detection threshold must be finite");

  ContingencyTable t;
  std::size_t n = truth.meta().pixel_count();
  for (std::size_t i = 0; i < n; ++i) {
    if (!truth.valid_at(i) || !pred.valid_at(i)) continue;
    bool obs = truth.value_at(i) > threshold;
    bool det = pred.value_at(i) > threshold;
    if (obs && det) {
      ++t.hits;
    } else if (obs) {
      ++t.misses;
    } else if (det) {
      ++t.false_alarms;
    } else {
      ++t.correct_negatives;
    }
  }
  return t;
}

std::optional<double> pod(const ContingencyTable& t) { return ratio(t.hits, t.hits + t.misses); }

std::optional<double> far(const ContingencyTable& t) {
  return ratio(t.false_alarms, t.hits + t.false_alarms);
}

std::optional<double> ts(const ContingencyTable& t) {
  return ratio(t.hits, t.hits + t.misses + t.false_alarms);
}

DetectionScores detection_scores(const ContingencyTable& t) {
  return DetectionScores{pod(t), far(t), ts(t)};
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw ParamError("empirical distribution needs at least one sample");
  for (double v : sorted_) {
    if (!std::isfinite(v)) throw ParamError("empirical distribution sample is not finite");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalDistribution::cdf(double x) const {
  auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.empty() || b.empty()) throw ParamError("both sample sets must be non-empty");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParamError("significance level must lie in (0, 1)");

  EmpiricalDistribution fa(std::vector<double>(a.begin(), a.end()));
  EmpiricalDistribution fb(std::vector<double>(b.begin(), b.end()));

  // Both CDFs are constant between jump points, so the supremum of their
  // difference is attained at a sample of one of the two sets.
  double d = 0.0;
  for (double x : fa.samples()) d = std::max(d, std::abs(fa.cdf(x) - fb.cdf(x)));
  for (double x : fb.samples()) d = std::max(d, std::abs(fa.cdf(x) - fb.cdf(x)));

  double n = static_cast<double>(a.size());
  double m = static_cast<double>(b.size());
  double c = std::sqrt(-std::log(alpha / 2.0) / 2.0);  // 1.3581 at alpha = 0.05
  double critical = c * std::sqrt((n + m) / (n * m));

  return KsResult{d, critical, d > critical, alpha};
}

std::vector<std::vector<double>> intensity_samples(std::span<const RainGrid> grids,
                                                   const Mask& mask) {
  if (grids.empty()) throw ParamError("need at least one grid to sample");
  std::size_t n = grids.front().meta().pixel_count();
  if (mask.size() != n) throw ShapeMismatchError("mask does not match grid dimensions");
  for (const RainGrid& g : grids) {
    if (!g.meta().same_extent(grids.front().meta())) {
      throw ShapeMismatchError("grids differ in extent");
    }
  }

  std::vector<std::vector<double>> out(grids.size());
  for (std::size_t gi = 0; gi < grids.size(); ++gi) {
    const RainGrid& g = grids[gi];
    auto& samples = out[gi];
    for (std::size_t i = 0; i < n; ++i) {
      if (!mask[i]) continue;
      if (!g.valid_at(i)) {
        throw ParamError("mask selects pixel " + std::to_string(i) +
                         " which is missing in grid " + std::to_string(gi));
      }
      samples.push_back(g.value_at(i));
    }
  }
  return out;
}

ScoreCdf score_cdf(std::span<const std::optional<double>> scores) {
  std::vector<double> defined;
  defined.reserve(scores.size());
  std::size_t excluded = 0;
  for (const auto& s : scores) {
    if (s.has_value()) {
      defined.push_back(*s);
    } else {
      ++excluded;
    }
  }
  if (defined.empty()) throw ParamError("every score in the ensemble is undefined");
  return ScoreCdf{EmpiricalDistribution(std::move(defined)), excluded};
}

Histogram histogram(std::span<const double> samples, double bin_width) {
  if (samples.empty()) throw ParamError("histogram needs at least one sample");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw ParamError("bin width must be positive");
  }
  auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  if (!std::isfinite(*lo_it) || !std::isfinite(*hi_it)) {
    throw ParamError("histogram sample is not finite");
  }

  Histogram h;
  h.bin_width = bin_width;
  h.origin = std::floor(*lo_it / bin_width) * bin_width;
  std::size_t bins = static_cast<std::size_t>(std::floor((*hi_it - h.origin) / bin_width)) + 1;
  h.counts.assign(bins, 0);
  for (double v : samples) {
    auto bin = static_cast<std::size_t>(std::floor((v - h.origin) / bin_width));
    if (bin >= bins) bin = bins - 1;  // guard the top edge against rounding
    ++h.counts[bin];
  }
  h.density.resize(bins);
  double norm = 1.0 / (static_cast<double>(samples.size()) * bin_width);
  for (std::size_t i = 0; i < bins; ++i) h.density[i] = static_cast<double>(h.counts[i]) * norm;
  return h;
}

}  // namespace gapfuse
