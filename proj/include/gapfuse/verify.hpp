#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gapfuse/grid.hpp"

namespace gapfuse {

struct ContingencyTable {
  std::int64_t hits = 0;
  std::int64_t misses = 0;
  std::int64_t false_alarms = 0;
  std::int64_t correct_negatives = 0;

  std::int64_t total() const { return hits + misses + false_alarms + correct_negatives; }
};

// Classify jointly valid pixels; a rain event is intensity > threshold.
ContingencyTable contingency(const RainGrid& truth, const RainGrid& pred, double threshold = 0.0);

// Each score is undefined (nullopt) when its denominator is zero.
std::optional<double> pod(const ContingencyTable& t);
std::optional<double> far(const ContingencyTable& t);
std::optional<double> ts(const ContingencyTable& t);

struct DetectionScores {
  std::optional<double> pod;
  std::optional<double> far;
  std::optional<double> ts;
};

DetectionScores detection_scores(const ContingencyTable& t);

class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  // Right-continuous: fraction of samples <= x.
  double cdf(double x) const;
  const std::vector<double>& samples() const { return sorted_; }
  std::size_t size() const { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

struct KsResult {
  double statistic = 0.0;
  double critical = 0.0;
  bool reject = false;
  double alpha = 0.05;
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

// One sample list per grid, gathered at mask-true pixels in pixel order.
// Every selected pixel must be valid in every grid.
std::vector<std::vector<double>> intensity_samples(std::span<const RainGrid> grids,
                                                   const Mask& mask);

struct ScoreCdf {
  EmpiricalDistribution distribution;
  std::size_t excluded = 0;  // undefined scores dropped from the ensemble
};

ScoreCdf score_cdf(std::span<const std::optional<double>> scores);

struct Histogram {
  double bin_width = 0.0;
  double origin = 0.0;  // left edge of the first bin
  std::vector<std::int64_t> counts;
  std::vector<double> density;  // counts / (n * bin_width)

  double left_edge(std::size_t bin) const { return origin + bin_width * static_cast<double>(bin); }
};

Histogram histogram(std::span<const double> samples, double bin_width = 0.5);

}  // namespace gapfuse
