#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gapfuse/fusion.hpp"
#include "gapfuse/grid.hpp"
#include "gapfuse/synth.hpp"
#include "gapfuse/verify.hpp"

namespace gapfuse {

// Stable per-pair seed streams: distinct (index, stream) pairs map to
// distinct seeds for any base, so ensembles are reproducible and pairs are
// independent of how many workers ran them.
enum class SeedStream : std::uint64_t { Scene = 0, SwathA = 1, SwathB = 2, Angles = 3 };
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, SeedStream stream);

struct EnsembleConfig {
  std::uint64_t base_seed = 20260816;
  int pairs = 200;
  SceneParams scene;  // .seed is ignored; per-pair seeds come from base_seed
  SwathKind swath_kind = SwathKind::Band;
  double coverage_fraction = 0.6;
  double noise_sigma = 0.25;
  // band orientation: fixed for every swath when set, else drawn per swath
  std::optional<double> fixed_angle_deg;
  double event_threshold = 0.0;  // rain / no-rain cut for detection scores
  double ks_alpha = 0.05;
  FusionConfig fusion;
  int threads = 0;  // 0 = thread_budget()
};

// Detection scores for one product on one pair.
struct MethodScores {
  std::optional<double> pod, far, ts;
  double valid_fraction = 0.0;
};

struct PairRecord {
  int index = 0;
  std::uint64_t scene_seed = 0;
  MethodScores fused, interp, pyramid, input_a, input_b;
  bool missing_set_is_input_intersection = false;
};

struct MethodSummary {
  std::optional<double> median_pod, median_far, median_ts;
};

struct EnsembleResult {
  int requested = 0;
  int accepted = 0;
  int rejected = 0;
  std::vector<PairRecord> pairs;
  MethodSummary fused, interp, pyramid, input_a, input_b;
  // intensities pooled over pixels valid in truth, fused, interp and pyramid
  std::vector<double> pooled_truth, pooled_fused, pooled_interp, pooled_pyramid;
  std::optional<KsResult> ks_fused, ks_interp, ks_pyramid;
  // ordering checks reported by the comparison tables
  bool far_pyramid_gt_fused = false;
  bool pod_fused_ge_inputs = false;
  bool ts_fused_ge_inputs = false;
  bool ks_fused_lt_pyramid = false;
  bool missing_contract_all_pairs = false;
};

// Maps a gappy product onto a gap-free verification domain: missing pixels
// predict "no rain". Detection scores for products with different coverage
// are then comparable on the truth's own grid.
RainGrid on_truth_domain(const RainGrid& grid);

// Scene and swath parameters for one ensemble pair, fully determined by
// (cfg.base_seed, index). The synth command and run_ensemble share this, so
// a written ensemble matches the one the reproduce report scores.
struct PairInputs {
  SceneParams scene;
  SwathSpec swath_a, swath_b;
};
PairInputs derive_pair_inputs(const EnsembleConfig& cfg, int index);

// Generates `pairs` synthetic scenes, runs the fused pipeline and both
// baselines on each, and aggregates detection scores, pooled intensity
// samples and the qualitative ordering checks.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

}  // namespace gapfuse
