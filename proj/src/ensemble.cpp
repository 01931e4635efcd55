#include "gapfuse/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gapfuse/compose.hpp"
#include "gapfuse/errors.hpp"
#include "gapfuse/parallel.hpp"
#include "gapfuse/shape.hpp"

namespace gapfuse {

namespace {

// splitmix64 finalizer; full-period mixing of the combined key
std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::optional<double> median_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

MethodScores score_product(const RainGrid& truth, const RainGrid& product, double threshold) {
  MethodScores out;
  DetectionScores s = detection_scores(contingency(truth, on_truth_domain(product), threshold));
  out.pod = s.pod;
  out.far = s.far;
  out.ts = s.ts;
  out.valid_fraction = static_cast<double>(valid_pixel_count(product)) /
                       static_cast<double>(product.meta().pixel_count());
  return out;
}

struct PairOutput {
  bool accepted = false;
  PairRecord record;
  std::vector<double> truth_samples, fused_samples, interp_samples, pyramid_samples;
};

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index, SeedStream stream) {
  // index * odd constant is injective mod 2^64; stream offsets stay below it
  return mix64(base + index * 0x9e3779b97f4a7c15ull + static_cast<std::uint64_t>(stream) + 1);
}

RainGrid on_truth_domain(const RainGrid& grid) {
  std::vector<double> values(grid.meta().pixel_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = grid.valid_at(i) ? grid.value_at(i) : 0.0;
  }
  return RainGrid(grid.meta(), std::move(values), Mask(grid.meta().pixel_count(), 1));
}

PairInputs derive_pair_inputs(const EnsembleConfig& cfg, int index) {
  auto idx = static_cast<std::uint64_t>(index);
  PairInputs in;
  in.scene = cfg.scene;
  in.scene.seed = derive_seed(cfg.base_seed, idx, SeedStream::Scene);

  in.swath_a.kind = in.swath_b.kind = cfg.swath_kind;
  in.swath_a.coverage_fraction = in.swath_b.coverage_fraction = cfg.coverage_fraction;
  in.swath_a.noise_sigma = in.swath_b.noise_sigma = cfg.noise_sigma;
  in.swath_a.seed = derive_seed(cfg.base_seed, idx, SeedStream::SwathA);
  in.swath_b.seed = derive_seed(cfg.base_seed, idx, SeedStream::SwathB);
  if (cfg.fixed_angle_deg) {
    in.swath_a.angle_deg = in.swath_b.angle_deg = *cfg.fixed_angle_deg;
  } else {
    std::mt19937_64 rng(derive_seed(cfg.base_seed, idx, SeedStream::Angles));
    std::uniform_real_distribution<double> angle(0.0, 180.0);
    in.swath_a.angle_deg = angle(rng);
    in.swath_b.angle_deg = angle(rng);
  }
  return in;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  if (cfg.pairs < 0) throw ParamError("ensemble pair count must be non-negative");
  if (!(cfg.coverage_fraction > 0.0) || cfg.coverage_fraction > 1.0) {
    throw ParamError("ensemble coverage fraction must lie in (0, 1]");
  }
  if (!(cfg.noise_sigma >= 0.0) || !std::isfinite(cfg.noise_sigma)) {
    throw ParamError("ensemble noise sigma must be non-negative");
  }
  if (!(cfg.event_threshold >= 0.0)) throw ParamError("event threshold must be non-negative");
  if (!(cfg.ks_alpha > 0.0) || !(cfg.ks_alpha < 1.0)) {
    throw ParamError("KS alpha must lie in (0, 1)");
  }

  std::vector<PairOutput> outputs(static_cast<std::size_t>(cfg.pairs));
  parallel_for(
      0, cfg.pairs,
      [&](int i) {
        PairOutput& out = outputs[static_cast<std::size_t>(i)];
        PairInputs in = derive_pair_inputs(cfg, i);
        std::optional<PairSample> sample = gen_pair(in.scene, in.swath_a, in.swath_b);
        if (!sample) return;
        out.accepted = true;
        out.record.index = i;
        out.record.scene_seed = in.scene.seed;

        RainGrid fused = run_pipeline(sample->a, sample->b, cfg.fusion);
        RainGrid interp = baseline_interpolation(sample->a, sample->b);
        RainGrid pyramid = baseline_pyramid(sample->a, sample->b, cfg.fusion);

        out.record.fused = score_product(sample->truth, fused, cfg.event_threshold);
        out.record.interp = score_product(sample->truth, interp, cfg.event_threshold);
        out.record.pyramid = score_product(sample->truth, pyramid, cfg.event_threshold);
        out.record.input_a = score_product(sample->truth, sample->a, cfg.event_threshold);
        out.record.input_b = score_product(sample->truth, sample->b, cfg.event_threshold);

        bool contract = true;
        for (std::size_t j = 0; j < fused.valid().size(); ++j) {
          bool both_missing = !sample->a.valid_at(j) && !sample->b.valid_at(j);
          if (fused.valid_at(j) == !both_missing) continue;
          contract = false;
          break;
        }
        out.record.missing_set_is_input_intersection = contract;

        for (std::size_t j = 0; j < fused.valid().size(); ++j) {
          if (!sample->truth.valid_at(j) || !fused.valid_at(j) || !interp.valid_at(j) ||
              !pyramid.valid_at(j)) {
            continue;
          }
          out.truth_samples.push_back(sample->truth.value_at(j));
          out.fused_samples.push_back(fused.value_at(j));
          out.interp_samples.push_back(interp.value_at(j));
          out.pyramid_samples.push_back(pyramid.value_at(j));
        }
      },
      cfg.threads);

  EnsembleResult result;
  result.requested = cfg.pairs;
  std::vector<double> pod_f, far_f, ts_f, pod_i, far_i, ts_i, pod_p, far_p, ts_p;
  std::vector<double> pod_a, far_a, ts_a, pod_b, far_b, ts_b;
  result.missing_contract_all_pairs = true;
  for (PairOutput& out : outputs) {
    if (!out.accepted) {
      ++result.rejected;
      continue;
    }
    ++result.accepted;
    auto push = [](std::vector<double>& pod, std::vector<double>& far, std::vector<double>& ts,
                   const MethodScores& s) {
      if (s.pod) pod.push_back(*s.pod);
      if (s.far) far.push_back(*s.far);
      if (s.ts) ts.push_back(*s.ts);
    };
    push(pod_f, far_f, ts_f, out.record.fused);
    push(pod_i, far_i, ts_i, out.record.interp);
    push(pod_p, far_p, ts_p, out.record.pyramid);
    push(pod_a, far_a, ts_a, out.record.input_a);
    push(pod_b, far_b, ts_b, out.record.input_b);
    if (!out.record.missing_set_is_input_intersection) {
      result.missing_contract_all_pairs = false;
    }
    auto append = [](std::vector<double>& dst, std::vector<double>& src) {
      dst.insert(dst.end(), src.begin(), src.end());
      src.clear();
      src.shrink_to_fit();
    };
    append(result.pooled_truth, out.truth_samples);
    append(result.pooled_fused, out.fused_samples);
    append(result.pooled_interp, out.interp_samples);
    append(result.pooled_pyramid, out.pyramid_samples);
    result.pairs.push_back(std::move(out.record));
  }
  if (result.accepted == 0 && cfg.pairs > 0) {
    // every pair fell below the valid-pixel floor; summaries stay empty
    return result;
  }

  result.fused = {median_of(pod_f), median_of(far_f), median_of(ts_f)};
  result.interp = {median_of(pod_i), median_of(far_i), median_of(ts_i)};
  result.pyramid = {median_of(pod_p), median_of(far_p), median_of(ts_p)};
  result.input_a = {median_of(pod_a), median_of(far_a), median_of(ts_a)};
  result.input_b = {median_of(pod_b), median_of(far_b), median_of(ts_b)};

  if (!result.pooled_truth.empty()) {
    result.ks_fused = ks_two_sample(result.pooled_fused, result.pooled_truth, cfg.ks_alpha);
    result.ks_interp = ks_two_sample(result.pooled_interp, result.pooled_truth, cfg.ks_alpha);
    result.ks_pyramid = ks_two_sample(result.pooled_pyramid, result.pooled_truth, cfg.ks_alpha);
  }

  auto ge = [](const std::optional<double>& x, const std::optional<double>& y) {
    return x && y && *x >= *y;
  };
  auto gt = [](const std::optional<double>& x, const std::optional<double>& y) {
    return x && y && *x > *y;
  };
  result.far_pyramid_gt_fused = gt(result.pyramid.median_far, result.fused.median_far);
  result.pod_fused_ge_inputs = ge(result.fused.median_pod, result.input_a.median_pod) &&
                               ge(result.fused.median_pod, result.input_b.median_pod);
  result.ts_fused_ge_inputs = ge(result.fused.median_ts, result.input_a.median_ts) &&
                              ge(result.fused.median_ts, result.input_b.median_ts);
  result.ks_fused_lt_pyramid = result.ks_fused && result.ks_pyramid &&
                               result.ks_fused->statistic < result.ks_pyramid->statistic;
  return result;
}

}  // namespace gapfuse
