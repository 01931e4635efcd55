#include "gapfuse/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gapfuse/compose.hpp"
#include "gapfuse/ensemble.hpp"
#include "gapfuse/errors.hpp"
#include "gapfuse/io.hpp"
#include "gapfuse/parallel.hpp"
#include "gapfuse/synth.hpp"
#include "gapfuse/verify.hpp"

namespace gapfuse::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? format_double(*v) : "NA"; }

std::string pair_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pair%04d", index);
  return buf;
}

void write_manifest(const fs::path& dir, json j) {
  j["timestamp"] = iso_timestamp();
  write_text_atomic(j.dump(2) + "\n", dir / "manifest.json");
}

MissingFill parse_fill(const std::string& name) {
  return name == "cross" ? MissingFill::CrossFill : MissingFill::Zero;
}

SwathKind parse_swath_kind(const std::string& name) {
  if (name == "disk") return SwathKind::Disk;
  if (name == "blocks") return SwathKind::RandomBlocks;
  return SwathKind::Band;
}

// ---------------------------------------------------------------- fuse

struct FuseFlags {
  std::string input_a, input_b, output;
  int levels = 4;
  int orientations = 16;
  int inner_depth = 2;
  double threshold = 0.0;
  std::string method = "fused";
  std::string fill = "zero";
};

int do_fuse(const FuseFlags& f, std::ostream& out) {
  RainGrid a = read_grid(f.input_a);
  RainGrid b = read_grid(f.input_b);
  if (!a.meta().same_extent(b.meta())) {
    throw ShapeMismatchError(f.input_a + " and " + f.input_b + " differ in dimensions (" +
                             std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                             " vs " + std::to_string(b.width()) + "x" +
                             std::to_string(b.height()) + ")");
  }
  FusionConfig cfg;
  cfg.levels = f.levels;
  cfg.orientations = f.orientations;
  cfg.inner_depth = f.inner_depth;
  cfg.rain_threshold = f.threshold;
  cfg.missing_fill = parse_fill(f.fill);

  RainGrid product = [&] {
    try {
      if (f.method == "interp") return baseline_interpolation(a, b);
      if (f.method == "pyramid") return baseline_pyramid(a, b, cfg);
      return run_pipeline(a, b, cfg);
    } catch (const DepthError& e) {
      throw DepthError(f.input_a + ", " + f.input_b + ": " + e.what());
    }
  }();
  write_grid(product, f.output);
  out << "wrote " << f.output << " (" << f.method << ", " << valid_pixel_count(product) << " of "
      << product.meta().pixel_count() << " pixels valid)\n";
  return 0;
}

// ---------------------------------------------------------------- eval

struct EvalFlags {
  std::string truth;
  std::vector<std::string> preds;
  std::string out_dir;
  double alpha = 0.05;
  double threshold = 0.0;
  double bin_width = 0.5;
};

void append_score_cdf_rows(std::string& body, const std::string& label,
                           const std::string& metric,
                           const std::vector<std::optional<double>>& scores) {
  bool any = std::any_of(scores.begin(), scores.end(), [](const auto& s) { return s.has_value(); });
  if (!any) return;  // a metric undefined for every image contributes no curve
  ScoreCdf sc = score_cdf(scores);
  const auto& samples = sc.distribution.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;  // one row per value
    body += label + "\t" + metric + "\t" + format_double(samples[i]) + "\t" +
            format_double(sc.distribution.cdf(samples[i])) + "\n";
  }
}

// Empirical CDFs of each product's pooled intensities on a shared value grid.
void write_intensity_cdf(const fs::path& dir, const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& sets) {
  std::string body = "value";
  for (const auto& n : names) body += "\t" + n;
  body += "\n";
  double vmax = 0.0;
  for (const auto& s : sets) {
    for (double v : s) vmax = std::max(vmax, v);
  }
  bool empty = true;
  for (const auto& s : sets) {
    if (!s.empty()) empty = false;
  }
  if (!empty) {
    std::vector<EmpiricalDistribution> dists;
    dists.reserve(sets.size());
    for (const auto& s : sets) dists.emplace_back(s);
    const int kSteps = 512;
    for (int k = 0; k < kSteps; ++k) {
      double v = vmax * static_cast<double>(k) / (kSteps - 1);
      body += format_double(v);
      for (const auto& d : dists) body += "\t" + format_double(d.cdf(v));
      body += "\n";
    }
  }
  write_text_atomic(body, dir / "intensity_cdf.tsv");
}

void write_intensity_pdf(const fs::path& dir, const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& sets, double bin_width) {
  std::string body = "product\tbin_left\tbin_right\tcount\tdensity\n";
  for (std::size_t p = 0; p < names.size(); ++p) {
    if (sets[p].empty()) continue;
    Histogram h = histogram(sets[p], bin_width);
    for (std::size_t bin = 0; bin < h.counts.size(); ++bin) {
      body += names[p] + "\t" + format_double(h.left_edge(bin)) + "\t" +
              format_double(h.left_edge(bin + 1)) + "\t" + std::to_string(h.counts[bin]) + "\t" +
              format_double(h.density[bin]) + "\n";
    }
  }
  write_text_atomic(body, dir / "intensity_pdf.tsv");
}

int do_eval(const EvalFlags& f, std::ostream& out) {
  if (!(f.alpha > 0.0) || !(f.alpha < 1.0)) throw ParamError("--alpha must lie in (0, 1)");
  if (!(f.threshold >= 0.0)) throw ParamError("--threshold must be non-negative");
  if (!(f.bin_width > 0.0)) throw ParamError("--bin-width must be positive");

  RainGrid truth = read_grid(f.truth);
  std::vector<RainGrid> preds;
  preds.reserve(f.preds.size());
  for (const auto& p : f.preds) {
    RainGrid g = read_grid(p);
    if (!g.meta().same_extent(truth.meta())) {
      throw ShapeMismatchError(p + " and " + f.truth + " differ in dimensions (" +
                               std::to_string(g.width()) + "x" + std::to_string(g.height()) +
                               " vs " + std::to_string(truth.width()) + "x" +
                               std::to_string(truth.height()) + ")");
    }
    preds.push_back(std::move(g));
  }

  fs::path dir(f.out_dir);
  fs::create_directories(dir);

  // detection scores: each product mapped onto the truth domain, so coverage
  // differences show up as misses instead of shrinking the scored region
  std::string scores =
      "product\tfile\tvalid_fraction\thits\tmisses\tfalse_alarms\tcorrect_negatives\tpod\tfar\tts\n";
  std::vector<std::optional<double>> pods, fars, tss;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    ContingencyTable t = contingency(truth, on_truth_domain(preds[i]), f.threshold);
    DetectionScores s = detection_scores(t);
    double vf = static_cast<double>(valid_pixel_count(preds[i])) /
                static_cast<double>(preds[i].meta().pixel_count());
    scores += "pred" + std::to_string(i + 1) + "\t" + f.preds[i] + "\t" + format_double(vf) + "\t" +
              std::to_string(t.hits) + "\t" + std::to_string(t.misses) + "\t" +
              std::to_string(t.false_alarms) + "\t" + std::to_string(t.correct_negatives) + "\t" +
              fmt_opt(s.pod) + "\t" + fmt_opt(s.far) + "\t" + fmt_opt(s.ts) + "\n";
    pods.push_back(s.pod);
    fars.push_back(s.far);
    tss.push_back(s.ts);
  }
  write_text_atomic(scores, dir / "scores.tsv");

  std::string cdf_body = "product\tmetric\tvalue\tcdf\n";
  append_score_cdf_rows(cdf_body, "pred", "pod", pods);
  append_score_cdf_rows(cdf_body, "pred", "far", fars);
  append_score_cdf_rows(cdf_body, "pred", "ts", tss);
  write_text_atomic(cdf_body, dir / "score_cdf.tsv");
  auto count_undefined = [](const std::vector<std::optional<double>>& v) {
    return std::count_if(v.begin(), v.end(), [](const auto& s) { return !s.has_value(); });
  };
  if (auto n = count_undefined(fars)) out << "note: far undefined for " << n << " product(s)\n";
  if (auto n = count_undefined(pods)) out << "note: pod undefined for " << n << " product(s)\n";

  // distribution comparison on the common-valid mask
  std::vector<RainGrid> all;
  all.reserve(preds.size() + 1);
  all.push_back(truth);
  for (const auto& p : preds) all.push_back(p);
  Mask common = common_valid_mask(all);
  std::size_t common_count = 0;
  for (auto m : common) common_count += m;

  std::vector<std::string> names{"truth"};
  for (std::size_t i = 0; i < preds.size(); ++i) names.push_back("pred" + std::to_string(i + 1));

  std::string ks_body = "product\tfile\tn_product\tn_truth\tstatistic\tcritical\talpha\treject\tnote\n";
  if (common_count == 0) {
    out << "note: common-valid mask is empty; KS and intensity comparisons skipped\n";
    for (std::size_t i = 0; i < preds.size(); ++i) {
      ks_body += "pred" + std::to_string(i + 1) + "\t" + f.preds[i] +
                 "\tNA\tNA\tNA\tNA\t" + format_double(f.alpha) +
                 "\tNA\tskipped: empty common-valid mask\n";
    }
    write_text_atomic(ks_body, dir / "ks.tsv");
    write_intensity_cdf(dir, names, std::vector<std::vector<double>>(names.size()));
    write_intensity_pdf(dir, names, std::vector<std::vector<double>>(names.size()), f.bin_width);
  } else {
    std::vector<std::vector<double>> samples = intensity_samples(all, common);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      KsResult ks = ks_two_sample(samples[i + 1], samples[0], f.alpha);
      ks_body += "pred" + std::to_string(i + 1) + "\t" + f.preds[i] + "\t" +
                 std::to_string(samples[i + 1].size()) + "\t" + std::to_string(samples[0].size()) +
                 "\t" + format_double(ks.statistic) + "\t" + format_double(ks.critical) + "\t" +
                 format_double(ks.alpha) + "\t" + (ks.reject ? "true" : "false") + "\t\n";
    }
    write_text_atomic(ks_body, dir / "ks.tsv");
    write_intensity_cdf(dir, names, samples);
    write_intensity_pdf(dir, names, samples, f.bin_width);
  }

  json manifest;
  manifest["command"] = "eval";
  manifest["config"] = {{"alpha", f.alpha}, {"threshold", f.threshold}, {"bin_width", f.bin_width}};
  manifest["inputs"] = {{"truth", f.truth}, {"predictions", f.preds}};
  manifest["outputs"] = {"scores.tsv", "score_cdf.tsv", "intensity_cdf.tsv", "intensity_pdf.tsv",
                         "ks.tsv"};
  write_manifest(dir, manifest);

  out << "evaluated " << preds.size() << " product(s) against " << f.truth << " -> " << f.out_dir
      << "\n";
  return 0;
}

// ---------------------------------------------------------------- synth

struct SynthFlags {
  std::string out_dir;
  int pairs = 1;
  std::uint64_t seed = 20260816;
  int width = 64;
  int height = 64;
  double cell_count = 6.0;
  double cell_scale = 6.0;
  double intensity_scale = 4.0;
  double wet_fraction = 0.3;
  std::string swath = "band";
  double coverage = 0.6;
  double noise_sigma = 0.25;
  double angle = 0.0;
  bool angle_set = false;
};

EnsembleConfig ensemble_config_from(const SynthFlags& f) {
  EnsembleConfig cfg;
  cfg.base_seed = f.seed;
  cfg.pairs = f.pairs;
  cfg.scene.width = f.width;
  cfg.scene.height = f.height;
  cfg.scene.cell_count = f.cell_count;
  cfg.scene.cell_scale = f.cell_scale;
  cfg.scene.intensity_scale = f.intensity_scale;
  cfg.scene.wet_fraction_target = f.wet_fraction;
  cfg.swath_kind = parse_swath_kind(f.swath);
  cfg.coverage_fraction = f.coverage;
  cfg.noise_sigma = f.noise_sigma;
  if (f.angle_set) cfg.fixed_angle_deg = f.angle;
  return cfg;
}

json scene_swath_config_json(const SynthFlags& f) {
  json cfg = {{"pairs", f.pairs},
              {"seed", f.seed},
              {"width", f.width},
              {"height", f.height},
              {"cell_count", f.cell_count},
              {"cell_scale", f.cell_scale},
              {"intensity_scale", f.intensity_scale},
              {"wet_fraction", f.wet_fraction},
              {"swath", f.swath},
              {"coverage", f.coverage},
              {"noise_sigma", f.noise_sigma}};
  if (f.angle_set) {
    cfg["angle"] = f.angle;
  } else {
    cfg["angle"] = nullptr;
  }
  return cfg;
}

int do_synth(const SynthFlags& f, std::ostream& out) {
  if (f.pairs < 0) throw ParamError("--pairs must be non-negative");
  EnsembleConfig cfg = ensemble_config_from(f);

  fs::path dir(f.out_dir);
  fs::create_directories(dir);

  json pair_rows = json::array();
  std::vector<std::string> outputs;
  int accepted = 0;
  for (int i = 0; i < f.pairs; ++i) {
    PairInputs in = derive_pair_inputs(cfg, i);
    std::optional<PairSample> sample = gen_pair(in.scene, in.swath_a, in.swath_b);
    json row = {{"index", i},
                {"scene_seed", in.scene.seed},
                {"swath_a_seed", in.swath_a.seed},
                {"swath_b_seed", in.swath_b.seed},
                {"angle_a_deg", in.swath_a.angle_deg},
                {"angle_b_deg", in.swath_b.angle_deg},
                {"accepted", sample.has_value()}};
    if (sample) {
      ++accepted;
      std::string stem = pair_stem(i);
      std::string truth_name = stem + ".truth.rg";
      std::string a_name = stem + ".a.rg";
      std::string b_name = stem + ".b.rg";
      write_grid(sample->truth, dir / truth_name);
      write_grid(sample->a, dir / a_name);
      write_grid(sample->b, dir / b_name);
      row["files"] = {{"truth", truth_name}, {"a", a_name}, {"b", b_name}};
      outputs.push_back(truth_name);
      outputs.push_back(a_name);
      outputs.push_back(b_name);
    } else {
      row["files"] = nullptr;
    }
    pair_rows.push_back(std::move(row));
  }

  json manifest;
  manifest["command"] = "synth";
  manifest["config"] = scene_swath_config_json(f);
  manifest["pairs_requested"] = f.pairs;
  manifest["pairs_accepted"] = accepted;
  manifest["pairs"] = std::move(pair_rows);
  manifest["outputs"] = outputs;
  write_manifest(dir, manifest);

  out << "accepted " << accepted << " of " << f.pairs << " pair(s) -> " << f.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceFlags {
  std::string out_dir;
  std::uint64_t seed = 20260816;
  int pairs = 200;
  int threads = 0;
};

std::string check_row(const std::string& name, bool pass, const std::string& detail) {
  return name + "\t" + (pass ? "PASS" : "FAIL") + "\t" + detail + "\n";
}

int do_reproduce(const ReproduceFlags& f, std::ostream& out) {
  if (f.pairs < 0) throw ParamError("--pairs must be non-negative");
  EnsembleConfig cfg;
  cfg.base_seed = f.seed;
  cfg.pairs = f.pairs;
  cfg.threads = f.threads > 0 ? std::min(f.threads, thread_budget()) : 0;

  EnsembleResult res = run_ensemble(cfg);

  fs::path dir(f.out_dir);
  fs::create_directories(dir);

  const char* method_names[] = {"fused", "interp", "pyramid", "input_a", "input_b"};
  auto method_of = [](const PairRecord& r, int m) -> const MethodScores& {
    switch (m) {
      case 0: return r.fused;
      case 1: return r.interp;
      case 2: return r.pyramid;
      case 3: return r.input_a;
      default: return r.input_b;
    }
  };

  std::string pair_scores = "pair\tscene_seed\tproduct\tvalid_fraction\tpod\tfar\tts\n";
  for (const PairRecord& r : res.pairs) {
    for (int m = 0; m < 5; ++m) {
      const MethodScores& s = method_of(r, m);
      pair_scores += std::to_string(r.index) + "\t" + std::to_string(r.scene_seed) + "\t" +
                     method_names[m] + "\t" + format_double(s.valid_fraction) + "\t" +
                     fmt_opt(s.pod) + "\t" + fmt_opt(s.far) + "\t" + fmt_opt(s.ts) + "\n";
    }
  }
  write_text_atomic(pair_scores, dir / "pair_scores.tsv");

  const MethodSummary* summaries[] = {&res.fused, &res.interp, &res.pyramid, &res.input_a,
                                      &res.input_b};
  std::string summary = "product\tmedian_pod\tmedian_far\tmedian_ts\n";
  for (int m = 0; m < 5; ++m) {
    summary += std::string(method_names[m]) + "\t" + fmt_opt(summaries[m]->median_pod) + "\t" +
               fmt_opt(summaries[m]->median_far) + "\t" + fmt_opt(summaries[m]->median_ts) + "\n";
  }
  write_text_atomic(summary, dir / "summary.tsv");

  std::string cdf_body = "product\tmetric\tvalue\tcdf\n";
  for (int m = 0; m < 5; ++m) {
    std::vector<std::optional<double>> pods, fars, tss;
    for (const PairRecord& r : res.pairs) {
      pods.push_back(method_of(r, m).pod);
      fars.push_back(method_of(r, m).far);
      tss.push_back(method_of(r, m).ts);
    }
    append_score_cdf_rows(cdf_body, method_names[m], "pod", pods);
    append_score_cdf_rows(cdf_body, method_names[m], "far", fars);
    append_score_cdf_rows(cdf_body, method_names[m], "ts", tss);
  }
  write_text_atomic(cdf_body, dir / "score_cdf.tsv");

  std::vector<std::string> names{"truth", "fused", "interp", "pyramid"};
  std::vector<std::vector<double>> sets{res.pooled_truth, res.pooled_fused, res.pooled_interp,
                                        res.pooled_pyramid};
  write_intensity_cdf(dir, names, sets);
  write_intensity_pdf(dir, names, sets, 0.5);

  std::string ks_body = "product\tn_product\tn_truth\tstatistic\tcritical\talpha\treject\n";
  const std::optional<KsResult>* ks_list[] = {&res.ks_fused, &res.ks_interp, &res.ks_pyramid};
  const char* ks_names[] = {"fused", "interp", "pyramid"};
  for (int m = 0; m < 3; ++m) {
    if (!ks_list[m]->has_value()) continue;
    const KsResult& ks = **ks_list[m];
    ks_body += std::string(ks_names[m]) + "\t" + std::to_string(res.pooled_truth.size()) + "\t" +
               std::to_string(res.pooled_truth.size()) + "\t" + format_double(ks.statistic) +
               "\t" + format_double(ks.critical) + "\t" + format_double(ks.alpha) + "\t" +
               (ks.reject ? "true" : "false") + "\n";
  }
  write_text_atomic(ks_body, dir / "ks.tsv");

  auto pair_detail = [](const std::optional<double>& x, const char* xn,
                        const std::optional<double>& y, const char* yn) {
    return std::string(xn) + "=" + fmt_opt(x) + " " + yn + "=" + fmt_opt(y);
  };
  std::string checks;
  checks += "check\tstatus\tdetail\n";
  checks += check_row("far_pyramid_gt_fused", res.far_pyramid_gt_fused,
                      pair_detail(res.pyramid.median_far, "pyramid", res.fused.median_far,
                                  "fused"));
  checks += check_row("pod_fused_ge_inputs", res.pod_fused_ge_inputs,
                      "fused=" + fmt_opt(res.fused.median_pod) +
                          " input_a=" + fmt_opt(res.input_a.median_pod) +
                          " input_b=" + fmt_opt(res.input_b.median_pod));
  checks += check_row("ts_fused_ge_inputs", res.ts_fused_ge_inputs,
                      "fused=" + fmt_opt(res.fused.median_ts) +
                          " input_a=" + fmt_opt(res.input_a.median_ts) +
                          " input_b=" + fmt_opt(res.input_b.median_ts));
  checks += check_row("ks_fused_lt_pyramid", res.ks_fused_lt_pyramid,
                      pair_detail(res.ks_fused ? std::optional<double>(res.ks_fused->statistic)
                                               : std::nullopt,
                                  "fused",
                                  res.ks_pyramid ? std::optional<double>(res.ks_pyramid->statistic)
                                                 : std::nullopt,
                                  "pyramid"));
  checks += check_row("missing_set_is_input_intersection", res.missing_contract_all_pairs,
                      "pairs=" + std::to_string(res.accepted));
  checks += "ks_fused_reject_at_alpha\tNOTE\treject=" +
            std::string(res.ks_fused && res.ks_fused->reject ? "true" : "false") +
            " alpha=" + format_double(cfg.ks_alpha) + "\n";
  write_text_atomic(checks, dir / "checks.tsv");

  json manifest;
  manifest["command"] = "reproduce";
  manifest["config"] = {{"seed", f.seed},
                        {"pairs", f.pairs},
                        {"threads", f.threads},
                        {"coverage", cfg.coverage_fraction},
                        {"noise_sigma", cfg.noise_sigma},
                        {"swath", "band"},
                        {"event_threshold", cfg.event_threshold},
                        {"alpha", cfg.ks_alpha},
                        {"levels", cfg.fusion.levels},
                        {"orientations", cfg.fusion.orientations},
                        {"inner_depth", cfg.fusion.inner_depth}};
  manifest["pairs_requested"] = res.requested;
  manifest["pairs_accepted"] = res.accepted;
  manifest["outputs"] = {"pair_scores.tsv", "summary.tsv", "score_cdf.tsv", "intensity_cdf.tsv",
                         "intensity_pdf.tsv", "ks.tsv", "checks.tsv"};
  write_manifest(dir, manifest);

  out << checks;
  out << "scored " << res.accepted << " of " << res.requested << " pair(s) -> " << f.out_dir
      << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"fuse gap-ridden gridded rainfall products and verify the result"};
  app.name("gapfuse");
  app.require_subcommand(1);

  FuseFlags fuse;
  CLI::App* fuse_cmd = app.add_subcommand("fuse", "fuse two grids into one product");
  fuse_cmd->add_option("input_a", fuse.input_a, "first input grid")->required();
  fuse_cmd->add_option("input_b", fuse.input_b, "second input grid")->required();
  fuse_cmd->add_option("output", fuse.output, "output grid path")->required();
  fuse_cmd->add_option("--levels", fuse.levels, "pyramid levels")->capture_default_str();
  fuse_cmd->add_option("--orientations", fuse.orientations, "oriented bands per level")
      ->capture_default_str();
  fuse_cmd->add_option("--inner-depth", fuse.inner_depth, "per-subband merge depth")
      ->capture_default_str();
  fuse_cmd->add_option("--threshold", fuse.threshold, "rain-support threshold (mm/hr)")
      ->capture_default_str();
  fuse_cmd->add_option("--method", fuse.method, "product type")
      ->check(CLI::IsMember({"fused", "interp", "pyramid"}))
      ->capture_default_str();
  fuse_cmd->add_option("--fill", fuse.fill, "missing-pixel fill before the transform")
      ->check(CLI::IsMember({"zero", "cross"}))
      ->capture_default_str();

  EvalFlags eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score products against a reference grid");
  eval_cmd->add_option("truth", eval.truth, "reference grid")->required();
  eval_cmd->add_option("predictions", eval.preds, "product grids to score")->required();
  eval_cmd->add_option("--out", eval.out_dir, "report directory")->required();
  eval_cmd->add_option("--alpha", eval.alpha, "KS significance level")->capture_default_str();
  eval_cmd->add_option("--threshold", eval.threshold, "rain event threshold (mm/hr)")
      ->capture_default_str();
  eval_cmd->add_option("--bin-width", eval.bin_width, "intensity histogram bin width (mm/hr)")
      ->capture_default_str();

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate synthetic truth/observation pairs");
  synth_cmd->add_option("out_dir", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--pairs", synth.pairs, "number of pairs")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "base seed")->capture_default_str();
  synth_cmd->add_option("--width", synth.width, "grid width")->capture_default_str();
  synth_cmd->add_option("--height", synth.height, "grid height")->capture_default_str();
  synth_cmd->add_option("--cell-count", synth.cell_count, "expected rain cells per scene")
      ->capture_default_str();
  synth_cmd->add_option("--cell-scale", synth.cell_scale, "cell size in pixels")
      ->capture_default_str();
  synth_cmd->add_option("--intensity-scale", synth.intensity_scale, "median peak intensity")
      ->capture_default_str();
  synth_cmd->add_option("--wet-fraction", synth.wet_fraction, "target wet pixel fraction")
      ->capture_default_str();
  synth_cmd->add_option("--swath", synth.swath, "observation footprint kind")
      ->check(CLI::IsMember({"band", "disk", "blocks"}))
      ->capture_default_str();
  synth_cmd->add_option("--coverage", synth.coverage, "valid fraction per observation")
      ->capture_default_str();
  synth_cmd->add_option("--noise-sigma", synth.noise_sigma, "multiplicative log-noise std")
      ->capture_default_str();
  CLI::Option* angle_opt =
      synth_cmd->add_option("--angle", synth.angle, "band angle in degrees (default: random)");

  ReproduceFlags rep;
  CLI::App* rep_cmd =
      app.add_subcommand("reproduce", "run the default synthetic ensemble comparison");
  rep_cmd->add_option("out_dir", rep.out_dir, "report directory")->required();
  rep_cmd->add_option("--seed", rep.seed, "base seed")->capture_default_str();
  rep_cmd->add_option("--pairs", rep.pairs, "ensemble size")->capture_default_str();
  rep_cmd->add_option("--threads", rep.threads, "worker cap (0 = auto)")->capture_default_str();

  int rc = 0;
  fuse_cmd->callback([&] { rc = do_fuse(fuse, out); });
  eval_cmd->callback([&] { rc = do_eval(eval, out); });
  synth_cmd->callback([&] {
    synth.angle_set = angle_opt->count() > 0;
    rc = do_synth(synth, out);
  });
  rep_cmd->callback([&] { rc = do_reproduce(rep, out); });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}

}  // namespace gapfuse::cli
