#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gapfuse/compose.hpp"
#include "gapfuse/ensemble.hpp"
#include "gapfuse/errors.hpp"
#include "gapfuse/grid.hpp"
#include "gapfuse/io.hpp"
#include "gapfuse/synth.hpp"
#include "gapfuse/verify.hpp"

namespace py = pybind11;
using namespace gapfuse;

namespace {

using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

// 2D float array with NaN marking missing pixels <-> RainGrid.
RainGrid grid_from_array(const DoubleArray& arr, double cell_size) {
  if (arr.ndim() != 2) throw ParamError("expected a 2D array of rain intensities");
  GridMeta meta;
  meta.height = static_cast<int>(arr.shape(0));
  meta.width = static_cast<int>(arr.shape(1));
  meta.cell_size_deg = cell_size;
  auto r = arr.unchecked<2>();
  std::vector<double> values(meta.pixel_count());
  Mask mask(meta.pixel_count());
  std::size_t k = 0;
  for (py::ssize_t i = 0; i < arr.shape(0); ++i) {
    for (py::ssize_t j = 0; j < arr.shape(1); ++j, ++k) {
      double v = r(i, j);
      if (std::isnan(v)) {
        values[k] = 0.0;
        mask[k] = 0;
      } else {
        values[k] = v;
        mask[k] = 1;
      }
    }
  }
  return RainGrid(meta, std::move(values), std::move(mask));
}

py::array_t<double> array_from_grid(const RainGrid& g) {
  py::array_t<double> out({g.height(), g.width()});
  auto w = out.mutable_unchecked<2>();
  std::size_t k = 0;
  for (int i = 0; i < g.height(); ++i) {
    for (int j = 0; j < g.width(); ++j, ++k) {
      w(i, j) = g.valid_at(k) ? g.value_at(k) : std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

std::vector<double> samples_from_array(const DoubleArray& arr, const char* name) {
  if (arr.ndim() != 1) throw ParamError(std::string(name) + " must be a 1D array");
  auto r = arr.unchecked<1>();
  std::vector<double> v(static_cast<std::size_t>(arr.shape(0)));
  for (py::ssize_t i = 0; i < arr.shape(0); ++i) v[i] = r(i);
  return v;
}

FusionConfig make_config(int levels, int orientations, int inner_depth, double threshold,
                         const std::string& fill) {
  FusionConfig cfg;
  cfg.levels = levels;
  cfg.orientations = orientations;
  cfg.inner_depth = inner_depth;
  cfg.rain_threshold = threshold;
  if (fill == "cross") {
    cfg.missing_fill = MissingFill::CrossFill;
  } else if (fill == "zero") {
    cfg.missing_fill = MissingFill::Zero;
  } else {
    throw ParamError("fill must be 'zero' or 'cross'");
  }
  return cfg;
}

SwathKind kind_from_name(const std::string& name) {
  if (name == "band") return SwathKind::Band;
  if (name == "disk") return SwathKind::Disk;
  if (name == "blocks") return SwathKind::RandomBlocks;
  throw ParamError("swath must be 'band', 'disk' or 'blocks'");
}

py::array_t<double> py_fuse(const DoubleArray& a, const DoubleArray& b, int levels,
                            int orientations, int inner_depth, double threshold,
                            const std::string& fill, const std::string& method,
                            double cell_size) {
  RainGrid ga = grid_from_array(a, cell_size);
  RainGrid gb = grid_from_array(b, cell_size);
  FusionConfig cfg = make_config(levels, orientations, inner_depth, threshold, fill);
  if (method == "interp") return array_from_grid(baseline_interpolation(ga, gb));
  if (method == "pyramid") return array_from_grid(baseline_pyramid(ga, gb, cfg));
  if (method != "fused") throw ParamError("method must be 'fused', 'interp' or 'pyramid'");
  return array_from_grid(run_pipeline(ga, gb, cfg));
}

py::array_t<double> py_generate_truth(std::uint64_t seed, int width, int height,
                                      double cell_count, double cell_scale,
                                      double intensity_scale, double wet_fraction) {
  SceneParams p;
  p.seed = seed;
  p.width = width;
  p.height = height;
  p.cell_count = cell_count;
  p.cell_scale = cell_scale;
  p.intensity_scale = intensity_scale;
  p.wet_fraction_target = wet_fraction;
  return array_from_grid(gen_truth(p));
}

py::array_t<double> py_observe(const DoubleArray& truth, std::uint64_t seed,
                               const std::string& swath, double coverage, double angle,
                               double noise_sigma, double cell_size) {
  SwathSpec s;
  s.kind = kind_from_name(swath);
  s.coverage_fraction = coverage;
  s.angle_deg = angle;
  s.noise_sigma = noise_sigma;
  s.seed = seed;
  return array_from_grid(observe(grid_from_array(truth, cell_size), s));
}

std::optional<py::tuple> py_generate_pair(std::uint64_t seed, int index, int width, int height,
                                          double cell_count, double cell_scale,
                                          double intensity_scale, double wet_fraction,
                                          const std::string& swath, double coverage,
                                          double noise_sigma, std::optional<double> angle) {
  EnsembleConfig cfg;
  cfg.base_seed = seed;
  cfg.scene.width = width;
  cfg.scene.height = height;
  cfg.scene.cell_count = cell_count;
  cfg.scene.cell_scale = cell_scale;
  cfg.scene.intensity_scale = intensity_scale;
  cfg.scene.wet_fraction_target = wet_fraction;
  cfg.swath_kind = kind_from_name(swath);
  cfg.coverage_fraction = coverage;
  cfg.noise_sigma = noise_sigma;
  cfg.fixed_angle_deg = angle;
  PairInputs in = derive_pair_inputs(cfg, index);
  std::optional<PairSample> sample = gen_pair(in.scene, in.swath_a, in.swath_b);
  if (!sample) return std::nullopt;
  return py::make_tuple(array_from_grid(sample->truth), array_from_grid(sample->a),
                        array_from_grid(sample->b));
}

py::dict py_detection_scores(const DoubleArray& truth, const DoubleArray& pred, double threshold,
                             bool missing_as_zero, double cell_size) {
  RainGrid gt = grid_from_array(truth, cell_size);
  RainGrid gp = grid_from_array(pred, cell_size);
  if (missing_as_zero) gp = on_truth_domain(gp);
  ContingencyTable t = contingency(gt, gp, threshold);
  DetectionScores s = detection_scores(t);
  py::dict d;
  d["hits"] = t.hits;
  d["misses"] = t.misses;
  d["false_alarms"] = t.false_alarms;
  d["correct_negatives"] = t.correct_negatives;
  d["pod"] = s.pod;
  d["far"] = s.far;
  d["ts"] = s.ts;
  return d;
}

py::dict py_ks_test(const DoubleArray& x, const DoubleArray& y, double alpha) {
  KsResult r = ks_two_sample(samples_from_array(x, "x"), samples_from_array(y, "y"), alpha);
  py::dict d;
  d["statistic"] = r.statistic;
  d["critical"] = r.critical;
  d["alpha"] = r.alpha;
  d["reject"] = r.reject;
  return d;
}

py::tuple py_read_grid(const std::string& path) {
  RainGrid g = read_grid(path);
  return py::make_tuple(array_from_grid(g), g.meta().cell_size_deg);
}

void py_write_grid(const std::string& path, const DoubleArray& arr, double cell_size) {
  write_grid(grid_from_array(arr, cell_size), path);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gap-aware fusion of gridded rainfall rasters";

  m.def("fuse", &py_fuse, py::arg("a"), py::arg("b"), py::kw_only(), py::arg("levels") = 4,
        py::arg("orientations") = 16, py::arg("inner_depth") = 2, py::arg("threshold") = 0.0,
        py::arg("fill") = "zero", py::arg("method") = "fused", py::arg("cell_size") = 0.25,
        "Fuse two gappy rain rasters (2D arrays, NaN = missing) into one product.\n"
        "method 'fused' runs the full pipeline; 'interp' and 'pyramid' are the\n"
        "reference methods it is compared against.");

  m.def("generate_truth", &py_generate_truth, py::arg("seed"), py::kw_only(),
        py::arg("width") = 64, py::arg("height") = 64, py::arg("cell_count") = 6.0,
        py::arg("cell_scale") = 6.0, py::arg("intensity_scale") = 4.0,
        py::arg("wet_fraction") = 0.3,
        "Gap-free synthetic rain scene as a 2D array.");

  m.def("observe", &py_observe, py::arg("truth"), py::kw_only(), py::arg("seed"),
        py::arg("swath") = "band", py::arg("coverage") = 0.6, py::arg("angle") = 0.0,
        py::arg("noise_sigma") = 0.25, py::arg("cell_size") = 0.25,
        "Satellite-style view of a scene: swath-shaped gaps plus multiplicative noise.");

  m.def("generate_pair", &py_generate_pair, py::arg("seed"), py::kw_only(), py::arg("index") = 0,
        py::arg("width") = 64, py::arg("height") = 64, py::arg("cell_count") = 6.0,
        py::arg("cell_scale") = 6.0, py::arg("intensity_scale") = 4.0,
        py::arg("wet_fraction") = 0.3, py::arg("swath") = "band", py::arg("coverage") = 0.6,
        py::arg("noise_sigma") = 0.25, py::arg("angle") = py::none(),
        "One (truth, a, b) observation pair, or None when a view has too few\n"
        "valid pixels. Same seed and index always give the same pair.");

  m.def("detection_scores", &py_detection_scores, py::arg("truth"), py::arg("pred"),
        py::kw_only(), py::arg("threshold") = 0.0, py::arg("missing_as_zero") = false,
        py::arg("cell_size") = 0.25,
        "Contingency counts and POD/FAR/TS of pred against truth. With\n"
        "missing_as_zero, gaps in pred count as no-detection instead of\n"
        "shrinking the scored region. Undefined ratios come back as None.");

  m.def("ks_test", &py_ks_test, py::arg("x"), py::arg("y"), py::kw_only(),
        py::arg("alpha") = 0.05,
        "Two-sample Kolmogorov-Smirnov test on 1D samples.");

  m.def("read_grid", &py_read_grid, py::arg("path"),
        "Read a grid file; returns (values, cell_size) with NaN for missing pixels.");

  m.def("write_grid", &py_write_grid, py::arg("path"), py::arg("values"), py::kw_only(),
        py::arg("cell_size") = 0.25,
        "Write a 2D array (NaN = missing) as a grid file.");
}
