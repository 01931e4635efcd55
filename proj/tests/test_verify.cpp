#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gapfuse/errors.hpp"
#include "gapfuse/verify.hpp"
#include "helpers.hpp"

using namespace gapfuse;
using namespace gapfuse::testhelp;

TEST_CASE("contingency classifies jointly valid pixels") {
  std::mt19937 rng(11);

  SUBCASE("a perfect prediction has no misses and no false alarms") {
    RainGrid x = random_rain_grid(8, 8, rng, 0.2);
    ContingencyTable t = contingency(x, x, 0.0);
    CHECK(t.misses == 0);
    CHECK(t.false_alarms == 0);
    CHECK(t.total() == valid_pixel_count(x));
  }

  SUBCASE("all rain against all dry is all misses") {
    GridMeta m{10, 1, 0.25, {}, {}};
    RainGrid truth = RainGrid::constant(m, 3.0);
    RainGrid pred = RainGrid::constant(m, 0.0);
    ContingencyTable t = contingency(truth, pred, 0.0);
    CHECK(t.misses == 10);
    CHECK(t.hits == 0);
    CHECK(t.false_alarms == 0);
    CHECK(t.correct_negatives == 0);
  }

  SUBCASE("random binary pair matches the per-pixel oracle") {
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 10; ++trial) {
      GridMeta m{16, 16, 0.25, {}, {}};
      std::vector<double> tv(256), pv(256);
      Mask tm(256), pm(256);
      for (std::size_t i = 0; i < 256; ++i) {
        tv[i] = coin(rng) ? 1.0 : 0.0;
        pv[i] = coin(rng) ? 1.0 : 0.0;
        tm[i] = coin(rng);
        pm[i] = coin(rng);
        if (!tm[i]) tv[i] = 0.0;
        if (!pm[i]) pv[i] = 0.0;
      }
      RainGrid truth(m, tv, tm);
      RainGrid pred(m, pv, pm);
      ContingencyTable t = contingency(truth, pred, 0.0);

      ContingencyTable oracle;
      for (std::size_t i = 0; i < 256; ++i) {
        if (!tm[i] || !pm[i]) continue;
        bool obs = tv[i] > 0.0, det = pv[i] > 0.0;
        if (obs && det) ++oracle.hits;
        if (obs && !det) ++oracle.misses;
        if (!obs && det) ++oracle.false_alarms;
        if (!obs && !det) ++oracle.correct_negatives;
      }
      CHECK(t.hits == oracle.hits);
      CHECK(t.misses == oracle.misses);
      CHECK(t.false_alarms == oracle.false_alarms);
      CHECK(t.correct_negatives == oracle.correct_negatives);
    }
  }

  SUBCASE("dimension mismatch is rejected") {
    RainGrid a = random_rain_grid(8, 8, rng, 0.0);
    RainGrid b = random_rain_grid(8, 4, rng, 0.0);
    CHECK_THROWS_AS(contingency(a, b, 0.0), ShapeMismatchError);
  }
}

TEST_CASE("detection scores follow the count ratios and signal empty denominators") {
  CHECK(pod({3, 1, 0, 0}) == doctest::Approx(0.75));
  CHECK(pod({0, 5, 0, 0}) == doctest::Approx(0.0));
  CHECK(!pod({0, 0, 7, 9}).has_value());

  CHECK(far({3, 0, 1, 0}) == doctest::Approx(0.25));
  CHECK(far({4, 2, 0, 0}) == doctest::Approx(0.0));
  CHECK(!far({0, 6, 0, 9}).has_value());

  CHECK(ts({2, 1, 1, 0}) == doctest::Approx(0.5));
  CHECK(ts({5, 0, 0, 3}) == doctest::Approx(1.0));
  CHECK(!ts({0, 0, 0, 11}).has_value());

  SUBCASE("TS never exceeds POD on random tables") {
    std::mt19937 rng(13);
    std::uniform_int_distribution<int> count(0, 20);
    for (int trial = 0; trial < 200; ++trial) {
      ContingencyTable t{count(rng), count(rng), count(rng), count(rng)};
      auto p = pod(t);
      auto s = ts(t);
      if (p && s) CHECK(*s <= *p + 1e-15);
    }
  }
}

TEST_CASE("empirical distribution is a right-continuous step function") {
  EmpiricalDistribution d({3.0, 1.0, 2.0, 2.0});
  CHECK(d.cdf(0.999) == 0.0);
  CHECK(d.cdf(1.0) == doctest::Approx(0.25));
  CHECK(d.cdf(1.5) == doctest::Approx(0.25));
  CHECK(d.cdf(2.0) == doctest::Approx(0.75));  // both ties counted at the jump
  CHECK(d.cdf(3.0) == 1.0);
  CHECK(d.cdf(100.0) == 1.0);
  CHECK(std::is_sorted(d.samples().begin(), d.samples().end()));
  CHECK_THROWS_AS(EmpiricalDistribution({}), ParamError);
}

TEST_CASE("two-sample KS statistic and decision") {
  SUBCASE("identical samples give D = 0") {
    std::vector<double> a{1.0, 2.0, 3.0};
    KsResult r = ks_two_sample(a, a, 0.05);
    CHECK(r.statistic == 0.0);
    CHECK(!r.reject);
  }

  SUBCASE("disjoint supports give D = 1") {
    std::vector<double> a{0.0, 0.0, 0.0, 0.0};
    std::vector<double> b{1.0, 1.0, 1.0, 1.0};
    KsResult r = ks_two_sample(a, b, 0.05);
    CHECK(r.statistic == doctest::Approx(1.0));
    CHECK(r.reject);
  }

  SUBCASE("statistic matches a double-loop supremum oracle") {
    std::mt19937 rng(29);
    std::normal_distribution<double> base(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<double> a(50), b(50);
      double shift = (trial % 2 == 0) ? 0.0 : 1.2;
      for (auto& v : a) v = base(rng);
      for (auto& v : b) v = base(rng) + shift;

      KsResult r = ks_two_sample(a, b, 0.05);

      double oracle = 0.0;
      std::vector<double> pts = a;
      pts.insert(pts.end(), b.begin(), b.end());
      for (double x : pts) {
        double ca = 0.0, cb = 0.0;
        for (double v : a) ca += v <= x ? 1.0 : 0.0;
        for (double v : b) cb += v <= x ? 1.0 : 0.0;
        oracle = std::max(oracle, std::abs(ca / a.size() - cb / b.size()));
      }
      CHECK(r.statistic == doctest::Approx(oracle).epsilon(1e-12));

      // 1.358 * sqrt((50+50)/(50*50)) = 0.2716 at the 5% level
      CHECK(r.critical == doctest::Approx(0.27162).epsilon(1e-3));
      CHECK(r.reject == (r.statistic > r.critical));
    }
  }

  SUBCASE("symmetric in its arguments") {
    std::mt19937 rng(31);
    std::normal_distribution<double> base;
    std::vector<double> a(30), b(45);
    for (auto& v : a) v = base(rng);
    for (auto& v : b) v = base(rng) * 2.0;
    KsResult ab = ks_two_sample(a, b, 0.05);
    KsResult ba = ks_two_sample(b, a, 0.05);
    CHECK(ab.statistic == doctest::Approx(ba.statistic).epsilon(1e-15));
    CHECK(ab.reject == ba.reject);
  }

  SUBCASE("invariant under a strictly increasing transform") {
    std::mt19937 rng(37);
    std::exponential_distribution<double> base(1.0);
    std::vector<double> a(40), b(25);
    for (auto& v : a) v = base(rng);
    for (auto& v : b) v = base(rng) * 1.5;
    KsResult plain = ks_two_sample(a, b, 0.05);
    auto warp = [](double x) { return std::log1p(x) * 3.0; };
    for (auto& v : a) v = warp(v);
    for (auto& v : b) v = warp(v);
    KsResult warped = ks_two_sample(a, b, 0.05);
    CHECK(plain.statistic == doctest::Approx(warped.statistic).epsilon(1e-15));
    CHECK(plain.reject == warped.reject);
  }

  SUBCASE("empty inputs are rejected") {
    std::vector<double> a{1.0};
    std::vector<double> none;
    CHECK_THROWS_AS(ks_two_sample(a, none, 0.05), ParamError);
    CHECK_THROWS_AS(ks_two_sample(none, a, 0.05), ParamError);
  }
}

TEST_CASE("intensity_samples gathers masked pixels in pixel order") {
  std::mt19937 rng(41);
  GridMeta m{8, 8, 0.25, {}, {}};

  SUBCASE("empty mask gives empty lists") {
    std::vector<RainGrid> grids{random_rain_grid(8, 8, rng, 0.0),
                                random_rain_grid(8, 8, rng, 0.0)};
    auto lists = intensity_samples(grids, Mask(64, 0));
    REQUIRE(lists.size() == 2);
    CHECK(lists[0].empty());
    CHECK(lists[1].empty());
  }

  SUBCASE("single-pixel mask gives one sample per grid") {
    std::vector<RainGrid> grids{random_rain_grid(8, 8, rng, 0.0),
                                random_rain_grid(8, 8, rng, 0.0)};
    Mask mask(64, 0);
    mask[17] = 1;
    auto lists = intensity_samples(grids, mask);
    CHECK(lists[0] == std::vector<double>{grids[0].value_at(17)});
    CHECK(lists[1] == std::vector<double>{grids[1].value_at(17)});
  }

  SUBCASE("random grids match a gather oracle over the common mask") {
    std::vector<RainGrid> grids{random_rain_grid(8, 8, rng, 0.3),
                                random_rain_grid(8, 8, rng, 0.3),
                                random_rain_grid(8, 8, rng, 0.3)};
    Mask mask = common_valid_mask(grids);
    auto lists = intensity_samples(grids, mask);
    for (std::size_t gi = 0; gi < grids.size(); ++gi) {
      std::vector<double> expect;
      for (std::size_t i = 0; i < 64; ++i) {
        if (mask[i]) expect.push_back(grids[gi].value_at(i));
      }
      CHECK(lists[gi] == expect);
    }
  }

  SUBCASE("a mask reaching into missing data is rejected") {
    std::vector<RainGrid> grids{RainGrid::all_missing(m)};
    Mask mask(64, 0);
    mask[0] = 1;
    CHECK_THROWS_AS(intensity_samples(grids, mask), ParamError);
  }
}

TEST_CASE("score_cdf drops undefined scores and reports the count") {
  SUBCASE("a lone score is a unit step") {
    std::vector<std::optional<double>> scores{0.5};
    ScoreCdf s = score_cdf(scores);
    CHECK(s.excluded == 0);
    CHECK(s.distribution.cdf(0.49) == 0.0);
    CHECK(s.distribution.cdf(0.5) == 1.0);
  }

  SUBCASE("two extremes give a half step") {
    std::vector<std::optional<double>> scores{0.0, 1.0};
    ScoreCdf s = score_cdf(scores);
    CHECK(s.distribution.cdf(0.0) == doctest::Approx(0.5));
    CHECK(s.distribution.cdf(0.999) == doctest::Approx(0.5));
    CHECK(s.distribution.cdf(1.0) == 1.0);
  }

  SUBCASE("random scores match a sort-and-rank oracle") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::optional<double>> scores;
    std::vector<double> defined;
    for (int i = 0; i < 50; ++i) {
      if (i % 7 == 3) {
        scores.emplace_back(std::nullopt);
      } else {
        double v = u(rng);
        scores.emplace_back(v);
        defined.push_back(v);
      }
    }
    ScoreCdf s = score_cdf(scores);
    CHECK(s.excluded == 7);  // i = 3, 10, ..., 45
    std::sort(defined.begin(), defined.end());
    for (std::size_t r = 0; r < defined.size(); ++r) {
      double expect = static_cast<double>(r + 1) / defined.size();
      CHECK(s.distribution.cdf(defined[r]) == doctest::Approx(expect));
    }
  }

  SUBCASE("an all-undefined ensemble is an error") {
    std::vector<std::optional<double>> scores{std::nullopt, std::nullopt};
    CHECK_THROWS_AS(score_cdf(scores), ParamError);
  }
}

TEST_CASE("histogram bins cover the sample range with fixed width") {
  std::vector<double> samples{0.1, 0.4, 0.6, 1.2, 2.4};
  Histogram h = histogram(samples, 0.5);
  CHECK(h.origin == 0.0);
  REQUIRE(h.counts.size() == 5);
  CHECK(h.counts[0] == 2);  // [0, 0.5)
  CHECK(h.counts[1] == 1);  // [0.5, 1)
  CHECK(h.counts[2] == 1);  // [1, 1.5)
  CHECK(h.counts[3] == 0);
  CHECK(h.counts[4] == 1);  // [2, 2.5)

  double mass = 0.0;
  for (double d : h.density) mass += d * h.bin_width;
  CHECK(mass == doctest::Approx(1.0));

  CHECK_THROWS_AS(histogram(std::vector<double>{}, 0.5), ParamError);
  CHECK_THROWS_AS(histogram(samples, 0.0), ParamError);
}
