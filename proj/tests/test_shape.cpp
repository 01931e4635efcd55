#include <doctest.h>

#include <random>

#include "gapfuse/errors.hpp"
#include "gapfuse/shape.hpp"
#include "helpers.hpp"

using namespace gapfuse;
using namespace gapfuse::testhelp;

TEST_CASE("interpolate_pair") {
  std::mt19937 rng(41);

  SUBCASE("average of equals is the input") {
    RainGrid x = random_rain_grid(8, 8, rng, 0.0);
    RainGrid out = interpolate_pair(x, x);
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK(out.valid_at(i));
      CHECK(out.value_at(i) == x.value_at(i));
    }
  }

  SUBCASE("a single-source pixel carries through") {
    GridMeta m{1, 1, 0.25, {}, {}};
    RainGrid a(m, {4.0}, {1});
    RainGrid b(m, {0.0}, {0});
    RainGrid out = interpolate_pair(a, b);
    CHECK(out.valid_at(0));
    CHECK(out.value_at(0) == 4.0);
  }

  SUBCASE("random gappy pairs match the case-analysis oracle") {
    for (int trial = 0; trial < 20; ++trial) {
      RainGrid a = random_rain_grid(8, 8, rng, 0.4);
      RainGrid b = random_rain_grid(8, 8, rng, 0.4);
      RainGrid out = interpolate_pair(a, b);
      for (std::size_t i = 0; i < 64; ++i) {
        if (a.valid_at(i) && b.valid_at(i)) {
          CHECK(out.valid_at(i));
          CHECK(out.value_at(i) == doctest::Approx(0.5 * (a.value_at(i) + b.value_at(i))));
        } else if (a.valid_at(i)) {
          CHECK(out.valid_at(i));
          CHECK(out.value_at(i) == a.value_at(i));
        } else if (b.valid_at(i)) {
          CHECK(out.valid_at(i));
          CHECK(out.value_at(i) == b.value_at(i));
        } else {
          CHECK(!out.valid_at(i));
        }
      }
    }
  }

  SUBCASE("dimension mismatch is rejected") {
    RainGrid a = random_rain_grid(8, 8, rng, 0.0);
    RainGrid b = random_rain_grid(4, 8, rng, 0.0);
    CHECK_THROWS_AS(interpolate_pair(a, b), ShapeMismatchError);
  }
}

TEST_CASE("produce_shape") {
  std::mt19937 rng(43);
  GridMeta m{8, 8, 0.25, {}, {}};

  SUBCASE("both-missing pixels are coded missing") {
    RainGrid gone = RainGrid::all_missing(m);
    ShapeGrid s = produce_shape(gone, gone, 0.0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(s.code_at(i) == -1);
  }

  SUBCASE("dry inputs give an all-dry shape") {
    RainGrid dry = RainGrid::constant(m, 0.0);
    ShapeGrid s = produce_shape(dry, dry, 0.0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(s.code_at(i) == 0);
  }

  SUBCASE("mean above threshold marks rain support") {
    RainGrid a = RainGrid::constant(m, 2.0);
    RainGrid b = RainGrid::constant(m, 0.0);
    ShapeGrid s = produce_shape(a, b, 0.0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(s.code_at(i) == 1);  // mean 1 > 0
  }

  SUBCASE("threshold is strict") {
    RainGrid a = RainGrid::constant(m, 1.0);
    ShapeGrid s = produce_shape(a, a, 1.0);
    for (std::size_t i = 0; i < 64; ++i) CHECK(s.code_at(i) == 0);  // 1 > 1 is false
  }

  SUBCASE("symmetric in its arguments") {
    for (int trial = 0; trial < 10; ++trial) {
      RainGrid a = random_rain_grid(8, 8, rng, 0.3);
      RainGrid b = random_rain_grid(8, 8, rng, 0.3);
      ShapeGrid ab = produce_shape(a, b, 0.5);
      ShapeGrid ba = produce_shape(b, a, 0.5);
      CHECK(ab.codes() == ba.codes());
    }
  }

  SUBCASE("raising a valid value never turns rain support off") {
    RainGrid a = random_rain_grid(8, 8, rng, 0.3);
    RainGrid b = random_rain_grid(8, 8, rng, 0.3);
    ShapeGrid before = produce_shape(a, b, 0.5);

    std::vector<double> raised(a.values().begin(), a.values().end());
    for (std::size_t i = 0; i < raised.size(); ++i) {
      if (a.valid_at(i)) raised[i] += 3.0;
    }
    ShapeGrid after = produce_shape(RainGrid(a.meta(), raised, a.valid()), b, 0.5);
    for (std::size_t i = 0; i < 64; ++i) {
      if (before.code_at(i) == 1) CHECK(after.code_at(i) == 1);
    }
  }

  SUBCASE("missing codes appear exactly at both-missing pixels") {
    RainGrid a = random_rain_grid(8, 8, rng, 0.5);
    RainGrid b = random_rain_grid(8, 8, rng, 0.5);
    ShapeGrid s = produce_shape(a, b, 0.0);
    for (std::size_t i = 0; i < 64; ++i) {
      CHECK((s.code_at(i) == -1) == (!a.valid_at(i) && !b.valid_at(i)));
    }
  }

  SUBCASE("negative threshold is rejected") {
    RainGrid a = RainGrid::constant(m, 0.0);
    CHECK_THROWS_AS(produce_shape(a, a, -0.1), ParamError);
  }
}
